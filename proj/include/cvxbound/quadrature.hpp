#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature on finite, semi-infinite and
// doubly infinite intervals.

#include <functional>
#include <span>

namespace cvxbound::quad {

using Integrand = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_panels = 4000;
};

/// Global adaptive integration over [a, b]. Breakpoints inside (a, b) start
/// as panel edges so that no panel straddles them.
Result integrate(const Integrand& f, double a, double b, const Options& opt,
                 std::span<const double> breaks = {});

/// Integral over [a, inf). The range [a, X0] is integrated directly; the rest
/// uses x = X0 + scale * (e^v - 1), with the cutoff in v grown (doubling the
/// x-extent each step) until a local-decay tail estimate falls below half the
/// tolerance. Throws NonConvergence if the cutoff overflows first.
Result integrate_to_infinity(const Integrand& f, double a, double scale, const Options& opt,
                             std::span<const double> breaks = {});

/// Integral over (-inf, inf), split at `center`.
Result integrate_real_line(const Integrand& f, double center, double scale, const Options& opt,
                           std::span<const double> breaks = {});

/// Integral over [lo, hi] where either end may be infinite.
Result integrate_interval(const Integrand& f, double lo, double hi, double center, double scale,
                          const Options& opt, std::span<const double> breaks = {});

}  // namespace cvxbound::quad
