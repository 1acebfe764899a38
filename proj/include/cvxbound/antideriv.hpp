#pragma once

// Repeated antiderivatives F_k of phi(psi(x)) and G_k of psi(x), normalized to
// vanish at infinity, so that (-1)^k d^k/dx^k F_k = phi(psi) and likewise for
// G_k. Closed forms are used where they exist; otherwise the k-fold integral
// is computed as one weighted integral with kernel (y-x)^(k-1)/(k-1)!.

#include <span>
#include <vector>

#include "cvxbound/model.hpp"

namespace cvxbound {

enum class Source { ClosedForm, Quadrature };

const char* to_string(Source s);

/// True when F_k has a closed form for this (functional, family) pair.
bool has_closed_form_f(const Functional& functional, const ConvexityFamily& family, int k);

/// Closed-form F_k(x). Throws NoClosedForm for unsupported pairs and
/// NonIntegrable when the required exponent condition fails.
double closed_form_f(const Functional& functional, const ConvexityFamily& family, int k, double x);

/// Value at b of the n-fold repeated integral of h over [b, inf):
///   int_b^inf (x-b)^(n-1)/(n-1)! h(x) dx   (n >= 1; n == 0 returns h(b)).
/// `scale` seeds the cutoff of the finite part; `breaks` are points where h is
/// not smooth. Throws NonConvergence if the absolute error cannot be brought
/// under tol.
double cauchy_repeated_integral(const ScalarFn& h, int n, double b, double tol, double scale = 1.0,
                                std::span<const double> breaks = {});

/// G_k(x) by closed form when available, by quadrature otherwise.
double antiderivative_g(const ConvexityFamily& family, int k, double x, double tol = 1e-11);

struct TableOptions {
  double tol = 1e-11;
  bool force_quadrature = false;
};

class AntiderivativeTable {
 public:
  AntiderivativeTable(Functional functional, ConvexityFamily family, int n, double f_max,
                      TableOptions options);

  double b() const { return b_; }
  int n() const { return n_; }
  double f_max() const { return f_max_; }
  double tol() const { return options_.tol; }
  const Functional& functional() const { return functional_; }
  const ConvexityFamily& family() const { return family_; }

  /// F_k(x) and G_k(x) for 0 <= k <= n and x >= b.
  double F(int k, double x) const;
  double G(int k, double x) const;

  /// Cached F_k(b) and G_k(b).
  double F_at_b(int k) const { return f_at_b_.at(k); }
  double G_at_b(int k) const { return g_at_b_.at(k); }

  Source f_source(int k) const { return f_source_.at(k); }
  Source g_source(int k) const { return g_source_.at(k); }
  bool all_closed_form() const;

 private:
  double quadrature_f(int k, double x) const;
  double quadrature_g(int k, double x) const;
  std::vector<double> kinks_after(double x) const;

  Functional functional_;
  ConvexityFamily family_;
  int n_;
  double f_max_;
  double b_;
  TableOptions options_;
  std::vector<Source> f_source_;
  std::vector<Source> g_source_;
  std::vector<double> f_at_b_;
  std::vector<double> g_at_b_;
};

/// Validates integrability for the pair at dimension n and builds the table.
AntiderivativeTable build_table(const Functional& functional, const ConvexityFamily& family, int n,
                                double f_max, TableOptions options = {});

}  // namespace cvxbound
