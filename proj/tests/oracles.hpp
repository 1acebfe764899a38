#pragma once

// Reference computations for the tests, built on Boost.Math quadrature so
// they share no code with the library integrators.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace oracle {

/// int_a^inf h(y) dy, optionally split at a kink.
inline double tail_integral(const std::function<double(double)>& h, double a, std::optional<double> kink = {}) {
  boost::math::quadrature::exp_sinh<double> es;
  if (kink && *kink > a) {
    const double head =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(h, a, *kink, 15, 1e-14);
    return head + es.integrate(h, *kink, std::numeric_limits<double>::infinity(), 1e-13);
  }
  return es.integrate(h, a, std::numeric_limits<double>::infinity(), 1e-13);
}

/// int_x^inf (y - x)^(k-1) / (k-1)! h(y) dy for k >= 1; h(x) for k = 0.
inline double repeated_integral(const std::function<double(double)>& h, int k, double x,
                                std::optional<double> kink = {}) {
  if (k == 0) return h(x);
  const double fact = std::tgamma(static_cast<double>(k));
  return tail_integral([&](double y) { return std::pow(y - x, k - 1) / fact * h(y); }, x, kink);
}

/// int_a^b h(x) dx on a finite interval.
inline double finite_integral(const std::function<double(double)>& h, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(h, a, b, 20, 1e-13);
}

/// int_R h(x) dx, split at c.
inline double line_integral(const std::function<double(double)>& h, double c = 0.0) {
  const double right = tail_integral(h, c);
  const double left = tail_integral([&](double y) { return h(2.0 * c - y); }, c);
  return right + left;
}

/// Midpoint rule over [lo, hi]^2 with m cells per side.
inline double grid_integral_2d(const std::function<double(double, double)>& h, double lo, double hi, int m) {
  const double step = (hi - lo) / m;
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = lo + (i + 0.5) * step;
    for (int j = 0; j < m; ++j) s += h(x, lo + (j + 0.5) * step);
  }
  return s * step * step;
}

}  // namespace oracle
