#include "cvxbound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "cvxbound/error.hpp"

namespace cvxbound::quad {
namespace {

// Kronrod abscissae and weights (15 points), Gauss weights (7 points).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

double eval_checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw NonConvergence("integrand is not finite at x=" + std::to_string(x));
  }
  return y;
}

Panel gk15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = eval_checked(f, center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = eval_checked(f, center - dx);
    fv2[j] = eval_checked(f, center + dx);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, result, err};
}

double target(const Options& opt, double value) {
  return std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
}

// |u(V)| / kappa where kappa is the local exponential decay rate of |u| at V.
double tail_estimate(const Integrand& u, double v) {
  constexpr double h = 0.5;
  const double u2 = std::abs(u(v));
  if (u2 == 0.0) return 0.0;
  const double u1 = std::abs(u(v - h));
  if (u1 == 0.0) return std::numeric_limits<double>::infinity();
  const double kappa = (std::log(u1) - std::log(u2)) / h;
  if (!(kappa > 0.05)) return std::numeric_limits<double>::infinity();
  return u2 / kappa;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opt,
                 std::span<const double> breaks) {
  Result out;
  if (a == b) return out;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> edges{a};
  std::vector<double> sorted(breaks.begin(), breaks.end());
  std::sort(sorted.begin(), sorted.end());
  for (double x : sorted) {
    if (x > edges.back() && x < b) edges.push_back(x);
  }
  edges.push_back(b);

  std::priority_queue<Panel> active;
  std::vector<Panel> frozen;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gk15(f, edges[i], edges[i + 1]);
    out.evaluations += 15;
    total += p.value;
    total_err += p.error;
    active.push(p);
  }

  int panels = static_cast<int>(active.size());
  while (total_err > target(opt, total) && !active.empty()) {
    if (panels >= opt.max_panels) {
      out.converged = false;
      break;
    }
    Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 1e-14 * std::max(1.0, std::abs(mid))) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++panels;
  }

  // Re-sum to shed accumulated drift from the incremental updates.
  double sum = 0.0, err = 0.0;
  for (const auto& p : frozen) {
    sum += p.value;
    err += p.error;
  }
  while (!active.empty()) {
    sum += active.top().value;
    err += active.top().error;
    active.pop();
  }
  out.value = sign * sum;
  out.abs_error = err;
  if (err > target(opt, sum)) out.converged = false;
  return out;
}

Result integrate_to_infinity(const Integrand& f, double a, double scale, const Options& opt,
                             std::span<const double> breaks) {
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  const double x0 = a + scale;
  std::vector<double> near, far;
  double extent = 16.0;
  for (double x : breaks) {
    if (!(x > a) || !std::isfinite(x)) continue;
    if (x <= x0) {
      near.push_back(x);
    } else {
      const double e = (x - x0) / scale;
      far.push_back(std::log1p(e));
      extent = std::max(extent, 2.0 * e);
    }
  }

  Options part = opt;
  part.abs_tol = opt.abs_tol / 4.0;
  Result finite = integrate(f, a, x0, part, near);

  const Integrand u = [&f, x0, scale](double v) {
    const double ev = std::exp(v);
    return f(x0 + scale * (ev - 1.0)) * scale * ev;
  };

  const double tol = target(opt, finite.value);
  double cutoff = std::log1p(extent);
  double tail = tail_estimate(u, cutoff);
  int doublings = 0;
  while (!(tail < tol / 2.0)) {
    if (++doublings > 1000 || !std::isfinite(std::log1p(2.0 * extent))) {
      throw NonConvergence("semi-infinite tail did not decay before the cutoff overflowed");
    }
    extent *= 2.0;
    cutoff = std::log1p(extent);
    tail = tail_estimate(u, cutoff);
  }

  Options tail_opt = opt;
  tail_opt.abs_tol = opt.abs_tol / 4.0;
  Result mapped = integrate(u, 0.0, cutoff, tail_opt, far);

  Result out;
  out.value = finite.value + mapped.value;
  out.abs_error = finite.abs_error + mapped.abs_error + tail;
  out.evaluations = finite.evaluations + mapped.evaluations;
  out.converged = finite.converged && mapped.converged;
  return out;
}

Result integrate_real_line(const Integrand& f, double center, double scale, const Options& opt,
                           std::span<const double> breaks) {
  Options half = opt;
  half.abs_tol = opt.abs_tol / 2.0;
  std::vector<double> right_breaks, left_breaks;
  for (double x : breaks) {
    if (x > center) right_breaks.push_back(x);
    if (x < center) left_breaks.push_back(2.0 * center - x);
  }
  Result right = integrate_to_infinity(f, center, scale, half, right_breaks);
  const Integrand reflected = [&f, center](double y) { return f(2.0 * center - y); };
  Result left = integrate_to_infinity(reflected, center, scale, half, left_breaks);
  return {right.value + left.value, right.abs_error + left.abs_error,
          right.evaluations + left.evaluations, right.converged && left.converged};
}

Result integrate_interval(const Integrand& f, double lo, double hi, double center, double scale,
                          const Options& opt, std::span<const double> breaks) {
  const bool lo_finite = std::isfinite(lo);
  const bool hi_finite = std::isfinite(hi);
  if (lo_finite && hi_finite) return integrate(f, lo, hi, opt, breaks);
  if (lo_finite) return integrate_to_infinity(f, lo, scale, opt, breaks);
  if (hi_finite) {
    std::vector<double> reflected_breaks;
    for (double x : breaks) reflected_breaks.push_back(-x);
    const Integrand reflected = [&f](double y) { return f(-y); };
    return integrate_to_infinity(reflected, -hi, scale, opt, reflected_breaks);
  }
  return integrate_real_line(f, center, scale, opt, breaks);
}

}  // namespace cvxbound::quad
