#include "cvxbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "cvxbound/antideriv.hpp"
#include "cvxbound/error.hpp"
#include "cvxbound/quadrature.hpp"
#include "cvxbound/sampling.hpp"

namespace cvxbound {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using PhiOfF = std::function<double(double)>;

double default_tol(int n) { return n == 1 ? 1e-8 : 1e-6; }

Method pick_method(const DensitySpec& spec, const Budget& budget) {
  if (budget.method && *budget.method != Method::ClosedForm) return *budget.method;
  return spec.dimension() <= 2 ? Method::Quadrature : Method::MonteCarlo;
}

// ---------------------------------------------------------------------------
// Line geometry for nested quadrature.

struct Line {
  double lo = -kInf;
  double hi = kInf;
  double center = 0.0;
  double scale = 1.0;
  double gmin = 0.0;
  std::vector<double> breaks;
  bool empty = false;
};

// g = g0 + (x - c)' P (x - c).
struct EllipticalView {
  Eigen::MatrixXd P;
  Eigen::VectorXd c;
};

class Geometry {
 public:
  explicit Geometry(const DensitySpec& spec) : spec_(spec), n_(spec.dimension()) {
    const auto& form = spec.form();
    if (const auto* q = std::get_if<QuadraticG>(&form)) {
      ell_ = EllipticalView{q->Q, q->center};
    } else if (std::holds_alternative<Gaussian>(form)) {
      ell_ = EllipticalView{0.5 * spec.precision(), Eigen::VectorXd::Zero(n_)};
    } else if (const auto* t = std::get_if<MultivariateT>(&form)) {
      const std::vector<double> zero(static_cast<std::size_t>(n_), 0.0);
      ell_ = EllipticalView{spec.g(zero) * spec.precision() / t->nu, Eigen::VectorXd::Zero(n_)};
    } else if (const auto* m = std::get_if<MaxAffineG>(&form)) {
      ma_ = m;
      for (const auto& p : m->pieces) max_slope_ = std::max(max_slope_, p.slope.norm());
    }
  }

  double decay(double g) const { return spec_.family().decay_scale(g); }

  double g2(double x1, double x2) const {
    const double x[2] = {x1, x2};
    return spec_.g(std::span<const double>(x, 2));
  }

  // Line through x1 (n = 2) or the axis itself (n = 1).
  Line inner(double x1) const {
    Line L;
    const auto& form = spec_.form();
    if (const auto* e = std::get_if<ExtremalLinear>(&form)) {
      if (n_ == 2 && x1 < 0.0) {
        L.empty = true;
        return L;
      }
      L.gmin = n_ == 2 ? e->b + e->lambda * x1 : e->b;
      L.lo = 0.0;
      L.center = 0.0;
      L.scale = decay(L.gmin) / e->lambda;
      return L;
    }
    if (ell_) {
      const auto& P = ell_->P;
      const auto& c = ell_->c;
      if (n_ == 1) {
        L.center = c[0];
        L.gmin = spec_.g(std::span<const double>(&L.center, 1));
        L.scale = std::sqrt(decay(L.gmin) / P(0, 0));
      } else {
        L.center = c[1] - P(1, 0) / P(1, 1) * (x1 - c[0]);
        L.gmin = g2(x1, L.center);
        L.scale = std::sqrt(decay(L.gmin) / P(1, 1));
      }
      return L;
    }
    if (ma_) {
      std::vector<std::pair<double, double>> lines;
      for (const auto& p : ma_->pieces) {
        if (n_ == 1) {
          lines.emplace_back(p.slope[0], p.intercept);
        } else {
          lines.emplace_back(p.slope[1], p.slope[0] * x1 + p.intercept);
        }
      }
      const Envelope1D env = upper_envelope(std::move(lines));
      std::size_t s = 0;
      while (s < env.lines.size() && env.lines[s].first < 0.0) ++s;
      if (s == 0 || s == env.lines.size()) throw InvalidArgument("max-affine slice is not coercive");
      L.center = env.breaks[s - 1];
      L.gmin = env.lines[s - 1].first * L.center + env.lines[s - 1].second;
      L.breaks = env.breaks;
      L.scale = decay(L.gmin) / max_slope_;
      return L;
    }
    throw Unsupported("no quadrature geometry for " + spec_.form_name());
  }

  Line outer() const {
    Line L;
    const auto& form = spec_.form();
    if (const auto* e = std::get_if<ExtremalLinear>(&form)) {
      L.lo = 0.0;
      L.center = 0.0;
      L.gmin = e->b;
      L.scale = decay(e->b) / e->lambda;
      return L;
    }
    if (ell_) {
      const auto& P = ell_->P;
      L.center = ell_->c[0];
      L.gmin = inner(L.center).gmin;
      const double p_eff = P(0, 0) - P(0, 1) * P(0, 1) / P(1, 1);
      L.scale = std::sqrt(decay(L.gmin) / p_eff);
      return L;
    }
    if (ma_) {
      L.center = spec_.mode()[0];
      L.gmin = inner(L.center).gmin;
      for (const auto& v : max_affine_vertices(*ma_)) L.breaks.push_back(v[0]);
      L.scale = decay(L.gmin) / max_slope_;
      return L;
    }
    throw Unsupported("no quadrature geometry for " + spec_.form_name());
  }

 private:
  const DensitySpec& spec_;
  int n_;
  std::optional<EllipticalView> ell_;
  const MaxAffineG* ma_ = nullptr;
  double max_slope_ = 0.0;
};

// Points where a convex function crosses `level`, searched outward from the
// line's center (its minimizer); appended to L.breaks.
void add_crossings(const std::function<double(double)>& gl, Line& L, double level) {
  if (!(L.gmin < level)) return;
  for (int dir : {1, -1}) {
    const double edge = dir > 0 ? L.hi : L.lo;
    if (edge == L.center) continue;
    double inside = L.center;
    double step = L.scale;
    double outside = 0.0;
    bool found = false;
    for (int k = 0; k < 2000; ++k) {
      const double x = L.center + dir * step;
      if (std::isfinite(edge) && dir * (x - edge) >= 0.0) {
        if (gl(edge) > level) {
          outside = edge;
          found = true;
        }
        break;
      }
      if (gl(x) > level) {
        outside = x;
        found = true;
        break;
      }
      inside = x;
      step *= 2.0;
    }
    if (!found) continue;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      (gl(mid) > level ? outside : inside) = mid;
    }
    L.breaks.push_back(0.5 * (inside + outside));
  }
}

quad::Result line_integral(const quad::Integrand& h, const Line& L, const quad::Options& opt) {
  if (L.empty || L.hi <= L.lo) return {};
  return quad::integrate_interval(h, L.lo, L.hi, L.center, L.scale, opt, L.breaks);
}

// int phi(f(x)) dx for n <= 2. `kink` is a density level where phi bends.
quad::Result quadrature_integral(const DensitySpec& spec, const PhiOfF& phi, std::optional<double> kink,
                                 double tol) {
  const int n = spec.dimension();
  if (const auto* box = std::get_if<UniformBox>(&spec.form())) {
    quad::Result r;
    r.value = std::pow(box->side, n) * phi(spec.f_max());
    return r;
  }
  if (n > 2) throw Unsupported("quadrature oracle supports dimension 1 and 2");

  const Geometry geo(spec);
  const auto& fam = spec.family();
  const std::optional<double> level =
      kink && *kink < spec.f_max() ? std::optional<double>(fam.psi_inv(*kink)) : std::nullopt;

  if (n == 1) {
    Line L = geo.inner(0.0);
    if (level) add_crossings([&](double x) { return spec.g(std::span<const double>(&x, 1)); }, L, *level);
    const quad::Integrand h = [&](double x) { return phi(spec.eval(std::span<const double>(&x, 1))); };
    quad::Options opt;
    opt.abs_tol = tol;
    opt.max_panels = 20000;
    return line_integral(h, L, opt);
  }

  Line O = geo.outer();
  if (level) add_crossings([&](double x1) { return geo.inner(x1).gmin; }, O, *level);

  bool inner_ok = true;
  const double f_max = spec.f_max();
  const quad::Integrand outer_h = [&](double x1) {
    Line L = geo.inner(x1);
    if (L.empty) return 0.0;
    // Scaled by the slice peak so the error summed over an infinite outer range stays finite.
    quad::Options in_opt;
    in_opt.abs_tol = 1e-3 * tol * std::max(fam.psi(L.gmin) / f_max, 1e-300);
    in_opt.rel_tol = 1e-11;
    in_opt.max_panels = 20000;
    if (level) add_crossings([&](double x2) { return geo.g2(x1, x2); }, L, *level);
    const quad::Integrand h = [&](double x2) {
      const double x[2] = {x1, x2};
      return phi(spec.eval(std::span<const double>(x, 2)));
    };
    const quad::Result r = line_integral(h, L, in_opt);
    inner_ok = inner_ok && r.converged;
    return r.value;
  };
  quad::Options out_opt;
  out_opt.abs_tol = tol;
  out_opt.max_panels = 20000;
  quad::Result r = line_integral(outer_h, O, out_opt);
  r.converged = r.converged && inner_ok;
  return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo.

// Draws (f(X_j), f(X_j) / q(X_j)) for X_j from the spec's sampler, split into
// per-worker streams and concatenated in worker order.
struct SampleCache {
  std::vector<double> f;
  std::vector<double> ratio;
  std::uint64_t seed = 0;
  int workers = 1;

  SampleCache(const DensitySpec& spec, const Budget& budget) : seed(budget.seed), workers(budget.workers) {
    if (budget.samples < 2) throw InvalidArgument("Monte Carlo needs at least 2 samples");
    if (workers < 1) throw InvalidArgument("worker count must be >= 1");
    const auto sampler = make_sampler(spec);
    const long long total = budget.samples;
    f.resize(static_cast<std::size_t>(total));
    ratio.resize(static_cast<std::size_t>(total));
    const auto run = [&](int w, long long begin, long long end) {
      Rng rng(stream_seed(seed, static_cast<std::uint64_t>(w)));
      std::vector<double> x(static_cast<std::size_t>(spec.dimension()));
      for (long long j = begin; j < end; ++j) {
        sampler->draw(rng, x);
        const double lf = spec.log_eval(x);
        const auto idx = static_cast<std::size_t>(j);
        f[idx] = std::exp(lf);
        ratio[idx] = sampler->exact() ? 1.0 : (std::isfinite(lf) ? std::exp(lf - sampler->log_q(x)) : 0.0);
      }
    };
    std::vector<std::thread> threads;
    long long begin = 0;
    for (int w = 0; w < workers; ++w) {
      const long long count = total / workers + (w < total % workers ? 1 : 0);
      if (w + 1 == workers) {
        run(w, begin, begin + count);
      } else {
        threads.emplace_back(run, w, begin, begin + count);
      }
      begin += count;
    }
    for (auto& t : threads) t.join();
  }

  // Mean and standard error of phi(f)/f * ratio.
  OracleEstimate estimate(const PhiOfF& phi) const {
    const std::size_t m = f.size();
    double mean = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double term = f[j] > 0.0 ? phi(f[j]) / f[j] * ratio[j] : 0.0;
      const double delta = term - mean;
      mean += delta / static_cast<double>(j + 1);
      m2 += delta * (term - mean);
    }
    OracleEstimate e;
    e.method = Method::MonteCarlo;
    e.value = mean;
    e.std_error = std::sqrt(m2 / static_cast<double>(m - 1) / static_cast<double>(m));
    e.error = e.std_error;
    e.sample_count = static_cast<long long>(m);
    e.seed = seed;
    e.workers = workers;
    e.converged = std::isfinite(mean);
    return e;
  }
};

OracleEstimate quadrature_estimate(const DensitySpec& spec, const PhiOfF& phi, std::optional<double> kink,
                                   double tol) {
  const quad::Result r = quadrature_integral(spec, phi, kink, tol);
  OracleEstimate e;
  e.method = Method::Quadrature;
  e.value = r.value;
  e.abs_tol = tol;
  e.error = r.abs_error;
  e.converged = r.converged;
  return e;
}

PhiOfF truncation_phi(double t) {
  return [t](double x) { return std::min(x, t); };
}

PhiOfF truncated_log_phi(double t) {
  return [t](double x) {
    const double m = std::min(x, t);
    return m > 0.0 ? -m * std::log(m) : 0.0;
  };
}

// Bisection in log t on a continuous nondecreasing mass function.
double bisect_threshold(const std::function<double(double)>& mass, double f_max, double gamma, double tol) {
  double hi = f_max;
  double lo = 0.5 * f_max;
  for (int k = 0; mass(lo) >= gamma; ++k) {
    hi = lo;
    lo *= 0.5;
    if (k > 2000) throw NonConvergence("threshold search found no lower bracket");
  }
  double best = hi;
  double best_dev = kInf;
  for (int k = 0; k < 200; ++k) {
    const double mid = std::sqrt(lo * hi);
    const double m = mass(mid);
    const double dev = std::abs(m - gamma);
    if (dev < best_dev) {
      best_dev = dev;
      best = mid;
    }
    if (dev <= tol) return mid;
    (m < gamma ? lo : hi) = mid;
    if (hi / lo - 1.0 < 1e-15) break;
  }
  if (best_dev > tol) {
    throw NonConvergence("threshold bisection stalled at |mass - gamma| = " + std::to_string(best_dev));
  }
  return best;
}

Eigen::MatrixXd swap_last(const Eigen::MatrixXd& m, int i) {
  Eigen::MatrixXd out = m;
  const int last = static_cast<int>(m.rows()) - 1;
  out.row(i).swap(out.row(last));
  out.col(i).swap(out.col(last));
  return out;
}

// The same density with coordinate i moved to the last position.
DensitySpec move_to_last(const DensitySpec& spec, int i) {
  const int last = spec.dimension() - 1;
  if (i == last) return spec;
  const auto& form = spec.form();
  if (const auto* q = std::get_if<QuadraticG>(&form)) {
    Eigen::VectorXd c = q->center;
    std::swap(c[i], c[last]);
    return make_quadratic(spec.family(), swap_last(q->Q, i), c, q->offset);
  }
  if (const auto* m = std::get_if<MaxAffineG>(&form)) {
    auto pieces = m->pieces;
    for (auto& p : pieces) std::swap(p.slope[i], p.slope[last]);
    return make_max_affine(spec.family(), pieces);
  }
  throw Unsupported("cannot permute coordinates of " + spec.form_name());
}

double log_det(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  const Eigen::MatrixXd L = llt.matrixL();
  return 2.0 * L.diagonal().array().log().sum();
}

// Golden-section maximization of a unimodal function, bracket grown from x0.
double maximize_unimodal(const std::function<double(double)>& fn, double x0, double width) {
  double lo = x0 - width, hi = x0 + width;
  for (int k = 0; k < 200 && fn(lo) >= fn(x0); ++k) lo = x0 - (x0 - lo) * 2.0;
  for (int k = 0; k < 200 && fn(hi) >= fn(x0); ++k) hi = x0 + (hi - x0) * 2.0;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int k = 0; k < 200 && b - a > 1e-12 * (1.0 + std::abs(a)); ++k) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = fn(d);
    }
  }
  return std::max({fn(0.5 * (a + b)), fc, fd, fn(x0)});
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
    case Method::ClosedForm: return "closed-form";
  }
  return "?";
}

double OracleEstimate::margin() const {
  switch (method) {
    case Method::Quadrature: return abs_tol;
    case Method::MonteCarlo: return 3.0 * std_error;
    case Method::ClosedForm: return 0.0;
  }
  return 0.0;
}

OracleEstimate integrate_functional(const DensitySpec& spec, const Functional& functional, const Budget& budget) {
  const PhiOfF phi = [&functional](double x) { return functional.phi(x); };
  if (pick_method(spec, budget) == Method::MonteCarlo) return SampleCache(spec, budget).estimate(phi);
  const double tol = budget.abs_tol.value_or(default_tol(spec.dimension()));
  return quadrature_estimate(spec, phi, functional.kink(), tol);
}

OracleEstimate differential_entropy(const DensitySpec& spec, const Budget& budget) {
  return integrate_functional(spec, Functional::entropy(), budget);
}

OracleEstimate truncated_mass(const DensitySpec& spec, double t, const Budget& budget) {
  if (!(t > 0.0)) throw InvalidArgument("truncation level must be positive");
  const Method method = pick_method(spec, budget);
  if (t >= spec.f_max()) {
    OracleEstimate e;
    e.method = method;
    e.value = 1.0;
    return e;
  }
  if (method == Method::MonteCarlo) return SampleCache(spec, budget).estimate(truncation_phi(t));
  const double tol = budget.abs_tol.value_or(default_tol(spec.dimension()));
  return quadrature_estimate(spec, truncation_phi(t), t, tol);
}

double solve_threshold(const DensitySpec& spec, double gamma, double tol, const Budget& budget) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (pick_method(spec, budget) == Method::MonteCarlo) {
    const SampleCache cache(spec, budget);
    return bisect_threshold([&](double t) { return cache.estimate(truncation_phi(t)).value; }, spec.f_max(),
                            gamma, tol);
  }
  const double qtol = std::min(budget.abs_tol.value_or(default_tol(spec.dimension())), 0.1 * tol);
  return bisect_threshold(
      [&](double t) { return t >= spec.f_max() ? 1.0 : quadrature_integral(spec, truncation_phi(t), t, qtol).value; },
      spec.f_max(), gamma, tol);
}

OracleEstimate truncated_entropy_at(const DensitySpec& spec, double t, const Budget& budget) {
  if (!(t > 0.0)) throw InvalidArgument("truncation level must be positive");
  if (pick_method(spec, budget) == Method::MonteCarlo) {
    const SampleCache cache(spec, budget);
    const double g_hat = cache.estimate(truncation_phi(t)).value;
    OracleEstimate e = cache.estimate(truncated_log_phi(t));
    e.value = e.value / g_hat + std::log(g_hat);
    e.std_error /= g_hat;
    e.error = e.std_error;
    return e;
  }
  const double tol = budget.abs_tol.value_or(default_tol(spec.dimension()));
  const double g_hat = t >= spec.f_max() ? 1.0 : quadrature_integral(spec, truncation_phi(t), t, 0.1 * tol).value;
  OracleEstimate e = quadrature_estimate(spec, truncated_log_phi(t), t, tol);
  e.value = e.value / g_hat + std::log(g_hat);
  e.abs_tol /= g_hat;
  e.error /= g_hat;
  return e;
}

TruncatedEntropy truncated_entropy(const DensitySpec& spec, double gamma, const Budget& budget) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  const bool mc = pick_method(spec, budget) == Method::MonteCarlo;
  const double tol = mc ? 1e-12 : 10.0 * budget.abs_tol.value_or(default_tol(spec.dimension()));
  TruncatedEntropy out;
  out.t_star = solve_threshold(spec, gamma, tol, budget);
  out.entropy = truncated_entropy_at(spec, out.t_star, budget);
  return out;
}

DensitySpec generate_random_density(const RandomDensityConfig& config) {
  const auto& fam = config.family;
  const int n = config.n;
  if (!fam.is_builtin()) throw InvalidArgument("random densities need a built-in family");
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  if (fam.kind() == FamilyKind::BetaConcave && !(fam.beta() > n)) {
    throw InvalidArgument("beta-concave random densities need beta > n");
  }
  Rng rng(stream_seed(config.seed, 0x7261ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
  const bool beta = fam.kind() == FamilyKind::BetaConcave;

  if (config.generator == RandomDensityConfig::Generator::Quadratic) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = normal(rng);
    }
    Eigen::MatrixXd Q = A.transpose() * A / n + 0.25 * Eigen::MatrixXd::Identity(n, n);
    Q *= std::exp(uniform(-1.0, 1.0));
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c[i] = normal(rng);
    return make_quadratic(fam, Q, c, beta ? uniform(0.5, 2.0) : 0.0);
  }

  if (n > 2) throw Unsupported("max-affine densities are supported in dimension 1 and 2");
  const int m = config.pieces;
  if (m < n + 1) throw InvalidArgument("max-affine generator needs at least n + 1 pieces");
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<AffinePiece> pieces;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd a(n);
      const double mag = uniform(0.3, 3.0);
      if (n == 1) {
        const double sign = j == 0 ? -1.0 : j == 1 ? 1.0 : (unit(rng) < 0.5 ? -1.0 : 1.0);
        a[0] = sign * mag;
      } else {
        const double th = 2.0 * std::numbers::pi * (j + uniform(-0.3, 0.3)) / m;
        a[0] = mag * std::cos(th);
        a[1] = mag * std::sin(th);
      }
      pieces.push_back({a, uniform(-1.0, 1.0)});
    }
    try {
      if (beta) {
        const double g_min = max_affine_minimum(MaxAffineG{pieces}, n).second;
        const double shift = uniform(0.3, 2.0) - g_min;
        for (auto& p : pieces) p.intercept += shift;
      }
      return make_max_affine(fam, std::move(pieces));
    } catch (const InvalidArgument&) {
      // slopes failed to make g coercive; redraw
    }
  }
  throw NonConvergence("max-affine generator found no coercive draw");
}

SliceTerms slice_terms(const DensitySpec& spec, int coordinate, const Budget& budget) {
  const int n = spec.dimension();
  if (coordinate < 0 || coordinate >= n) throw InvalidArgument("coordinate out of range");
  SliceTerms s;
  if (n == 1) {
    s.sup_marginal = 1.0;
    s.integral_of_sup = spec.f_max();
    return s;
  }
  const auto& form = spec.form();
  if (const auto* box = std::get_if<UniformBox>(&form)) {
    s.sup_marginal = spec.f_max() * box->side;
    s.integral_of_sup = spec.f_max() * std::pow(box->side, n - 1);
    return s;
  }
  if (const auto* e = std::get_if<ExtremalLinear>(&form)) {
    s.sup_marginal = antiderivative_g(spec.family(), 1, e->b) / e->lambda;
    s.integral_of_sup = antiderivative_g(spec.family(), n - 1, e->b) / std::pow(e->lambda, n - 1);
    return s;
  }
  if (std::holds_alternative<Gaussian>(form) || std::holds_alternative<MultivariateT>(form)) {
    const DensitySpec marginal = drop_coordinate(spec, coordinate);
    s.sup_marginal = marginal.f_max();
    const double d = n - 1;
    const Eigen::MatrixXd& sub = std::holds_alternative<Gaussian>(marginal.form())
                                     ? std::get<Gaussian>(marginal.form()).cov
                                     : std::get<MultivariateT>(marginal.form()).scale;
    const double half_log_det = 0.5 * log_det(sub);
    if (const auto* t = std::get_if<MultivariateT>(&form)) {
      const double beta = 0.5 * (t->nu + n);
      s.integral_of_sup = std::exp(spec.log_norm() + 0.5 * d * std::log(t->nu * std::numbers::pi) +
                                   std::lgamma(beta - 0.5 * d) - std::lgamma(beta) + half_log_det);
    } else {
      s.integral_of_sup = std::exp(spec.log_norm() + 0.5 * d * std::log(2.0 * std::numbers::pi) + half_log_det);
    }
    return s;
  }
  if (n != 2) throw Unsupported("slice terms for " + spec.form_name() + " need dimension 2");

  const DensitySpec moved = move_to_last(spec, coordinate);
  const Geometry geo(moved);
  const double tol = budget.abs_tol.value_or(default_tol(1));
  quad::Options opt;
  opt.abs_tol = tol;
  opt.rel_tol = 1e-12;
  opt.max_panels = 20000;
  const auto marginal = [&](double x1) {
    const Line L = geo.inner(x1);
    const quad::Integrand h = [&](double x2) {
      const double x[2] = {x1, x2};
      return moved.eval(std::span<const double>(x, 2));
    };
    return line_integral(h, L, opt).value;
  };
  const Line O = geo.outer();
  s.sup_marginal = maximize_unimodal(marginal, O.center, O.scale);
  s.sup_is_lower_estimate = true;
  const auto& fam = moved.family();
  const quad::Integrand sup_f = [&](double x1) {
    const Line L = geo.inner(x1);
    return L.empty ? 0.0 : fam.psi(L.gmin);
  };
  s.integral_of_sup = line_integral(sup_f, O, opt).value;
  return s;
}

SliceCheck slice_inequality_check(const DensitySpec& spec, const Budget& budget) {
  SliceCheck c;
  c.terms = slice_terms(spec, spec.dimension() - 1, budget);
  c.lhs = c.terms.sup_marginal * c.terms.integral_of_sup;
  c.rhs = spec.dimension() * spec.f_max();
  c.holds = c.lhs <= c.rhs * (1.0 + 1e-9);
  return c;
}

}  // namespace cvxbound
