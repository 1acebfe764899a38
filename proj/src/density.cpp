#include "cvxbound/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cvxbound/antideriv.hpp"
#include "cvxbound/error.hpp"
#include "cvxbound/quadrature.hpp"

namespace cvxbound {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double log_det_pd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw InvalidArgument(std::string(what) + " must be positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  return 2.0 * L.diagonal().array().log().sum();
}

void require_square(const Eigen::MatrixXd& m, int n, const char* what) {
  if (m.rows() != n || m.cols() != n) throw InvalidArgument(std::string(what) + " has the wrong shape");
}

double max_affine_value(const MaxAffineG& g, std::span<const double> x) {
  double best = -kInf;
  for (const auto& p : g.pieces) {
    double v = p.intercept;
    for (std::size_t i = 0; i < x.size(); ++i) v += p.slope[static_cast<Eigen::Index>(i)] * x[i];
    best = std::max(best, v);
  }
  return best;
}

// int psi(slope * x + intercept) dx over the envelope, using closed-form G_1.
double envelope_psi_integral(const ConvexityFamily& family, const Envelope1D& env) {
  double total = 0.0;
  const std::size_t m = env.lines.size();
  for (std::size_t s = 0; s < m; ++s) {
    const double lo = s == 0 ? -kInf : env.breaks[s - 1];
    const double hi = s + 1 == m ? kInf : env.breaks[s];
    const auto [a, c] = env.lines[s];
    if (a == 0.0) {
      if (!std::isfinite(lo) || !std::isfinite(hi)) throw NonIntegrable("max-affine g is not coercive");
      total += family.psi(c) * (hi - lo);
      continue;
    }
    const auto g1 = [&](double x) {
      if (!std::isfinite(x)) {
        const double u = x > 0 ? a * kInf : -a * kInf;
        if (u > 0) return 0.0;
        throw NonIntegrable("max-affine g is not coercive");
      }
      return family.closed_form_g(1, a * x + c);
    };
    total += (g1(lo) - g1(hi)) / a;
  }
  return total;
}

Envelope1D slice_envelope(const MaxAffineG& g, double x1) {
  std::vector<std::pair<double, double>> lines;
  for (const auto& p : g.pieces) lines.emplace_back(p.slope[1], p.slope[0] * x1 + p.intercept);
  return upper_envelope(std::move(lines));
}

void require_coercive_2d(const MaxAffineG& g) {
  // max_j a_j . d > 0 for every unit direction d.
  for (int k = 0; k < 3600; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 3600.0;
    const double dx = std::cos(th), dy = std::sin(th);
    double best = -kInf;
    for (const auto& p : g.pieces) best = std::max(best, p.slope[0] * dx + p.slope[1] * dy);
    if (!(best > 1e-12)) throw InvalidArgument("max-affine slopes do not make g coercive");
  }
}

}  // namespace

Envelope1D upper_envelope(std::vector<std::pair<double, double>> lines) {
  if (lines.empty()) throw InvalidArgument("envelope of no lines");
  std::sort(lines.begin(), lines.end());
  std::vector<std::pair<double, double>> dedup;
  for (const auto& l : lines) {
    if (!dedup.empty() && dedup.back().first == l.first) {
      dedup.back().second = std::max(dedup.back().second, l.second);
    } else {
      dedup.push_back(l);
    }
  }
  const auto cross = [](const std::pair<double, double>& p, const std::pair<double, double>& q) {
    return (p.second - q.second) / (q.first - p.first);
  };
  std::vector<std::pair<double, double>> hull;
  for (const auto& l : dedup) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], l) <= cross(hull[hull.size() - 2], hull.back())) {
      hull.pop_back();
    }
    hull.push_back(l);
  }
  Envelope1D env;
  env.lines = hull;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) env.breaks.push_back(cross(hull[i], hull[i + 1]));
  return env;
}

std::vector<Eigen::Vector2d> max_affine_vertices(const MaxAffineG& g) {
  std::vector<Eigen::Vector2d> out;
  const auto& p = g.pieces;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      for (std::size_t k = j + 1; k < p.size(); ++k) {
        Eigen::Matrix2d A;
        A.row(0) = (p[i].slope - p[j].slope).transpose();
        A.row(1) = (p[i].slope - p[k].slope).transpose();
        if (std::abs(A.determinant()) < 1e-12) continue;
        const Eigen::Vector2d rhs(p[j].intercept - p[i].intercept, p[k].intercept - p[i].intercept);
        const Eigen::Vector2d x = A.partialPivLu().solve(rhs);
        const double v = p[i].slope.dot(x) + p[i].intercept;
        const double gx = max_affine_value(g, std::span<const double>(x.data(), 2));
        if (gx <= v + 1e-9 * (1.0 + std::abs(v))) out.push_back(x);
      }
    }
  }
  return out;
}

std::pair<Eigen::VectorXd, double> max_affine_minimum(const MaxAffineG& g, int n) {
  if (n == 1) {
    std::vector<std::pair<double, double>> lines;
    for (const auto& p : g.pieces) lines.emplace_back(p.slope[0], p.intercept);
    const auto env = upper_envelope(std::move(lines));
    if (!(env.lines.front().first < 0.0) || !(env.lines.back().first > 0.0)) {
      throw InvalidArgument("max-affine slopes do not make g coercive");
    }
    Eigen::VectorXd best(1);
    double best_v = kInf;
    for (double x : env.breaks) {
      const double v = max_affine_value(g, std::span<const double>(&x, 1));
      if (v < best_v) {
        best_v = v;
        best[0] = x;
      }
    }
    return {best, best_v};
  }
  if (n == 2) {
    require_coercive_2d(g);
    Eigen::VectorXd best(2);
    double best_v = kInf;
    for (const auto& x : max_affine_vertices(g)) {
      const double v = max_affine_value(g, std::span<const double>(x.data(), 2));
      if (v < best_v) {
        best_v = v;
        best = x;
      }
    }
    if (!std::isfinite(best_v)) throw InvalidArgument("max-affine g has no vertex");
    return {best, best_v};
  }
  throw Unsupported("max-affine densities are supported in dimension 1 and 2");
}

DensitySpec::DensitySpec(ConvexityFamily family, int n, DensityForm form)
    : family_(std::move(family)), n_(n), form_(std::move(form)) {
  if (n_ < 1) throw InvalidArgument("dimension must be >= 1");
}

std::string DensitySpec::form_name() const {
  return std::visit(Overloaded{[](const ExtremalLinear&) { return std::string("extremal-linear"); },
                               [](const UniformBox&) { return std::string("uniform-box"); },
                               [](const QuadraticG&) { return std::string("quadratic"); },
                               [](const MaxAffineG&) { return std::string("max-affine"); },
                               [](const MultivariateT&) { return std::string("multivariate-t"); },
                               [](const Gaussian&) { return std::string("gaussian"); }},
                    form_);
}

double DensitySpec::quadratic(const Eigen::MatrixXd& m, std::span<const double> x,
                              const Eigen::VectorXd* center) const {
  double buf[16];
  std::vector<double> heap;
  double* d = buf;
  if (n_ > 16) {
    heap.resize(static_cast<std::size_t>(n_));
    d = heap.data();
  }
  for (int i = 0; i < n_; ++i) d[i] = x[static_cast<std::size_t>(i)] - (center ? (*center)[i] : 0.0);
  double q = 0.0;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    for (int j = 0; j < n_; ++j) row += m(i, j) * d[j];
    q += d[i] * row;
  }
  return q;
}

double DensitySpec::g(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw InvalidArgument("point has the wrong dimension");
  return std::visit(
      Overloaded{
          [&](const ExtremalLinear& e) {
            double s = 0.0;
            for (double xi : x) {
              if (xi < 0.0) return kInf;
              s += xi;
            }
            return e.b + e.lambda * s;
          },
          [&](const UniformBox& box) {
            for (double xi : x) {
              if (xi < 0.0 || xi > box.side) return kInf;
            }
            return family_.psi_inv(f_max_);
          },
          [&](const QuadraticG& q) { return q.offset + quadratic(q.Q, x, &q.center); },
          [&](const MaxAffineG& m) { return max_affine_value(m, x); },
          [&](const MultivariateT& t) { return g_scale_ * (1.0 + quadratic(precision_, x) / t.nu); },
          [&](const Gaussian&) { return -log_norm_ + 0.5 * quadratic(precision_, x); }},
      form_);
}

double DensitySpec::log_eval(std::span<const double> x) const {
  if (const auto* t = std::get_if<MultivariateT>(&form_)) {
    const double beta = 0.5 * (t->nu + n_);
    return log_norm_ - beta * std::log1p(quadratic(precision_, x) / t->nu);
  }
  if (std::holds_alternative<Gaussian>(form_)) return log_norm_ - 0.5 * quadratic(precision_, x);
  const double gx = g(x);
  if (!std::isfinite(gx)) return -kInf;
  if (std::holds_alternative<UniformBox>(form_)) return std::log(f_max_);
  if (const auto* e = std::get_if<ExtremalLinear>(&form_); e && gx == e->b) return std::log(f_max_);
  switch (family_.kind()) {
    case FamilyKind::LogConcave: return -gx;
    case FamilyKind::BetaConcave: return -family_.beta() * std::log(gx);
    case FamilyKind::Custom: return std::log(family_.psi(gx));
  }
  return -kInf;
}

double DensitySpec::eval(std::span<const double> x) const {
  if (std::holds_alternative<UniformBox>(form_) || std::holds_alternative<ExtremalLinear>(form_) ||
      family_.kind() == FamilyKind::Custom) {
    const double gx = g(x);
    if (!std::isfinite(gx)) return 0.0;
    if (std::holds_alternative<UniformBox>(form_)) return f_max_;
    if (const auto* e = std::get_if<ExtremalLinear>(&form_); e && gx == e->b) return f_max_;
    return family_.psi(gx);
  }
  return std::exp(log_eval(x));
}

DensitySpec make_extremal_linear(const ConvexityFamily& family, int n, double f_max) {
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(f_max > 0.0) || !std::isfinite(f_max)) throw InvalidArgument("f_max must be positive");
  const double b = family.psi_inv(f_max);
  const double gn = antiderivative_g(family, n, b);
  if (!(gn > 0.0) || !std::isfinite(gn)) throw NonIntegrable("G_n(b) is not finite and positive");
  DensitySpec spec(family, n, ExtremalLinear{b, std::pow(gn, 1.0 / n)});
  spec.f_max_ = f_max;
  spec.mode_.assign(static_cast<std::size_t>(n), 0.0);
  return spec;
}

DensitySpec make_uniform_box(const ConvexityFamily& family, int n, double f_max) {
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(f_max > 0.0) || !std::isfinite(f_max)) throw InvalidArgument("f_max must be positive");
  const double side = std::pow(f_max, -1.0 / n);
  DensitySpec spec(family, n, UniformBox{side});
  spec.f_max_ = f_max;
  spec.mode_.assign(static_cast<std::size_t>(n), 0.5 * side);
  return spec;
}

DensitySpec make_quadratic(const ConvexityFamily& family, Eigen::MatrixXd Q, Eigen::VectorXd center,
                           double offset) {
  const int n = static_cast<int>(center.size());
  require_square(Q, n, "Q");
  const double log_det = log_det_pd(Q, "Q");
  const double half_n = 0.5 * n;
  const double log_pi_term = half_n * std::log(std::numbers::pi) - 0.5 * log_det;
  switch (family.kind()) {
    case FamilyKind::LogConcave: {
      // Z = exp(-offset) pi^(n/2) / sqrt(det Q); absorb log Z into the offset.
      const double log_z = -offset + log_pi_term;
      offset += log_z;
      break;
    }
    case FamilyKind::BetaConcave: {
      const double beta = family.beta();
      if (!(offset > 0.0)) throw InvalidArgument("beta-concave quadratic needs a positive offset");
      if (!(beta > half_n)) throw NonIntegrable("quadratic beta-concave density needs beta > n/2");
      const double log_z = (half_n - beta) * std::log(offset) + log_pi_term + std::lgamma(beta - half_n) -
                           std::lgamma(beta);
      const double s = std::exp(log_z / beta);
      offset *= s;
      Q *= s;
      break;
    }
    case FamilyKind::Custom:
      throw Unsupported("custom families are not normalized automatically");
  }
  DensitySpec spec(family, n, QuadraticG{Q, center, offset});
  spec.precision_ = Q;
  spec.f_max_ = family.psi(offset);
  spec.mode_.assign(center.data(), center.data() + n);
  return spec;
}

DensitySpec make_max_affine(const ConvexityFamily& family, std::vector<AffinePiece> pieces) {
  if (pieces.empty()) throw InvalidArgument("max-affine density needs at least one piece");
  const int n = static_cast<int>(pieces.front().slope.size());
  for (const auto& p : pieces) {
    if (p.slope.size() != n) throw InvalidArgument("affine pieces disagree on dimension");
  }
  if (family.kind() == FamilyKind::Custom) throw Unsupported("custom families are not normalized automatically");
  if (n > 2) throw Unsupported("max-affine densities are supported in dimension 1 and 2");

  MaxAffineG g{std::move(pieces)};
  auto [argmin, min_value] = max_affine_minimum(g, n);
  if (!(min_value > family.domain_left())) {
    throw InvalidArgument("max-affine g must stay inside the family domain (min g too small)");
  }

  double z = 0.0;
  if (n == 1) {
    std::vector<std::pair<double, double>> lines;
    for (const auto& p : g.pieces) lines.emplace_back(p.slope[0], p.intercept);
    z = envelope_psi_integral(family, upper_envelope(std::move(lines)));
  } else {
    std::vector<double> breaks;
    for (const auto& v : max_affine_vertices(g)) breaks.push_back(v[0]);
    double slope_norm = 0.0;
    for (const auto& p : g.pieces) slope_norm = std::max(slope_norm, p.slope.norm());
    const quad::Integrand inner = [&](double x1) { return envelope_psi_integral(family, slice_envelope(g, x1)); };
    quad::Options opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-12;
    opt.max_panels = 20000;
    const auto r = quad::integrate_real_line(inner, argmin[0], 1.0 / slope_norm, opt, breaks);
    z = r.value;
  }
  if (!(z > 0.0) || !std::isfinite(z)) throw NonIntegrable("max-affine density normalizer is not finite");

  if (family.kind() == FamilyKind::LogConcave) {
    const double shift = std::log(z);
    for (auto& p : g.pieces) p.intercept += shift;
    min_value += shift;
  } else {
    const double s = std::pow(z, 1.0 / family.beta());
    for (auto& p : g.pieces) {
      p.slope *= s;
      p.intercept *= s;
    }
    min_value *= s;
  }

  DensitySpec spec(family, n, std::move(g));
  spec.f_max_ = family.psi(min_value);
  spec.mode_.assign(argmin.data(), argmin.data() + n);
  return spec;
}

DensitySpec make_multivariate_t(double nu, Eigen::MatrixXd scale) {
  if (!(nu > 0.0)) throw InvalidArgument("Student-t degrees of freedom must be positive");
  const int n = static_cast<int>(scale.rows());
  require_square(scale, n, "scale matrix");
  const double log_det = log_det_pd(scale, "scale matrix");
  const double beta = 0.5 * (nu + n);
  DensitySpec spec(ConvexityFamily::beta_concave(beta), n, MultivariateT{nu, scale});
  spec.precision_ = scale.inverse();
  spec.log_norm_ = std::lgamma(beta) - std::lgamma(0.5 * nu) - 0.5 * n * std::log(nu * std::numbers::pi) -
                   0.5 * log_det;
  spec.g_scale_ = std::exp(-spec.log_norm_ / beta);
  spec.f_max_ = std::exp(spec.log_norm_);
  spec.mode_.assign(static_cast<std::size_t>(n), 0.0);
  return spec;
}

DensitySpec make_gaussian(Eigen::MatrixXd cov) {
  const int n = static_cast<int>(cov.rows());
  require_square(cov, n, "covariance");
  const double log_det = log_det_pd(cov, "covariance");
  DensitySpec spec(ConvexityFamily::log_concave(), n, Gaussian{cov});
  spec.precision_ = cov.inverse();
  spec.log_norm_ = -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;
  spec.f_max_ = std::exp(spec.log_norm_);
  spec.mode_.assign(static_cast<std::size_t>(n), 0.0);
  return spec;
}

double density_eval(const DensitySpec& spec, std::span<const double> x) {
  for (double xi : x) {
    if (!std::isfinite(xi)) throw InvalidArgument("density_eval requires a finite point");
  }
  return spec.eval(x);
}

DensitySpec drop_coordinate(const DensitySpec& spec, int i) {
  const int n = spec.dimension();
  if (n < 2 || i < 0 || i >= n) throw InvalidArgument("cannot drop that coordinate");
  const auto sub = [&](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(n - 1, n - 1);
    for (int r = 0, rr = 0; r < n; ++r) {
      if (r == i) continue;
      for (int c = 0, cc = 0; c < n; ++c) {
        if (c == i) continue;
        out(rr, cc++) = m(r, c);
      }
      ++rr;
    }
    return out;
  };
  if (const auto* t = std::get_if<MultivariateT>(&spec.form())) return make_multivariate_t(t->nu, sub(t->scale));
  if (const auto* gs = std::get_if<Gaussian>(&spec.form())) return make_gaussian(sub(gs->cov));
  throw Unsupported("marginals are available for Gaussian and Student-t specs only");
}

}  // namespace cvxbound
