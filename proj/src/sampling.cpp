#include "cvxbound/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cvxbound/antideriv.hpp"
#include "cvxbound/error.hpp"
#include "cvxbound/quadrature.hpp"

namespace cvxbound {
namespace {

double std_normal(Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(rng);
}

double gamma_draw(Rng& rng, double shape) {
  std::gamma_distribution<double> d(shape, 1.0);
  return d(rng);
}

// Writes a Dirichlet(1, ..., 1) point scaled by `total`.
void simplex_split(Rng& rng, double total, std::span<double> x) {
  double s = 0.0;
  for (double& xi : x) {
    xi = -std::log1p(-std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    s += xi;
  }
  for (double& xi : x) xi *= total / s;
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw InvalidArgument("matrix is not positive definite");
  return llt.matrixL();
}

class ExactSampler : public Sampler {
 public:
  explicit ExactSampler(const DensitySpec& spec) : spec_(spec) {}
  double log_q(std::span<const double> x) const override { return spec_.log_eval(x); }
  bool exact() const override { return true; }

 protected:
  const DensitySpec& spec_;
};

class ExtremalSampler : public ExactSampler {
 public:
  explicit ExtremalSampler(const DensitySpec& spec) : ExactSampler(spec) {
    const auto& e = std::get<ExtremalLinear>(spec.form());
    b_ = e.b;
    lambda_ = e.lambda;
    if (spec.family().kind() == FamilyKind::Custom) build_table();
  }

  void draw(Rng& rng, std::span<double> x) const override {
    const int n = spec_.dimension();
    double excess = 0.0;  // lambda * sum(x)
    switch (spec_.family().kind()) {
      case FamilyKind::LogConcave:
        excess = gamma_draw(rng, n);
        break;
      case FamilyKind::BetaConcave: {
        const double g1 = gamma_draw(rng, n);
        const double g2 = gamma_draw(rng, spec_.family().beta() - n);
        // b / (1 - u) - b with u = g1 / (g1 + g2)
        excess = b_ * g1 / g2;
        break;
      }
      case FamilyKind::Custom:
        excess = lambda_ * inverse_cdf(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
        break;
    }
    simplex_split(rng, excess / lambda_, x);
  }

  const char* name() const override { return "orthant-extremal"; }

 private:
  // Inverse CDF of T = sum(x), density proportional to t^(n-1) psi(b + lambda t).
  void build_table() {
    const int n = spec_.dimension();
    const auto& fam = spec_.family();
    const quad::Integrand p = [&](double t) { return std::pow(t, n - 1) * fam.psi(b_ + lambda_ * t); };
    quad::Options opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    const double scale = 1.0 / lambda_;
    const double total = quad::integrate_to_infinity(p, 0.0, scale, opt).value;
    constexpr int kGrid = 4096;
    double v_max = 1.0;
    for (;; v_max *= 2.0) {
      const double mass = quad::integrate(p, 0.0, scale * std::expm1(v_max), opt).value;
      if (mass >= total * (1.0 - 1e-12) || v_max > 700.0) break;
    }
    grid_.resize(kGrid + 1);
    cum_.assign(kGrid + 1, 0.0);
    for (int j = 0; j <= kGrid; ++j) grid_[j] = scale * std::expm1(v_max * j / kGrid);
    for (int j = 1; j <= kGrid; ++j) cum_[j] = cum_[j - 1] + quad::integrate(p, grid_[j - 1], grid_[j], opt).value;
    for (double& c : cum_) c /= cum_.back();
  }

  double inverse_cdf(double u) const {
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    const std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - cum_.begin()), 1, cum_.size() - 1);
    const double w = (u - cum_[j - 1]) / std::max(cum_[j] - cum_[j - 1], 1e-300);
    return grid_[j - 1] + std::clamp(w, 0.0, 1.0) * (grid_[j] - grid_[j - 1]);
  }

  double b_ = 0.0;
  double lambda_ = 1.0;
  std::vector<double> grid_;
  std::vector<double> cum_;
};

class BoxSampler : public ExactSampler {
 public:
  using ExactSampler::ExactSampler;
  void draw(Rng& rng, std::span<double> x) const override {
    const double side = std::get<UniformBox>(spec_.form()).side;
    std::uniform_real_distribution<double> u(0.0, side);
    for (double& xi : x) xi = u(rng);
  }
  const char* name() const override { return "uniform-box"; }
};

// center + L z * sqrt(nu / W), W ~ chi^2_nu; nu <= 0 means Gaussian.
class EllipticalSampler : public ExactSampler {
 public:
  EllipticalSampler(const DensitySpec& spec, Eigen::VectorXd center, const Eigen::MatrixXd& cov, double nu)
      : ExactSampler(spec), center_(std::move(center)), chol_(cholesky(cov)), nu_(nu) {}

  void draw(Rng& rng, std::span<double> x) const override {
    const int n = static_cast<int>(center_.size());
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = std_normal(rng);
    double mix = 1.0;
    if (nu_ > 0.0) mix = std::sqrt(nu_ / (2.0 * gamma_draw(rng, 0.5 * nu_)));
    const Eigen::VectorXd y = center_ + mix * (chol_ * z);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = y[i];
  }

  const char* name() const override { return nu_ > 0.0 ? "student-t" : "gaussian"; }

 private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd chol_;
  double nu_;
};

class CauchyProposal : public Sampler {
 public:
  CauchyProposal(Eigen::VectorXd center, double scale) : center_(std::move(center)), scale_(scale) {
    const double n = static_cast<double>(center_.size());
    log_c_ = std::lgamma(0.5 * (n + 1.0)) - std::lgamma(0.5) - 0.5 * n * std::log(std::numbers::pi) -
             n * std::log(scale_);
  }

  void draw(Rng& rng, std::span<double> x) const override {
    const double w = std::abs(std_normal(rng));
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = center_[static_cast<Eigen::Index>(i)] + scale_ * std_normal(rng) / std::max(w, 1e-300);
    }
  }

  double log_q(std::span<const double> x) const override {
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = (x[i] - center_[static_cast<Eigen::Index>(i)]) / scale_;
      r2 += d * d;
    }
    return log_c_ - 0.5 * (center_.size() + 1.0) * std::log1p(r2);
  }

  bool exact() const override { return false; }
  const char* name() const override { return "cauchy-proposal"; }

 private:
  Eigen::VectorXd center_;
  double scale_;
  double log_c_ = 0.0;
};

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t worker) {
  std::uint64_t z = seed + (worker + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::unique_ptr<Sampler> make_sampler(const DensitySpec& spec) {
  const int n = spec.dimension();
  const auto& form = spec.form();
  if (std::holds_alternative<ExtremalLinear>(form)) return std::make_unique<ExtremalSampler>(spec);
  if (std::holds_alternative<UniformBox>(form)) return std::make_unique<BoxSampler>(spec);
  if (const auto* g = std::get_if<Gaussian>(&form)) {
    return std::make_unique<EllipticalSampler>(spec, Eigen::VectorXd::Zero(n), g->cov, 0.0);
  }
  if (const auto* t = std::get_if<MultivariateT>(&form)) {
    return std::make_unique<EllipticalSampler>(spec, Eigen::VectorXd::Zero(n), t->scale, t->nu);
  }
  if (const auto* q = std::get_if<QuadraticG>(&form)) {
    const Eigen::MatrixXd q_inv = q->Q.inverse();
    if (spec.family().kind() == FamilyKind::LogConcave) {
      return std::make_unique<EllipticalSampler>(spec, q->center, 0.5 * q_inv, 0.0);
    }
    const double nu = 2.0 * spec.family().beta() - n;
    return std::make_unique<EllipticalSampler>(spec, q->center, q->offset * q_inv / nu, nu);
  }
  if (std::holds_alternative<MaxAffineG>(form)) {
    const auto& m = spec.mode();
    const Eigen::VectorXd center = Eigen::Map<const Eigen::VectorXd>(m.data(), n);
    return std::make_unique<CauchyProposal>(center, 0.5 * std::pow(spec.f_max(), -1.0 / n));
  }
  throw Unsupported("no sampler for " + spec.form_name());
}

}  // namespace cvxbound
