#include "cvxbound/antideriv.hpp"

#include <cmath>
#include <string>

#include "cvxbound/error.hpp"
#include "cvxbound/quadrature.hpp"

namespace cvxbound {
namespace {

double falling_product(double base, int k) {
  double p = 1.0;
  for (int i = 1; i <= k; ++i) p *= base - i;
  return p;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

// Truncation F_k from G: on [x*, inf) min(psi, t) = psi, below x* the constant
// part contributes t d^k / k! and the psi part expands by Taylor's formula.
double truncation_f(const ConvexityFamily& family, double t, int k, double x) {
  const double x_star = family.psi_inv(t);
  if (x >= x_star) return family.closed_form_g(k, x);
  const double d = x_star - x;
  double value = t * std::pow(d, k) / factorial(k);
  for (int j = 0; j < k; ++j) value += std::pow(d, j) / factorial(j) * family.closed_form_g(k - j, x_star);
  return value;
}

void require_integrable(const Functional& functional, const ConvexityFamily& family, int n) {
  if (family.kind() != FamilyKind::BetaConcave) return;
  const double beta = family.beta();
  if (functional.kind() == FunctionalKind::Renyi) {
    const double effective = std::min(functional.alpha(), 1.0) * beta;
    if (!(effective > n)) {
      throw NonIntegrable("Renyi bounds on beta-concave densities need min(alpha,1)*beta > n (got " +
                          std::to_string(effective) + " <= " + std::to_string(n) + ")");
    }
    return;
  }
  if (!(beta > n)) {
    throw NonIntegrable("beta-concave bounds need beta > n (got beta=" + std::to_string(beta) +
                        ", n=" + std::to_string(n) + ")");
  }
}

}  // namespace

const char* to_string(Source s) { return s == Source::ClosedForm ? "closed-form" : "quadrature"; }

bool has_closed_form_f(const Functional& functional, const ConvexityFamily& family, int k) {
  if (!functional.is_builtin() || !family.is_builtin()) return false;
  if (family.kind() == FamilyKind::LogConcave) return true;
  const double beta = family.beta();
  switch (functional.kind()) {
    case FunctionalKind::Entropy: return beta > k;
    case FunctionalKind::Renyi: return functional.alpha() * beta > k;
    case FunctionalKind::Truncation: return beta > k;
    case FunctionalKind::Custom: return false;
  }
  return false;
}

double closed_form_f(const Functional& functional, const ConvexityFamily& family, int k, double x) {
  if (k < 0) throw InvalidArgument("antiderivative order must be nonnegative");
  if (!functional.is_builtin() || !family.is_builtin()) {
    throw NoClosedForm("no closed form for " + functional.describe() + " on " + family.describe());
  }
  if (!has_closed_form_f(functional, family, k)) {
    throw NonIntegrable("F_" + std::to_string(k) + " diverges for " + functional.describe() + " on " +
                        family.describe());
  }
  const bool log_concave = family.kind() == FamilyKind::LogConcave;
  switch (functional.kind()) {
    case FunctionalKind::Entropy: {
      if (log_concave) return (x + k) * std::exp(-x);
      const double beta = family.beta();
      double harmonic = 0.0;
      for (int i = 1; i <= k; ++i) harmonic += 1.0 / (beta - i);
      return beta * std::pow(x, k - beta) * (std::log(x) + harmonic) / falling_product(beta, k);
    }
    case FunctionalKind::Renyi: {
      const double alpha = functional.alpha();
      if (log_concave) return std::pow(alpha, -k) * std::exp(-alpha * x);
      const double ab = alpha * family.beta();
      return std::pow(x, k - ab) / falling_product(ab, k);
    }
    case FunctionalKind::Truncation:
      return truncation_f(family, functional.threshold(), k, x);
    case FunctionalKind::Custom:
      break;
  }
  throw NoClosedForm("no closed form for custom functional");
}

double cauchy_repeated_integral(const ScalarFn& h, int n, double b, double tol, double scale,
                                std::span<const double> breaks) {
  if (n < 0) throw InvalidArgument("repeated integral order must be nonnegative");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (n == 0) return h(b);
  const double norm = 1.0 / factorial(n - 1);
  const quad::Integrand integrand = [&h, n, b, norm](double x) {
    const double w = n == 1 ? 1.0 : std::pow(x - b, n - 1) * norm;
    return w == 0.0 ? 0.0 : w * h(x);
  };
  quad::Options opt;
  opt.abs_tol = tol;
  opt.max_panels = 20000;
  const quad::Result r = quad::integrate_to_infinity(integrand, b, scale, opt, breaks);
  if (!r.converged) {
    throw NonConvergence("repeated integral did not reach tolerance " + std::to_string(tol) +
                         " (error estimate " + std::to_string(r.abs_error) + ")");
  }
  return r.value;
}

double antiderivative_g(const ConvexityFamily& family, int k, double x, double tol) {
  if (family.has_closed_form_g(k)) return family.closed_form_g(k, x);
  if (family.kind() == FamilyKind::BetaConcave) family.closed_form_g(k, x);  // throws NonIntegrable
  const ScalarFn psi = [&family](double y) { return family.psi(y); };
  return cauchy_repeated_integral(psi, k, x, tol, family.decay_scale(x));
}

AntiderivativeTable::AntiderivativeTable(Functional functional, ConvexityFamily family, int n,
                                         double f_max, TableOptions options)
    : functional_(std::move(functional)),
      family_(std::move(family)),
      n_(n),
      f_max_(f_max),
      options_(options) {
  if (n_ < 0) throw InvalidArgument("dimension must be >= 0");
  if (!(f_max_ > 0.0) || !std::isfinite(f_max_)) throw InvalidArgument("f_max must be positive and finite");
  b_ = family_.psi_inv(f_max_);
  if (!(b_ > family_.domain_left())) throw InvalidArgument("psi_inv(f_max) lies outside the family domain");

  for (int k = 0; k <= n_; ++k) {
    const bool closed_f = !options_.force_quadrature && has_closed_form_f(functional_, family_, k);
    const bool closed_g = !options_.force_quadrature && family_.has_closed_form_g(k);
    // k = 0 is a direct evaluation either way.
    f_source_.push_back(closed_f || k == 0 ? Source::ClosedForm : Source::Quadrature);
    g_source_.push_back(closed_g || k == 0 ? Source::ClosedForm : Source::Quadrature);
  }
  for (int k = 0; k <= n_; ++k) {
    f_at_b_.push_back(F(k, b_));
    g_at_b_.push_back(G(k, b_));
  }
}

std::vector<double> AntiderivativeTable::kinks_after(double x) const {
  std::vector<double> out;
  if (auto level = functional_.kink()) {
    const double x_star = family_.psi_inv(*level);
    if (std::isfinite(x_star) && x_star > x) out.push_back(x_star);
  }
  return out;
}

double AntiderivativeTable::quadrature_f(int k, double x) const {
  const ScalarFn h = [this](double y) { return functional_.phi(family_.psi(y)); };
  const auto breaks = kinks_after(x);
  return cauchy_repeated_integral(h, k, x, options_.tol, family_.decay_scale(x), breaks);
}

double AntiderivativeTable::quadrature_g(int k, double x) const {
  const ScalarFn h = [this](double y) { return family_.psi(y); };
  return cauchy_repeated_integral(h, k, x, options_.tol, family_.decay_scale(x));
}

double AntiderivativeTable::F(int k, double x) const {
  if (k < 0 || k > n_) throw InvalidArgument("antiderivative order out of table range");
  if (k == 0) return functional_.phi(family_.psi(x));
  if (f_source_[k] == Source::ClosedForm) return closed_form_f(functional_, family_, k, x);
  return quadrature_f(k, x);
}

double AntiderivativeTable::G(int k, double x) const {
  if (k < 0 || k > n_) throw InvalidArgument("antiderivative order out of table range");
  if (k == 0) return family_.psi(x);
  if (g_source_[k] == Source::ClosedForm) return family_.closed_form_g(k, x);
  return quadrature_g(k, x);
}

bool AntiderivativeTable::all_closed_form() const {
  for (int k = 0; k <= n_; ++k) {
    if (f_source_[k] != Source::ClosedForm || g_source_[k] != Source::ClosedForm) return false;
  }
  return true;
}

AntiderivativeTable build_table(const Functional& functional, const ConvexityFamily& family, int n,
                                double f_max, TableOptions options) {
  if (n < 1) throw InvalidArgument("dimension n must be >= 1");
  require_integrable(functional, family, n);
  return AntiderivativeTable(functional, family, n, f_max, options);
}

}  // namespace cvxbound
