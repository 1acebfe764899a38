#include "cvxbound/model.hpp"

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "cvxbound/error.hpp"

namespace cvxbound {
namespace {

// Spot-check grid for user-supplied psi.
std::vector<double> family_grid(double domain_left) {
  std::vector<double> xs;
  if (std::isfinite(domain_left)) {
    for (int j = 0; j <= 60; ++j) xs.push_back(domain_left + std::pow(10.0, j / 10.0 - 3.0));
  } else {
    for (int j = 0; j <= 90; ++j) xs.push_back(-30.0 + j);
  }
  return xs;
}

void spot_check(const ScalarFn& psi, const ScalarFn& psi_inv, double domain_left) {
  const auto xs = family_grid(domain_left);
  double prev = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    const double y = psi(x);
    if (!std::isfinite(y) || y < 0.0) {
      throw InvalidArgument("custom psi is not finite and nonnegative at x=" + std::to_string(x));
    }
    if (y == 0.0) break;  // underflow: the decreasing part has been checked
    if (!(y < prev)) {
      throw InvalidArgument("custom psi is not strictly decreasing near x=" + std::to_string(x));
    }
    prev = y;
    const double back = psi_inv(y);
    if (std::abs(back - x) > 1e-8 * std::max(1.0, std::abs(x))) {
      throw InvalidArgument("custom psi_inv does not invert psi at x=" + std::to_string(x));
    }
  }
}

}  // namespace

ConvexityFamily ConvexityFamily::log_concave() {
  ConvexityFamily f;
  f.kind_ = FamilyKind::LogConcave;
  f.name_ = "log-concave";
  f.psi_ = [](double x) { return std::exp(-x); };
  f.psi_inv_ = [](double y) { return -std::log(y); };
  return f;
}

ConvexityFamily ConvexityFamily::beta_concave(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument("beta-concave family requires beta > 0");
  }
  ConvexityFamily f;
  f.kind_ = FamilyKind::BetaConcave;
  f.name_ = "beta-concave";
  f.beta_ = beta;
  f.domain_left_ = 0.0;
  f.psi_ = [beta](double x) {
    return x > 0.0 ? std::pow(x, -beta) : std::numeric_limits<double>::infinity();
  };
  f.psi_inv_ = [beta](double y) { return std::pow(y, -1.0 / beta); };
  return f;
}

ConvexityFamily ConvexityFamily::custom(std::string name, ScalarFn psi, ScalarFn psi_inv,
                                        double domain_left, AntiderivativeFn closed_form_g) {
  if (!psi || !psi_inv) throw InvalidArgument("custom family needs both psi and psi_inv");
  spot_check(psi, psi_inv, domain_left);
  ConvexityFamily f;
  f.kind_ = FamilyKind::Custom;
  f.name_ = std::move(name);
  f.domain_left_ = domain_left;
  f.psi_ = std::move(psi);
  f.psi_inv_ = std::move(psi_inv);
  f.closed_form_g_ = std::move(closed_form_g);
  return f;
}

double ConvexityFamily::beta() const {
  if (kind_ != FamilyKind::BetaConcave) throw InvalidArgument("family has no beta parameter");
  return beta_;
}

double ConvexityFamily::psi(double x) const { return psi_(x); }
double ConvexityFamily::psi_inv(double y) const { return psi_inv_(y); }

bool ConvexityFamily::has_closed_form_g(int k) const {
  switch (kind_) {
    case FamilyKind::LogConcave: return true;
    case FamilyKind::BetaConcave: return beta_ > k;
    case FamilyKind::Custom: return static_cast<bool>(closed_form_g_);
  }
  return false;
}

double ConvexityFamily::closed_form_g(int k, double x) const {
  if (k < 0) throw InvalidArgument("antiderivative order must be nonnegative");
  switch (kind_) {
    case FamilyKind::LogConcave:
      return std::exp(-x);
    case FamilyKind::BetaConcave: {
      if (!(beta_ > k)) {
        throw NonIntegrable("G_" + std::to_string(k) + " diverges for beta=" + std::to_string(beta_));
      }
      double denom = 1.0;
      for (int i = 1; i <= k; ++i) denom *= beta_ - i;
      return std::pow(x, k - beta_) / denom;
    }
    case FamilyKind::Custom:
      if (!closed_form_g_) throw NoClosedForm("custom family has no closed-form G_k");
      return closed_form_g_(k, x);
  }
  return 0.0;
}

double ConvexityFamily::decay_scale(double x) const {
  if (kind_ == FamilyKind::BetaConcave) return std::max(x, 1e-300);
  return 1.0;
}

std::string ConvexityFamily::describe() const {
  std::ostringstream os;
  os << name_;
  if (kind_ == FamilyKind::BetaConcave) os << "(beta=" << beta_ << ")";
  return os.str();
}

Functional Functional::entropy() {
  Functional f;
  f.kind_ = FunctionalKind::Entropy;
  f.name_ = "entropy";
  f.phi_ = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
  f.phi_prime_ = [](double x) { return -std::log(x) - 1.0; };
  return f;
}

Functional Functional::renyi(double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw InvalidArgument("Renyi functional requires alpha > 0 and alpha != 1");
  }
  Functional f;
  f.kind_ = FunctionalKind::Renyi;
  f.name_ = "renyi";
  f.param_ = alpha;
  f.phi_ = [alpha](double x) { return x > 0.0 ? std::pow(x, alpha) : 0.0; };
  f.phi_prime_ = [alpha](double x) { return alpha * std::pow(x, alpha - 1.0); };
  return f;
}

Functional Functional::truncation(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("truncation requires t > 0");
  Functional f;
  f.kind_ = FunctionalKind::Truncation;
  f.name_ = "truncation";
  f.param_ = t;
  f.kink_ = t;
  f.phi_ = [t](double x) { return x > 0.0 ? std::min(x, t) : 0.0; };
  f.phi_prime_ = [t](double x) { return x < t ? 1.0 : 0.0; };
  return f;
}

Functional Functional::custom(std::string name, ScalarFn phi, ScalarFn phi_prime,
                              std::optional<double> kink) {
  if (!phi) throw InvalidArgument("custom functional needs phi");
  if (phi(0.0) != 0.0) throw InvalidArgument("custom functional must satisfy phi(0) = 0");
  Functional f;
  f.kind_ = FunctionalKind::Custom;
  f.name_ = std::move(name);
  f.kink_ = kink;
  f.phi_ = std::move(phi);
  f.phi_prime_ = std::move(phi_prime);
  return f;
}

double Functional::alpha() const {
  if (kind_ != FunctionalKind::Renyi) throw InvalidArgument("functional has no alpha parameter");
  return param_;
}

double Functional::threshold() const {
  if (kind_ != FunctionalKind::Truncation) throw InvalidArgument("functional has no threshold");
  return param_;
}

double Functional::phi(double x) const { return phi_(x); }

double Functional::phi_prime(double x) const {
  if (!phi_prime_) throw NoClosedForm("custom functional has no phi'");
  return phi_prime_(x);
}

std::string Functional::describe() const {
  std::ostringstream os;
  os << name_;
  if (kind_ == FunctionalKind::Renyi) os << "(alpha=" << param_ << ")";
  if (kind_ == FunctionalKind::Truncation) os << "(t=" << param_ << ")";
  return os.str();
}

ConvexityFamily make_family(FamilyKind kind, double beta) {
  switch (kind) {
    case FamilyKind::LogConcave: return ConvexityFamily::log_concave();
    case FamilyKind::BetaConcave: return ConvexityFamily::beta_concave(beta);
    case FamilyKind::Custom: break;
  }
  throw InvalidArgument("custom families are built with ConvexityFamily::custom");
}

}  // namespace cvxbound
