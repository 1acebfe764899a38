#include "cvxbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvxbound/discrete.hpp"
#include "cvxbound/error.hpp"

namespace cvxbound {
namespace {

constexpr int kScanPoints = 10000;

int rank(Evidence e) {
  switch (e) {
    case Evidence::Violated: return 0;
    case Evidence::Unverified: return 1;
    case Evidence::NumericallyVerified: return 2;
    case Evidence::Proved: return 3;
  }
  return 0;
}

Evidence weakest(Evidence a, Evidence b) { return rank(a) <= rank(b) ? a : b; }

bool builtin_pair(const AntiderivativeTable& t) {
  return t.functional().is_builtin() && t.family().is_builtin();
}

// Sign test with tie slack; `dir_ok` is true when H has the sign the direction needs.
bool sign_ok(double h, double slack, Direction d) {
  return d == Direction::Upper ? h <= slack : h >= -slack;
}

struct ScanOutcome {
  int sign_changes = 0;
  bool tail_inconclusive = false;
};

// Sign changes of F_0 - A G_0 on a geometric grid from b to where psi underflows.
ScanOutcome scan_h0(const AntiderivativeTable& table, double A) {
  const auto& fam = table.family();
  const auto& fun = table.functional();
  const double b = table.b();
  const double s = fam.decay_scale(b);
  const double psi_b = fam.psi(b);

  double extent = s;
  for (int i = 0; i < 4000; ++i) {
    const double x = b + extent;
    if (!std::isfinite(x) || fam.psi(x) <= 1e-280 * psi_b) break;
    extent *= 2.0;
  }
  const double span = std::log1p(extent / s);

  ScanOutcome out;
  int last_sign = 0;
  for (int j = 0; j < kScanPoints; ++j) {
    const double x = j == 0 ? b : b + s * std::expm1(span * j / (kScanPoints - 1));
    const double y = fam.psi(x);
    const double f0 = fun.phi(y);
    const double g0 = A * y;
    const double h = f0 - g0;
    const double zero_band = 1e-13 * (std::abs(f0) + std::abs(g0));
    if (std::abs(h) <= zero_band) continue;
    const int sign = h > 0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) {
      ++out.sign_changes;
      if (y <= 1e-200 * psi_b) out.tail_inconclusive = true;
    }
    last_sign = sign;
  }
  return out;
}

double rel_dev(double x, double y) {
  const double d = std::abs(x - y);
  if (d < 1e-14) return 0.0;
  return d / std::max(std::abs(x), std::abs(y));
}

}  // namespace

const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::Proved: return "proved";
    case Evidence::NumericallyVerified: return "numerically-verified";
    case Evidence::Unverified: return "unverified";
    case Evidence::Violated: return "violated";
  }
  return "?";
}

const char* to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

bool ConditionReport::holds() const {
  return cond_i != Evidence::Violated && cond_ii != Evidence::Violated && cond_iii != Evidence::Violated;
}

Evidence ConditionReport::overall() const { return weakest(weakest(cond_i, cond_ii), cond_iii); }

Evidence BoundResult::evidence() const {
  return weakest(upper_conditions.overall(), lower_conditions.overall());
}

ConditionReport check_conditions(const AntiderivativeTable& table, double A, Direction direction) {
  if (!std::isfinite(A)) throw InvalidArgument("A must be finite");
  const int n = table.n();
  ConditionReport r;
  r.direction = direction;
  r.A = A;

  const double fn = table.F_at_b(n), gn = table.G_at_b(n);
  const double f0 = table.F_at_b(0), g0 = table.G_at_b(0);
  r.h_n = fn - A * gn;
  r.h_0 = f0 - A * g0;

  const bool closed_n = table.f_source(n) == Source::ClosedForm && table.g_source(n) == Source::ClosedForm;
  const double round = 1e-12 * (std::abs(fn) + std::abs(A * gn));
  const double slack_n = closed_n ? round : round + 10.0 * table.tol() * (1.0 + std::abs(A));
  const double slack_0 = 1e-12 * (std::abs(f0) + std::abs(A * g0));

  const bool builtin = builtin_pair(table);
  r.cond_i = !sign_ok(r.h_n, slack_n, direction) ? Evidence::Violated
             : builtin && closed_n                ? Evidence::Proved
                                                  : Evidence::NumericallyVerified;
  r.cond_ii = !sign_ok(r.h_0, slack_0, direction) ? Evidence::Violated
              : builtin                           ? Evidence::Proved
                                                  : Evidence::NumericallyVerified;

  if (builtin) {
    if (table.functional().kind() == FunctionalKind::Truncation &&
        table.functional().threshold() < table.f_max() && A >= 1.0) {
      r.cond_iii = Evidence::Unverified;
      r.note = "truncation one-crossing argument needs A < 1";
    } else {
      r.cond_iii = Evidence::Proved;
    }
    return r;
  }

  const ScanOutcome scan = scan_h0(table, A);
  r.sign_changes = scan.sign_changes;
  if (scan.sign_changes >= 2) {
    r.cond_iii = Evidence::Unverified;
    r.note = "grid scan found " + std::to_string(scan.sign_changes) + " sign changes";
  } else if (scan.tail_inconclusive) {
    r.cond_iii = Evidence::Unverified;
    r.note = "grid scan inconclusive near the tail";
  } else {
    r.cond_iii = Evidence::NumericallyVerified;
  }
  return r;
}

BoundResult closed_form_bounds(const Functional& functional, const ConvexityFamily& family, int n, double f_max) {
  if (n < 1) throw InvalidArgument("dimension n must be >= 1");
  if (!(f_max > 0.0) || !std::isfinite(f_max)) throw InvalidArgument("f_max must be positive and finite");
  if (!functional.is_builtin() || !family.is_builtin()) {
    throw NoClosedForm("no closed formula for " + functional.describe() + " on " + family.describe());
  }
  const bool lc = family.kind() == FamilyKind::LogConcave;
  const double beta = lc ? 0.0 : family.beta();

  BoundResult r;
  r.n = n;
  r.f_max = f_max;
  r.b = family.psi_inv(f_max);
  r.provenance = "closed-form";

  switch (functional.kind()) {
    case FunctionalKind::Entropy: {
      r.a_0 = -std::log(f_max);
      if (lc) {
        r.a_n = r.a_0 + n;
        r.formula = "log(1/f_max) + n";
      } else {
        if (!(beta > n)) throw InvalidArgument("entropy bound needs beta > n");
        double gap = 0.0;
        for (int i = 1; i <= n; ++i) gap += beta / (beta - i);
        r.a_n = r.a_0 + gap;
        r.formula = "log(1/f_max) + sum beta/(beta-i)";
      }
      break;
    }
    case FunctionalKind::Renyi: {
      const double alpha = functional.alpha();
      r.a_0 = std::pow(f_max, alpha - 1.0);
      if (lc) {
        r.a_n = r.a_0 * std::pow(alpha, -n);
        r.formula = "f_max^(alpha-1) alpha^-n";
      } else {
        if (!(std::min(alpha, 1.0) * beta > n)) throw InvalidArgument("Renyi bound needs min(alpha,1) beta > n");
        double prod = 1.0;
        for (int i = 1; i <= n; ++i) prod *= (beta - i) / (alpha * beta - i);
        r.a_n = r.a_0 * prod;
        r.formula = "f_max^(alpha-1) prod (beta-i)/(alpha beta-i)";
      }
      break;
    }
    case FunctionalKind::Truncation: {
      const double t = functional.threshold();
      if (t >= f_max) {
        r.a_0 = r.a_n = 1.0;
        r.formula = "t >= f_max";
        break;
      }
      const double ratio = t / f_max;
      r.a_0 = ratio;
      if (lc) {
        r.a_n = dist::cdf(dist::Poisson{std::log(f_max / t)}, n);
        r.formula = "poisson-cdf";
      } else {
        if (!(beta > n)) throw InvalidArgument("truncation bound needs beta > n");
        if (beta == std::floor(beta) && beta < 9.0e15) {
          const double p = -std::expm1(std::log(ratio) / beta);
          r.a_n = dist::cdf(dist::Binomial{static_cast<std::int64_t>(beta), p}, n);
          r.formula = "binomial-cdf";
        } else {
          r.a_n = dist::truncation_gamma_sum(ratio, beta, n);
          r.formula = "gamma-sum";
        }
      }
      break;
    }
    case FunctionalKind::Custom:
      throw NoClosedForm("no closed formula for a custom functional");
  }

  r.lower = std::min(r.a_0, r.a_n);
  r.upper = std::max(r.a_0, r.a_n);
  for (auto* c : {&r.upper_conditions, &r.lower_conditions}) {
    c->cond_i = c->cond_ii = c->cond_iii = Evidence::Proved;
  }
  r.upper_conditions.direction = Direction::Upper;
  r.upper_conditions.A = r.upper;
  r.lower_conditions.direction = Direction::Lower;
  r.lower_conditions.A = r.lower;
  return r;
}

bool closed_form_available(const Functional& functional, const ConvexityFamily& family, int n, double f_max) {
  try {
    closed_form_bounds(functional, family, n, f_max);
    return true;
  } catch (const Error&) {
    return false;
  }
}

BoundResult tight_bounds(const Functional& functional, const ConvexityFamily& family, int n, double f_max,
                         const BoundOptions& options) {
  TableOptions topt;
  topt.tol = options.tol;
  topt.force_quadrature = options.force_quadrature;
  const AntiderivativeTable table = build_table(functional, family, n, f_max, topt);

  BoundResult r;
  r.n = n;
  r.f_max = f_max;
  r.b = table.b();
  r.a_n = table.F_at_b(n) / table.G_at_b(n);
  r.a_0 = table.F_at_b(0) / table.G_at_b(0);
  r.lower = std::min(r.a_n, r.a_0);
  r.upper = std::max(r.a_n, r.a_0);
  r.upper_conditions = check_conditions(table, r.upper, Direction::Upper);
  r.lower_conditions = check_conditions(table, r.lower, Direction::Lower);
  for (const auto* c : {&r.upper_conditions, &r.lower_conditions}) {
    if (!c->holds()) {
      throw ConditionFailed(std::string(to_string(c->direction)) + " bound conditions fail (H_n=" +
                            std::to_string(c->h_n) + ", H_0=" + std::to_string(c->h_0) + ")");
    }
  }
  r.provenance = table.all_closed_form() ? "antiderivative-closed-form" : "quadrature";

  if ((options.cross_check || !options.force_quadrature) && closed_form_available(functional, family, n, f_max)) {
    const BoundResult cf = closed_form_bounds(functional, family, n, f_max);
    r.cross_check_deviation = std::max(rel_dev(cf.lower, r.lower), rel_dev(cf.upper, r.upper));
    r.formula = cf.formula;
    if (!options.force_quadrature) {
      r.lower = cf.lower;
      r.upper = cf.upper;
      r.provenance = "closed-form";
    }
  }
  return r;
}

std::pair<double, double> renyi_entropy_bracket(const BoundResult& r, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0) throw InvalidArgument("Renyi order must be positive and != 1");
  const double h1 = std::log(r.lower) / (1.0 - alpha);
  const double h2 = std::log(r.upper) / (1.0 - alpha);
  return {std::min(h1, h2), std::max(h1, h2)};
}

DensitySpec counterexample_density(const Functional& functional, const ConvexityFamily& family, int n,
                                   double f_max, double A, ViolatedCondition violated) {
  const AntiderivativeTable table = build_table(functional, family, n, f_max);
  if (violated == ViolatedCondition::I) {
    const double a_n = table.F_at_b(n) / table.G_at_b(n);
    if (!(A < a_n)) throw InvalidArgument("A does not violate condition (i): A >= F_n(b)/G_n(b)");
    return make_extremal_linear(family, n, f_max);
  }
  const double a_0 = table.F_at_b(0) / table.G_at_b(0);
  if (!(A < a_0)) throw InvalidArgument("A does not violate condition (ii): A >= F_0(b)/G_0(b)");
  return make_uniform_box(family, n, f_max);
}

double binomial_variational(int n, int k, double c) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (k < 0) throw InvalidArgument("k must be >= 0");
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("c must be positive");
  const double p = -std::expm1(-c / n);
  return dist::cdf(dist::Binomial{n, p}, k);
}

}  // namespace cvxbound
