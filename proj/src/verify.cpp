#include "cvxbound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

#include "cvxbound/antideriv.hpp"
#include "cvxbound/discrete.hpp"
#include "cvxbound/error.hpp"
#include "cvxbound/sampling.hpp"

namespace cvxbound {
namespace {

// Tracks the worst margin over many checks.
struct Tally {
  PropertyResult r;
  explicit Tally(std::string name) {
    r.name = std::move(name);
    r.pass = true;
    r.margin = std::numeric_limits<double>::infinity();
  }
  void add(double margin, const std::string& where) {
    ++r.checks;
    if (margin < r.margin) {
      r.margin = margin;
      r.detail = where;
    }
    if (!(margin >= 0.0)) r.pass = false;
  }
  PropertyResult done() {
    if (r.checks == 0) {
      r.margin = 0.0;
      r.pass = false;
      r.detail = "no checks ran";
    }
    return r;
  }
};

std::string label(const Functional& phi, const ConvexityFamily& psi, int n, double f_max) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " n=%d f_max=%g", n, f_max);
  return phi.describe() + " / " + psi.describe() + buf;
}

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

std::vector<PairConfig> builtin_pairs(double alpha, double beta, double t) {
  const auto lc = ConvexityFamily::log_concave();
  const auto bc = ConvexityFamily::beta_concave(beta);
  return {
      {Functional::entropy(), lc},        {Functional::entropy(), bc},
      {Functional::renyi(alpha), lc},     {Functional::renyi(alpha), bc},
      {Functional::truncation(t), lc},    {Functional::truncation(t), bc},
  };
}

PropertyResult closed_form_reproduction(double rel_tol) {
  Tally tally("closed-form reproduction");
  BoundOptions opt;
  opt.force_quadrature = true;
  opt.cross_check = false;
  for (double beta : {7.5, 9.0}) {
    for (double alpha : {0.5, 2.0}) {
      for (double t : {0.3, 1.5}) {
        for (const auto& p : builtin_pairs(alpha, beta, t)) {
          if (p.family.kind() == FamilyKind::LogConcave && beta != 7.5) continue;
          for (int n = 1; n <= 3; ++n) {
            for (double f_max : {0.5, 1.0, 2.0}) {
              const BoundResult q = tight_bounds(p.functional, p.family, n, f_max, opt);
              const BoundResult c = closed_form_bounds(p.functional, p.family, n, f_max);
              const double dev = std::max(rel_dev(q.lower, c.lower), rel_dev(q.upper, c.upper));
              tally.add(rel_tol - dev, label(p.functional, p.family, n, f_max));
            }
          }
        }
      }
    }
  }
  return tally.done();
}

PropertyResult extremal_attainment(double tol) {
  Tally tally("extremal attainment");
  Budget budget;
  budget.abs_tol = tol * 1e-2;
  for (const auto& p : builtin_pairs(2.0, 5.0, 0.4)) {
    for (int n = 1; n <= 2; ++n) {
      for (double f_max : {0.5, 2.0}) {
        const BoundResult r = closed_form_bounds(p.functional, p.family, n, f_max);
        const auto ext = make_extremal_linear(p.family, n, f_max);
        const auto box = make_uniform_box(p.family, n, f_max);
        const double i_ext = integrate_functional(ext, p.functional, budget).value;
        const double i_box = integrate_functional(box, p.functional, budget).value;
        const std::string where = label(p.functional, p.family, n, f_max);
        tally.add(tol - std::abs(i_ext - r.a_n), where + " orthant");
        tally.add(tol - std::abs(i_box - r.a_0), where + " box");
      }
    }
  }
  return tally.done();
}

std::vector<PropertyResult> containment(const ContainmentConfig& config) {
  std::vector<PropertyResult> out;
  const char* functionals[] = {"entropy", "renyi", "truncation"};
  for (int fam_index = 0; fam_index < 2; ++fam_index) {
    for (int fi = 0; fi < 3; ++fi) {
      const std::string fam_name = fam_index == 0 ? "log-concave" : "beta-concave";
      Tally tally(std::string("containment ") + functionals[fi] + " / " + fam_name);
      for (int n : config.dims) {
        Rng rng(stream_seed(config.seed, static_cast<std::uint64_t>(100 * fam_index + 10 * fi + n)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int k = 0; k < config.per_combination; ++k) {
          const double beta = n + 0.6 + 7.0 * unit(rng);
          const auto family = fam_index == 0 ? ConvexityFamily::log_concave() : ConvexityFamily::beta_concave(beta);

          RandomDensityConfig rc;
          rc.family = family;
          rc.n = n;
          rc.generator = k % 2 == 0 ? RandomDensityConfig::Generator::Quadratic
                                    : RandomDensityConfig::Generator::MaxAffine;
          rc.pieces = n + 1 + static_cast<int>(4 * unit(rng));
          rc.seed = rng();
          const DensitySpec spec = generate_random_density(rc);

          double alpha = 0.3 + 2.7 * unit(rng);
          if (std::abs(alpha - 1.0) < 0.05) alpha += 0.1;
          if (fam_index == 1) alpha = std::max(alpha, (n + 0.3) / beta);
          const double t = spec.f_max() * (0.02 + 1.1 * unit(rng));
          const Functional functional = fi == 0   ? Functional::entropy()
                                        : fi == 1 ? Functional::renyi(alpha)
                                                  : Functional::truncation(t);

          const BoundResult b = tight_bounds(functional, family, n, spec.f_max());
          const OracleEstimate est = integrate_functional(spec, functional, config.budget);
          const double eps = est.margin() + 1e-12 * std::max(1.0, std::abs(est.value));
          const double slack = std::min(est.value - b.lower, b.upper - est.value) + eps;
          char where[160];
          std::snprintf(where, sizeof where, "%s n=%d #%d I=%.10g [%.10g, %.10g]", spec.form_name().c_str(), n, k,
                        est.value, b.lower, b.upper);
          tally.add(slack, where);
        }
      }
      out.push_back(tally.done());
    }
  }
  return out;
}

PropertyResult counterexample_soundness(double offset, double min_margin) {
  Tally tally("counterexample soundness");
  Budget budget;
  budget.abs_tol = 1e-9;
  for (const auto& p : builtin_pairs(2.0, 5.0, 0.4)) {
    for (int n = 1; n <= 2; ++n) {
      for (double f_max : {0.5, 1.0}) {
        const BoundResult r = closed_form_bounds(p.functional, p.family, n, f_max);
        const std::string where = label(p.functional, p.family, n, f_max);
        const std::pair<double, ViolatedCondition> cases[] = {{r.a_n, ViolatedCondition::I},
                                                              {r.a_0, ViolatedCondition::II}};
        for (const auto& [candidate, which] : cases) {
          const double A = candidate - offset;
          const auto spec = counterexample_density(p.functional, p.family, n, f_max, A, which);
          const double value = integrate_functional(spec, p.functional, budget).value;
          tally.add((value - A) - min_margin, where + (which == ViolatedCondition::I ? " (i)" : " (ii)"));
        }
      }
    }
  }
  return tally.done();
}

PropertyResult injected_violation(const Functional& functional, const ConvexityFamily& family, int n, double f_max,
                                  double epsilon) {
  PropertyResult r;
  r.name = "injected violation A = F_n/G_n - " + std::to_string(epsilon);
  r.expected_fail = true;
  r.checks = 1;
  const auto table = build_table(functional, family, n, f_max);
  const double A = table.F_at_b(n) / table.G_at_b(n) - epsilon;
  const ConditionReport cond = check_conditions(table, A, Direction::Upper);
  const auto spec = counterexample_density(functional, family, n, f_max, A, ViolatedCondition::I);
  Budget budget;
  budget.abs_tol = n == 1 ? 1e-10 : 1e-8;
  const OracleEstimate est = integrate_functional(spec, functional, budget);
  r.margin = est.value - A - est.margin();
  r.pass = cond.cond_i == Evidence::Violated && r.margin > 0.0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "bound A=%.12g broken by %s with I=%.12g; condition (i) %s", A,
                spec.form_name().c_str(), est.value, to_string(cond.cond_i));
  r.detail = buf;
  return r;
}

std::vector<PropertyResult> identity_suite() {
  std::vector<PropertyResult> out;
  const double ratios[] = {1e-3, 0.01, 0.1, 0.37, 0.9};

  Tally poisson("poisson sum identity");
  for (int n = 0; n <= 10; ++n) {
    for (double ratio : ratios) {
      const double L = std::log(1.0 / ratio);
      double term = 1.0;
      double sum = 1.0;
      for (int k = 1; k <= n; ++k) {
        term *= L / k;
        sum += term;
      }
      const double lhs = ratio * sum;
      const double rhs = dist::cdf(dist::Poisson{L}, n);
      poisson.add(1e-12 - std::abs(lhs - rhs), "n=" + std::to_string(n) + " ratio=" + std::to_string(ratio));
    }
  }
  out.push_back(poisson.done());

  Tally gamma("gamma sum / negative binomial / binomial identity");
  for (int n = 0; n <= 6; ++n) {
    for (int beta = n + 1; beta <= n + 25; ++beta) {
      for (double ratio : ratios) {
        const double p = 1.0 - std::pow(ratio, 1.0 / beta);
        const double gs = dist::truncation_gamma_sum(ratio, beta, n);
        const double nb = dist::cdf(dist::NegBinomial{beta - n, p}, n);
        const double bin = dist::cdf(dist::Binomial{beta, p}, n);
        const double dev = std::max({std::abs(gs - nb), std::abs(nb - bin), std::abs(gs - bin)});
        const bool ok = dist::nb_binomial_identity_check(beta, n, p);
        gamma.add(ok ? 1e-10 - dev : -1.0,
                  "n=" + std::to_string(n) + " beta=" + std::to_string(beta) + " ratio=" + std::to_string(ratio));
      }
    }
  }
  out.push_back(gamma.done());

  Tally mono("binomial variational monotone in n");
  for (double c : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (int k = 0; k <= 3; ++k) {
      double prev = binomial_variational(k + 1, k, c);
      for (int n = k + 2; n <= 60; ++n) {
        const double cur = binomial_variational(n, k, c);
        mono.add(prev - cur + 1e-15, "c=" + std::to_string(c) + " k=" + std::to_string(k) + " n=" + std::to_string(n));
        prev = cur;
      }
    }
  }
  out.push_back(mono.done());

  Tally limit("binomial to poisson limit");
  const std::int64_t r_list[] = {10, 100, 1000, 10000, 100000, 1000000};
  const auto rep = dist::poisson_limit_check(1.0, 1, r_list);
  limit.add(1e-5 - rep.deviations.back(), "r=1e6");
  limit.add(rep.decreasing ? 1.0 : -1.0, "deviation decreasing in r");
  out.push_back(limit.done());
  return out;
}

std::vector<PropertyResult> limit_degenerations() {
  std::vector<PropertyResult> out;
  const auto lc = ConvexityFamily::log_concave();

  Tally entropy("entropy gap as beta grows");
  for (int n = 1; n <= 3; ++n) {
    for (auto [beta, tol] : {std::pair{1e3, 1e-2}, std::pair{1e6, 1e-5}}) {
      const auto r = closed_form_bounds(Functional::entropy(), ConvexityFamily::beta_concave(beta), n, 1.0);
      entropy.add(tol - std::abs((r.a_n - r.a_0) - n), "n=" + std::to_string(n) + " beta=" + std::to_string(beta));
    }
  }
  out.push_back(entropy.done());

  Tally renyi("renyi and truncation bounds as beta grows");
  for (int n = 1; n <= 3; ++n) {
    for (double f_max : {0.5, 2.0}) {
      const Functional fs[] = {Functional::renyi(0.5), Functional::renyi(2.0), Functional::truncation(0.3 * f_max)};
      for (const auto& phi : fs) {
        const auto b = closed_form_bounds(phi, ConvexityFamily::beta_concave(1e6), n, f_max);
        const auto l = closed_form_bounds(phi, lc, n, f_max);
        const double dev = std::max(rel_dev(b.upper, l.upper), rel_dev(b.lower, l.lower));
        renyi.add(1e-5 - dev, label(phi, lc, n, f_max));
      }
    }
  }
  out.push_back(renyi.done());

  Tally alpha("renyi gap as alpha approaches 1");
  for (int n = 1; n <= 3; ++n) {
    for (double a : {1.0 - 1e-4, 1.0 + 1e-4}) {
      for (double beta : {0.0, 8.0}) {
        const auto family = beta == 0.0 ? lc : ConvexityFamily::beta_concave(beta);
        const auto r = closed_form_bounds(Functional::renyi(a), family, n, 1.0);
        const auto [lo, hi] = renyi_entropy_bracket(r, a);
        const auto e = closed_form_bounds(Functional::entropy(), family, n, 1.0);
        alpha.add(1e-3 - std::abs((hi - lo) - (e.upper - e.lower)),
                  "n=" + std::to_string(n) + " alpha=" + std::to_string(a) + " " + family.describe());
      }
    }
  }
  out.push_back(alpha.done());
  return out;
}

PropertyResult mc_quadrature_agreement(const Budget& budget) {
  Tally tally("monte carlo agrees with quadrature");
  Budget quad;
  quad.abs_tol = 1e-9;
  quad.method = Method::Quadrature;
  Budget mc = budget;
  mc.method = Method::MonteCarlo;

  Eigen::MatrixXd Q(1, 1);
  Q << 0.8;
  Eigen::VectorXd c(1);
  c << 0.3;
  const std::vector<DensitySpec> specs = {
      make_extremal_linear(ConvexityFamily::log_concave(), 1, 1.0),
      make_extremal_linear(ConvexityFamily::beta_concave(3.0), 1, 0.7),
      make_uniform_box(ConvexityFamily::log_concave(), 1, 2.0),
      make_quadratic(ConvexityFamily::log_concave(), Q, c, 0.0),
      make_quadratic(ConvexityFamily::beta_concave(2.5), Q, c, 1.0),
  };
  int idx = 0;
  for (const auto& spec : specs) {
    for (const auto& phi : {Functional::entropy(), Functional::renyi(2.0)}) {
      mc.seed = budget.seed + static_cast<std::uint64_t>(idx++);
      const auto q = integrate_functional(spec, phi, quad);
      const auto m = integrate_functional(spec, phi, mc);
      tally.add(4.0 * m.std_error + q.margin() - std::abs(q.value - m.value),
                spec.form_name() + " " + phi.describe());
    }
  }
  return tally.done();
}

}  // namespace cvxbound
