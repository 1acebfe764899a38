#pragma once

// Property suites comparing the bound engine against the oracle and the
// discrete identities. Each suite returns one PropertyResult.

#include <cstdint>
#include <string>
#include <vector>

#include "cvxbound/bounds.hpp"
#include "cvxbound/oracle.hpp"

namespace cvxbound {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;  ///< worst slack; negative on failure
  long checks = 0;
  bool expected_fail = false;
  std::string detail;
};

/// One (functional, family) pair with in-range parameters.
struct PairConfig {
  Functional functional;
  ConvexityFamily family;
};

/// The six built-in pairs: entropy, Renyi(alpha), truncation(t) on
/// log-concave and beta-concave(beta).
std::vector<PairConfig> builtin_pairs(double alpha, double beta, double t);

/// Quadrature path vs closed formulas over n in {1,2,3}, f_max in {0.5,1,2}.
PropertyResult closed_form_reproduction(double rel_tol = 1e-6);

/// Orthant extremal attains F_n/G_n and the box attains F_0/G_0, n in {1,2}.
PropertyResult extremal_attainment(double tol = 1e-6);

struct ContainmentConfig {
  int per_combination = 200;
  std::vector<int> dims{1, 2};
  std::uint64_t seed = 1;
  Budget budget;
};

/// Random densities stay inside the validated bracket, one result per
/// (family, functional) combination.
std::vector<PropertyResult> containment(const ContainmentConfig& config);

/// Counterexample densities beat A = candidate - offset by more than min_margin.
PropertyResult counterexample_soundness(double offset = 0.05, double min_margin = 0.04);

/// Counterexample for a user-chosen pair at A = F_n(b)/G_n(b) - epsilon;
/// reported as an expected failure of the bound A.
PropertyResult injected_violation(const Functional& functional, const ConvexityFamily& family, int n, double f_max,
                                  double epsilon = 0.05);

/// Poisson-sum, gamma-sum / negative binomial / binomial identities,
/// monotonicity of the binomial variational quantity and the Poisson limit.
std::vector<PropertyResult> identity_suite();

/// beta -> infinity and alpha -> 1 degenerations of the closed-form gaps.
std::vector<PropertyResult> limit_degenerations();

/// Monte Carlo and quadrature agree within 4 standard errors on 1-D specs.
PropertyResult mc_quadrature_agreement(const Budget& budget);

}  // namespace cvxbound
