#pragma once

// Tight upper and lower bounds on I_phi(f) over psi-concave densities with a
// given sup-norm, the conditions validating them, the extremal densities that
// attain them, and the closed-form brackets for the built-in pairs.

#include <optional>
#include <string>
#include <utility>

#include "cvxbound/antideriv.hpp"
#include "cvxbound/density.hpp"

namespace cvxbound {

enum class Evidence { Proved, NumericallyVerified, Unverified, Violated };
const char* to_string(Evidence e);

enum class Direction { Upper, Lower };
const char* to_string(Direction d);

/// Outcome of checking conditions (i)-(iii) for one constant A.
struct ConditionReport {
  Direction direction = Direction::Upper;
  double A = 0.0;
  Evidence cond_i = Evidence::Unverified;    ///< sign of F_n(b) - A G_n(b)
  Evidence cond_ii = Evidence::Unverified;   ///< sign of F_0(b) - A G_0(b)
  Evidence cond_iii = Evidence::Unverified;  ///< at most one zero of F_0 - A G_0 on [b, inf)
  double h_n = 0.0;
  double h_0 = 0.0;
  int sign_changes = -1;  ///< from the grid scan; -1 when not scanned
  std::string note;

  bool holds() const;
  /// Weakest evidence across the three conditions.
  Evidence overall() const;
};

/// Checks the upper-bound conditions (H <= 0) or the lower-bound ones (H >= 0).
/// Ties count as satisfied.
ConditionReport check_conditions(const AntiderivativeTable& table, double A,
                                 Direction direction = Direction::Upper);

struct BoundResult {
  double lower = 0.0;
  double upper = 0.0;
  double a_n = 0.0;  ///< F_n(b) / G_n(b)
  double a_0 = 0.0;  ///< F_0(b) / G_0(b)
  ConditionReport upper_conditions;
  ConditionReport lower_conditions;
  double b = 0.0;
  int n = 0;
  double f_max = 0.0;
  std::string provenance;  ///< "closed-form", "antiderivative-closed-form" or "quadrature"
  std::string formula;     ///< name of the closed formula used, if any
  std::optional<double> cross_check_deviation;

  /// Weakest evidence across both brackets.
  Evidence evidence() const;
};

struct BoundOptions {
  double tol = 1e-11;
  bool force_quadrature = false;
  bool cross_check = true;
};

/// Bracket [min, max] of the two candidates, each validated by check_conditions.
/// When a closed formula exists it supplies the reported values and is compared
/// with the antiderivative path. Throws ConditionFailed if a condition is violated.
BoundResult tight_bounds(const Functional& functional, const ConvexityFamily& family, int n, double f_max,
                         const BoundOptions& options = {});

/// True when closed_form_bounds accepts these arguments.
bool closed_form_available(const Functional& functional, const ConvexityFamily& family, int n, double f_max);

/// Exact bracket from the closed formulas for the six built-in pairs.
BoundResult closed_form_bounds(const Functional& functional, const ConvexityFamily& family, int n, double f_max);

/// Renyi entropy bracket log(I) / (1 - alpha) from an I_phi bracket.
std::pair<double, double> renyi_entropy_bracket(const BoundResult& r, double alpha);

/// Which condition the constant A breaks: (i) for the orthant extremal, (ii) for the box.
enum class ViolatedCondition { I, II };

/// Density whose I_phi exceeds A, for A strictly below the matching candidate.
DensitySpec counterexample_density(const Functional& functional, const ConvexityFamily& family, int n,
                                   double f_max, double A, ViolatedCondition violated);

/// P(B(n, 1 - exp(-c/n)) <= k).
double binomial_variational(int n, int k, double c);

}  // namespace cvxbound
