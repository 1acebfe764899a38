#pragma once

// Dual total correlation and the bracket on exact common information for
// beta-concave joint densities with integer beta >= 2n. Gaussian models run
// in a labelled limit mode (beta -> infinity) where the gap formula is a
// heuristic rather than a theorem.

#include <optional>
#include <string>
#include <vector>

#include "cvxbound/density.hpp"
#include "cvxbound/oracle.hpp"

namespace cvxbound {

/// Differential entropies h(X) and h(X_{-i}) for i = 0..n-1.
struct ModelEntropies {
  double joint = 0.0;
  std::vector<double> leave_one_out;
};

struct JointDensityModel {
  DensitySpec spec;
  std::optional<ModelEntropies> closed_form;
  bool limit_mode = false;
  int beta = 0;  ///< integer concavity exponent; 0 in limit mode
};

/// Validates n >= 2 and integer beta >= 2n (Student-t: beta = (nu + n) / 2),
/// or Gaussian (limit mode). Throws InvalidArgument otherwise, unless
/// allow_heuristic is set, in which case a beta-concave spec outside that
/// range also runs in limit mode.
JointDensityModel make_joint_model(const DensitySpec& spec, bool allow_heuristic = false);

double gaussian_entropy(const Eigen::MatrixXd& cov);
double student_t_entropy(double nu, const Eigen::MatrixXd& scale);

/// 2n^2 + 20 n log n.
double common_info_gap(int n);
/// n^2 + 9 n log n, reported alongside the limit-mode bracket.
double log_concave_gap(int n);
/// (n+1)(1 + 2 log 2 + log(n+1)).
double covering_constant(int n);

/// I_D = sum_i h(X_{-i}) - (n-1) h(X). Closed forms unless the budget forces
/// Monte Carlo, in which case one sample set drives every term.
OracleEstimate dual_total_correlation(const JointDensityModel& model, const Budget& budget = {});

struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct ThresholdReport {
  double t_star = 0.0;
  double f_max = 0.0;
  double log_ratio = 0.0;  ///< log(f_max / t_star)
  double bound = 0.0;      ///< 6n
  bool holds = false;
  std::vector<ChainLink> chain;  ///< empty in limit mode
};

/// t* solving int min(f, t) = 1/(n+1), the ratio check log(f_max/t*) <= 6n,
/// and each link of the binomial / Hoeffding chain behind it.
ThresholdReport threshold_ratio_check(const JointDensityModel& model, const Budget& budget = {});

struct SliceBound {
  int coordinate = 0;
  double log_integral_of_sup = 0.0;  ///< log int sup_{x_i} f dx_{-i}
  double via_marginal_sup = 0.0;     ///< log n - log sup(marginal) + log f_max
  double bound = 0.0;                ///< h(X_{-i}) - h(X) + log n + 2n
  bool holds = false;
};

struct UpperBoundAssembly {
  double truncated_entropy = 0.0;
  double entropy = 0.0;
  double t_star = 0.0;
  double log_ratio = 0.0;
  double first_term_lhs = 0.0;  ///< truncated entropy - h(X)
  double first_term_rhs = 0.0;  ///< log_ratio + 2n
  bool first_term_holds = false;
  std::vector<SliceBound> slices;
  double constant = 0.0;          ///< covering_constant(n)
  double covering_rhs = 0.0;      ///< truncated entropy + sum of slice terms + constant
  double assembled = 0.0;         ///< I_D + log_ratio + 2n + n (log n + 2n) + constant
  double assembled_worst = 0.0;   ///< same with log_ratio = 6n
  double g_upper_raw = 0.0;       ///< I_D + gap
  bool assembled_within_gap = false;
  double tolerance = 0.0;
};

/// Each term of the covering bound evaluated numerically and bounded term by term.
UpperBoundAssembly upper_bound_assembly(const JointDensityModel& model, const Budget& budget = {});

struct CommonInfoBracket {
  OracleEstimate i_d;
  double g_lower = 0.0;
  double g_upper = 0.0;
  int n = 0;
  int beta = 0;
  bool limit_mode = false;
  std::string mode;  ///< "beta-concave" or "beta-to-infinity heuristic"
  ThresholdReport threshold;
  UpperBoundAssembly assembly;
};

CommonInfoBracket g_bracket(const JointDensityModel& model, const Budget& budget = {});

}  // namespace cvxbound
