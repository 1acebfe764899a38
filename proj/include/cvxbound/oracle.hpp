#pragma once

// Independent evaluation of I_phi(f) and related quantities for concrete
// densities: nested adaptive quadrature in dimension 1 and 2, seeded Monte
// Carlo in any dimension.

#include <cstdint>
#include <optional>
#include <string>

#include "cvxbound/density.hpp"
#include "cvxbound/model.hpp"

namespace cvxbound {

enum class Method { Quadrature, MonteCarlo, ClosedForm };
const char* to_string(Method m);

struct OracleEstimate {
  double value = 0.0;
  Method method = Method::Quadrature;
  double abs_tol = 0.0;       ///< quadrature: requested absolute tolerance
  double error = 0.0;         ///< quadrature: error estimate
  double std_error = 0.0;     ///< Monte Carlo: sample sd / sqrt(sample_count)
  long long sample_count = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  bool converged = true;

  /// abs_tol for quadrature, 3 * std_error for Monte Carlo, 0 for closed forms.
  double margin() const;
};

struct Budget {
  std::optional<double> abs_tol;  ///< default 1e-8 for n = 1, 1e-6 for n = 2
  long long samples = 1'000'000;
  std::uint64_t seed = 20240611;
  int workers = 1;
  std::optional<Method> method;   ///< default: quadrature for n <= 2
};

OracleEstimate integrate_functional(const DensitySpec& spec, const Functional& functional, const Budget& budget = {});

/// Differential entropy h(f) in nats.
OracleEstimate differential_entropy(const DensitySpec& spec, const Budget& budget = {});

/// int min(f, t) dx; exactly 1 when t >= f_max.
OracleEstimate truncated_mass(const DensitySpec& spec, double t, const Budget& budget = {});

/// t in (0, f_max] with |truncated_mass(t) - gamma| <= tol, by bisection in log t.
double solve_threshold(const DensitySpec& spec, double gamma, double tol, const Budget& budget = {});

/// Entropy of gamma^-1 min(f, t*) where t* = solve_threshold(gamma).
struct TruncatedEntropy {
  OracleEstimate entropy;
  double t_star = 0.0;
};
TruncatedEntropy truncated_entropy(const DensitySpec& spec, double gamma, const Budget& budget = {});

/// Entropy of min(f, t) / int min(f, t) for a given level t.
OracleEstimate truncated_entropy_at(const DensitySpec& spec, double t, const Budget& budget = {});

struct RandomDensityConfig {
  enum class Generator { MaxAffine, Quadratic };
  ConvexityFamily family = ConvexityFamily::log_concave();
  int n = 1;
  Generator generator = Generator::Quadratic;
  int pieces = 4;  ///< number of affine pieces for MaxAffine
  std::uint64_t seed = 0;
};

/// Normalized psi-concave density with convex g by construction.
DensitySpec generate_random_density(const RandomDensityConfig& config);

/// Factors of the slice inequality for coordinate i:
///   sup_{x_{-i}} int f dx_i  and  int sup_{x_i} f dx_{-i}.
struct SliceTerms {
  double sup_marginal = 0.0;
  double integral_of_sup = 0.0;
  bool sup_is_lower_estimate = false;  ///< sup located numerically
};
SliceTerms slice_terms(const DensitySpec& spec, int coordinate, const Budget& budget = {});

struct SliceCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  SliceTerms terms;
};

/// (sup int f dx_n) * (int sup_{x_n} f) <= n sup f.
SliceCheck slice_inequality_check(const DensitySpec& spec, const Budget& budget = {});

}  // namespace cvxbound
