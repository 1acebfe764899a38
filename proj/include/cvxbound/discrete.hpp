#pragma once

// CDFs of the Poisson, binomial and negative binomial laws, the Gamma
// function, and the identities linking them to the truncation bounds.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace cvxbound::dist {

struct Poisson {
  double lambda;
};

struct Binomial {
  std::int64_t trials;
  double p;
};

/// Number of successes (each with probability p) observed before the
/// `failures`-th failure.
struct NegBinomial {
  std::int64_t failures;
  double p;
};

using DistParams = std::variant<Poisson, Binomial, NegBinomial>;

/// P(X <= k). Returns 0 for k < 0. Throws InvalidArgument on out-of-range
/// parameters.
double cdf(const DistParams& params, std::int64_t k);

/// Gamma(z) for z > 0.
double gamma_fn(double z);

/// (t/f)^(1-n/beta) * sum_{k<=n} Gamma(beta-n+k) / (Gamma(beta-n) k!) * (1-(t/f)^(1/beta))^k,
/// written in terms of ratio = t / f_max.
double truncation_gamma_sum(double ratio, double beta, int n);

/// |P(NB(beta-n, p) <= n) - P(B(beta, p) <= n)| <= 1e-10. Requires beta >= n+1.
bool nb_binomial_identity_check(int beta, int n, double p);

struct PoissonLimitReport {
  std::vector<double> deviations;  ///< one per entry of r_list
  double max_deviation = 0.0;
  bool decreasing = true;          ///< deviations never increase along r_list
};

/// |P(B(r, 1-exp(-lambda/r)) <= n) - P(Poi(lambda) <= n)| for each r.
PoissonLimitReport poisson_limit_check(double lambda, int n, std::span<const std::int64_t> r_list);

}  // namespace cvxbound::dist
