#include "cvxbound/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cvxbound/error.hpp"

namespace cvxbound::dist {
namespace {

// Sums exp(l_j) for log-terms l_j using a max shift and Neumaier compensation.
double sum_log_terms(const std::vector<double>& logs) {
  if (logs.empty()) return 0.0;
  const double m = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(m)) return m > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  double sum = 0.0, comp = 0.0;
  for (double l : logs) {
    const double term = std::exp(l - m);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return std::exp(m) * (sum + comp);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Collects log-terms of an upper tail until they stop mattering.
template <class Next>
double upper_tail(double log_first, std::int64_t first, std::int64_t last, Next next_log_ratio) {
  std::vector<double> logs{log_first};
  double l = log_first;
  for (std::int64_t j = first; j < last; ++j) {
    l += next_log_ratio(j);
    logs.push_back(l);
    if (l < log_first - 60.0) break;
  }
  return sum_log_terms(logs);
}

double poisson_cdf(double lambda, std::int64_t k) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("Poisson rate must be >= 0");
  if (k < 0) return 0.0;
  if (lambda == 0.0) return 1.0;
  const double log_lambda = std::log(lambda);
  if (static_cast<double>(k) <= lambda + 10.0 * std::sqrt(lambda) + 10.0) {
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(k) + 1);
    double l = -lambda;
    for (std::int64_t j = 0; j <= k; ++j) {
      logs.push_back(l);
      l += log_lambda - std::log(static_cast<double>(j + 1));
    }
    return clamp01(sum_log_terms(logs));
  }
  const double kk = static_cast<double>(k + 1);
  const double first = kk * log_lambda - lambda - std::lgamma(kk + 1.0);
  const double tail = upper_tail(first, k + 1, std::numeric_limits<std::int64_t>::max(),
                                 [&](std::int64_t j) { return log_lambda - std::log(static_cast<double>(j + 1)); });
  return clamp01(1.0 - tail);
}

double binomial_cdf(std::int64_t r, double p, std::int64_t k) {
  if (r < 0) throw InvalidArgument("binomial trial count must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("binomial probability must lie in [0, 1]");
  if (k < 0) return 0.0;
  if (k >= r || p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double rd = static_cast<double>(r);
  const double mean = rd * p;
  const double sd = std::sqrt(rd * p * (1.0 - p));
  if (static_cast<double>(k) <= mean + 10.0 * sd + 10.0) {
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(k) + 1);
    double l = rd * log_q;
    for (std::int64_t j = 0; j <= k; ++j) {
      logs.push_back(l);
      l += std::log(static_cast<double>(r - j) / static_cast<double>(j + 1)) + log_p - log_q;
    }
    return clamp01(sum_log_terms(logs));
  }
  const double kk = static_cast<double>(k + 1);
  const double first = std::lgamma(rd + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(rd - kk + 1.0) +
                       kk * log_p + (rd - kk) * log_q;
  const double tail = upper_tail(first, k + 1, r, [&](std::int64_t j) {
    return std::log(static_cast<double>(r - j) / static_cast<double>(j + 1)) + log_p - log_q;
  });
  return clamp01(1.0 - tail);
}

double neg_binomial_cdf(std::int64_t r, double p, std::int64_t k) {
  if (r < 1) throw InvalidArgument("negative binomial failure count must be >= 1");
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("negative binomial probability must lie in [0, 1)");
  if (k < 0) return 0.0;
  if (p == 0.0) return 1.0;
  const double log_p = std::log(p);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(k) + 1);
  double l = static_cast<double>(r) * std::log1p(-p);
  for (std::int64_t j = 0; j <= k; ++j) {
    logs.push_back(l);
    l += std::log(static_cast<double>(j + r) / static_cast<double>(j + 1)) + log_p;
  }
  return clamp01(sum_log_terms(logs));
}

}  // namespace

double cdf(const DistParams& params, std::int64_t k) {
  struct Visitor {
    std::int64_t k;
    double operator()(const Poisson& d) const { return poisson_cdf(d.lambda, k); }
    double operator()(const Binomial& d) const { return binomial_cdf(d.trials, d.p, k); }
    double operator()(const NegBinomial& d) const { return neg_binomial_cdf(d.failures, d.p, k); }
  };
  return std::visit(Visitor{k}, params);
}

double gamma_fn(double z) {
  if (!(z > 0.0)) throw InvalidArgument("gamma_fn requires z > 0");
  return std::tgamma(z);
}

double truncation_gamma_sum(double ratio, double beta, int n) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidArgument("t/f_max must lie in (0, 1]");
  if (!(beta > n)) throw InvalidArgument("Gamma-sum form requires beta > n");
  const double q = std::pow(ratio, 1.0 / beta);
  const double prefactor = std::pow(ratio, 1.0 - n / beta);
  const double shape = beta - n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    double coeff;
    if (shape + k < 170.0) {
      coeff = gamma_fn(shape + k) / (gamma_fn(shape) * gamma_fn(k + 1.0));
    } else {
      coeff = std::exp(std::lgamma(shape + k) - std::lgamma(shape) - std::lgamma(k + 1.0));
    }
    sum += coeff * std::pow(1.0 - q, k);
  }
  return prefactor * sum;
}

bool nb_binomial_identity_check(int beta, int n, double p) {
  if (n < 0 || beta < n + 1) throw InvalidArgument("identity check requires beta >= n + 1");
  const double nb = cdf(NegBinomial{beta - n, p}, n);
  const double bin = cdf(Binomial{beta, p}, n);
  return std::abs(nb - bin) <= 1e-10;
}

PoissonLimitReport poisson_limit_check(double lambda, int n, std::span<const std::int64_t> r_list) {
  PoissonLimitReport report;
  const double poi = cdf(Poisson{lambda}, n);
  for (std::int64_t r : r_list) {
    if (r < 1) throw InvalidArgument("trial counts must be >= 1");
    const double p = -std::expm1(-lambda / static_cast<double>(r));
    const double dev = std::abs(cdf(Binomial{r, p}, n) - poi);
    if (!report.deviations.empty() && dev > report.deviations.back()) report.decreasing = false;
    report.deviations.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  return report;
}

}  // namespace cvxbound::dist
