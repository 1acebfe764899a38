#include "cvxbound/common_info.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>
#include <thread>

#include "cvxbound/bounds.hpp"
#include "cvxbound/discrete.hpp"
#include "cvxbound/error.hpp"
#include "cvxbound/sampling.hpp"

namespace cvxbound {
namespace {

double half_log_det(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw InvalidArgument("matrix is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  return L.diagonal().array().log().sum();
}

double closed_entropy(const DensitySpec& spec) {
  if (const auto* g = std::get_if<Gaussian>(&spec.form())) return gaussian_entropy(g->cov);
  if (const auto* t = std::get_if<MultivariateT>(&spec.form())) return student_t_entropy(t->nu, t->scale);
  throw Unsupported("no closed-form entropy for " + spec.form_name());
}

bool is_elliptical(const DensitySpec& spec) {
  return std::holds_alternative<Gaussian>(spec.form()) || std::holds_alternative<MultivariateT>(spec.form());
}

ModelEntropies entropies(const JointDensityModel& model, const Budget& budget) {
  if (model.closed_form) return *model.closed_form;
  const int n = model.spec.dimension();
  ModelEntropies e;
  e.joint = differential_entropy(model.spec, budget).value;
  for (int i = 0; i < n; ++i) e.leave_one_out.push_back(differential_entropy(drop_coordinate(model.spec, i), budget).value);
  return e;
}

double solve_tolerance(const DensitySpec& spec, const Budget& budget) {
  const bool mc = budget.method ? *budget.method == Method::MonteCarlo : spec.dimension() > 2;
  if (mc) return 1e-12;
  return 10.0 * budget.abs_tol.value_or(spec.dimension() == 1 ? 1e-8 : 1e-6);
}

ThresholdReport threshold_report(const JointDensityModel& model, double t_star) {
  const int n = model.spec.dimension();
  ThresholdReport r;
  r.t_star = t_star;
  r.f_max = model.spec.f_max();
  r.log_ratio = std::log(r.f_max / t_star);
  r.bound = 6.0 * n;
  r.holds = r.log_ratio <= r.bound;
  if (model.limit_mode) return r;

  const int beta = model.beta;
  const double c = r.log_ratio;
  const double gamma = 1.0 / (n + 1);
  const auto link = [&](std::string name, double lhs, double rhs, bool strict = false) {
    r.chain.push_back({std::move(name), lhs, rhs, strict ? lhs < rhs : lhs <= rhs * (1.0 + 1e-6) + 1e-12});
  };
  const double b_beta = binomial_variational(beta, n, c);
  const double b_2n = binomial_variational(2 * n, n, c);
  link("mass <= P(B(beta, 1-(t/f)^(1/beta)) <= n)", gamma, b_beta);
  link("beta -> 2n monotonicity", b_beta, b_2n);
  const double at_6n = binomial_variational(2 * n, n, 6.0 * n);
  const double at_95 = dist::cdf(dist::Binomial{2 * n, 0.95}, n);
  link("ratio e^-6n gives p >= 19/20", at_6n, at_95);
  link("Hoeffding", at_95, std::exp(-4.0 * n * 0.45 * 0.45));
  link("exp(-0.81 n) <= exp(-0.8 n)", std::exp(-0.81 * n), std::exp(-0.8 * n));
  link("exp(-0.8 n) < 1/(n+1)", std::exp(-0.8 * n), gamma, true);
  return r;
}

UpperBoundAssembly assembly_at(const JointDensityModel& model, double t_star, double i_d, const ModelEntropies& ent,
                               const Budget& budget) {
  const auto& spec = model.spec;
  const int n = spec.dimension();
  UpperBoundAssembly a;
  const OracleEstimate te = truncated_entropy_at(spec, t_star, budget);
  a.truncated_entropy = te.value;
  a.entropy = ent.joint;
  a.t_star = t_star;
  a.log_ratio = std::log(spec.f_max() / t_star);
  a.tolerance = te.margin() + 1e-9;
  a.first_term_lhs = a.truncated_entropy - a.entropy;
  a.first_term_rhs = a.log_ratio + 2.0 * n;
  a.first_term_holds = a.first_term_lhs <= a.first_term_rhs + a.tolerance;

  const double log_n = std::log(static_cast<double>(n));
  double slice_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const SliceTerms st = slice_terms(spec, i, budget);
    SliceBound s;
    s.coordinate = i;
    s.log_integral_of_sup = std::log(st.integral_of_sup);
    s.via_marginal_sup = log_n - std::log(st.sup_marginal) + std::log(spec.f_max());
    s.bound = ent.leave_one_out[static_cast<std::size_t>(i)] - ent.joint + log_n + 2.0 * n;
    s.holds = s.log_integral_of_sup <= s.bound + a.tolerance;
    slice_sum += s.log_integral_of_sup;
    a.slices.push_back(s);
  }
  a.constant = covering_constant(n);
  a.covering_rhs = a.truncated_entropy + slice_sum + a.constant;
  const double tail = 2.0 * n + n * (log_n + 2.0 * n) + a.constant;
  a.assembled = i_d + a.log_ratio + tail;
  a.assembled_worst = i_d + 6.0 * n + tail;
  a.g_upper_raw = i_d + common_info_gap(n);
  a.assembled_within_gap = a.assembled <= a.g_upper_raw + a.tolerance;
  return a;
}

double i_d_from(const ModelEntropies& e) {
  double sum = 0.0;
  for (double h : e.leave_one_out) sum += h;
  return sum - (static_cast<double>(e.leave_one_out.size()) - 1.0) * e.joint;
}

}  // namespace

double gaussian_entropy(const Eigen::MatrixXd& cov) {
  const double n = static_cast<double>(cov.rows());
  return 0.5 * n * std::log(2.0 * std::numbers::pi * std::numbers::e) + half_log_det(cov);
}

double student_t_entropy(double nu, const Eigen::MatrixXd& scale) {
  if (!(nu > 0.0)) throw InvalidArgument("degrees of freedom must be positive");
  const double n = static_cast<double>(scale.rows());
  const double beta = 0.5 * (nu + n);
  using boost::math::digamma;
  return half_log_det(scale) + std::lgamma(0.5 * nu) + 0.5 * n * std::log(nu * std::numbers::pi) -
         std::lgamma(beta) + beta * (digamma(beta) - digamma(0.5 * nu));
}

double common_info_gap(int n) { return 2.0 * n * n + 20.0 * n * std::log(static_cast<double>(n)); }

double log_concave_gap(int n) { return static_cast<double>(n) * n + 9.0 * n * std::log(static_cast<double>(n)); }

double covering_constant(int n) { return (n + 1.0) * (1.0 + 2.0 * std::log(2.0) + std::log(n + 1.0)); }

JointDensityModel make_joint_model(const DensitySpec& spec, bool allow_heuristic) {
  const int n = spec.dimension();
  if (n < 2) throw InvalidArgument("joint models need dimension >= 2");
  JointDensityModel m{spec, std::nullopt, false, 0};
  if (std::holds_alternative<Gaussian>(spec.form())) {
    m.limit_mode = true;
  } else {
    if (spec.family().kind() != FamilyKind::BetaConcave) {
      throw InvalidArgument("joint model must be beta-concave or Gaussian");
    }
    const double beta = spec.family().beta();
    if (beta != std::floor(beta) || beta < 2.0 * n) {
      if (!allow_heuristic) {
        throw InvalidArgument("common-information bracket needs integer beta >= 2n (beta=" + std::to_string(beta) +
                              ", n=" + std::to_string(n) + ")");
      }
      m.limit_mode = true;
    } else {
      m.beta = static_cast<int>(beta);
    }
  }
  if (is_elliptical(spec)) {
    ModelEntropies e;
    e.joint = closed_entropy(spec);
    for (int i = 0; i < n; ++i) e.leave_one_out.push_back(closed_entropy(drop_coordinate(spec, i)));
    m.closed_form = e;
  }
  return m;
}

OracleEstimate dual_total_correlation(const JointDensityModel& model, const Budget& budget) {
  const auto& spec = model.spec;
  const int n = spec.dimension();
  if (model.closed_form && budget.method != Method::MonteCarlo) {
    OracleEstimate e;
    e.method = Method::ClosedForm;
    e.value = i_d_from(*model.closed_form);
    return e;
  }
  if (!is_elliptical(spec) || budget.method != Method::MonteCarlo) {
    const ModelEntropies ent = entropies(model, budget);
    OracleEstimate e;
    e.method = budget.method.value_or(n <= 2 ? Method::Quadrature : Method::MonteCarlo);
    e.value = i_d_from(ent);
    return e;
  }

  // (n-1) log f(X) - sum_i log f_{-i}(X_{-i}) over one shared sample set.
  std::vector<DensitySpec> marginals;
  for (int i = 0; i < n; ++i) marginals.push_back(drop_coordinate(spec, i));
  const auto sampler = make_sampler(spec);
  const long long total = budget.samples;
  const int workers = budget.workers;
  if (total < 2 || workers < 1) throw InvalidArgument("Monte Carlo needs >= 2 samples and >= 1 worker");
  std::vector<double> terms(static_cast<std::size_t>(total));
  const auto run = [&](int w, long long begin, long long end) {
    Rng rng(stream_seed(budget.seed, static_cast<std::uint64_t>(w)));
    std::vector<double> x(static_cast<std::size_t>(n)), sub(static_cast<std::size_t>(n - 1));
    for (long long j = begin; j < end; ++j) {
      sampler->draw(rng, x);
      double term = (n - 1.0) * spec.log_eval(x);
      for (int i = 0; i < n; ++i) {
        for (int k = 0, kk = 0; k < n; ++k) {
          if (k != i) sub[static_cast<std::size_t>(kk++)] = x[static_cast<std::size_t>(k)];
        }
        term -= marginals[static_cast<std::size_t>(i)].log_eval(sub);
      }
      terms[static_cast<std::size_t>(j)] = term;
    }
  };
  std::vector<std::thread> threads;
  long long begin = 0;
  for (int w = 0; w < workers; ++w) {
    const long long count = total / workers + (w < total % workers ? 1 : 0);
    if (w + 1 == workers) {
      run(w, begin, begin + count);
    } else {
      threads.emplace_back(run, w, begin, begin + count);
    }
    begin += count;
  }
  for (auto& t : threads) t.join();

  double mean = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const double delta = terms[j] - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (terms[j] - mean);
  }
  OracleEstimate e;
  e.method = Method::MonteCarlo;
  e.value = mean;
  e.std_error = std::sqrt(m2 / static_cast<double>(total - 1) / static_cast<double>(total));
  e.error = e.std_error;
  e.sample_count = total;
  e.seed = budget.seed;
  e.workers = workers;
  return e;
}

ThresholdReport threshold_ratio_check(const JointDensityModel& model, const Budget& budget) {
  const double gamma = 1.0 / (model.spec.dimension() + 1);
  const double t_star = solve_threshold(model.spec, gamma, solve_tolerance(model.spec, budget), budget);
  return threshold_report(model, t_star);
}

UpperBoundAssembly upper_bound_assembly(const JointDensityModel& model, const Budget& budget) {
  const double gamma = 1.0 / (model.spec.dimension() + 1);
  const double t_star = solve_threshold(model.spec, gamma, solve_tolerance(model.spec, budget), budget);
  const ModelEntropies ent = entropies(model, budget);
  return assembly_at(model, t_star, i_d_from(ent), ent, budget);
}

CommonInfoBracket g_bracket(const JointDensityModel& model, const Budget& budget) {
  const int n = model.spec.dimension();
  CommonInfoBracket b;
  b.n = n;
  b.beta = model.beta;
  b.limit_mode = model.limit_mode;
  b.mode = model.limit_mode ? "beta-to-infinity heuristic" : "beta-concave";
  b.i_d = dual_total_correlation(model, budget);
  b.g_lower = b.i_d.value;
  b.g_upper = b.i_d.value + common_info_gap(n);

  const double gamma = 1.0 / (n + 1);
  const double t_star = solve_threshold(model.spec, gamma, solve_tolerance(model.spec, budget), budget);
  b.threshold = threshold_report(model, t_star);
  const ModelEntropies ent = entropies(model, budget);
  b.assembly = assembly_at(model, t_star, b.i_d.value, ent, budget);
  return b;
}

}  // namespace cvxbound
