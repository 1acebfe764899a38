#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvxbound/common_info.hpp"
#include "cvxbound/error.hpp"
#include "oracles.hpp"

using namespace cvxbound;

namespace {

Eigen::MatrixXd equicorrelation(int n, double rho) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Constant(n, n, rho);
  S.diagonal().setOnes();
  return S;
}

Budget mc_budget(long long samples, std::uint64_t seed, int workers) {
  Budget b;
  b.method = Method::MonteCarlo;
  b.samples = samples;
  b.seed = seed;
  b.workers = workers;
  return b;
}

}  // namespace

TEST(CommonInfo, GapFormula) {
  EXPECT_NEAR(common_info_gap(2), 35.725887222397816, 1e-12);
  for (int n : {2, 3, 5}) {
    EXPECT_DOUBLE_EQ(common_info_gap(n), 2.0 * n * n + 20.0 * n * std::log(n));
    EXPECT_DOUBLE_EQ(log_concave_gap(n), 1.0 * n * n + 9.0 * n * std::log(n));
  }
}

TEST(CommonInfo, StudentTBracketGapIsExact) {
  for (int n : {2, 3}) {
    const auto model = make_joint_model(make_multivariate_t(3.0 * n, equicorrelation(n, 0.3)));
    EXPECT_FALSE(model.limit_mode);
    EXPECT_EQ(model.beta, 2 * n);
    const auto b = g_bracket(model);
    EXPECT_EQ(b.g_upper - b.g_lower, common_info_gap(n));
    EXPECT_EQ(b.g_lower, b.i_d.value);
    EXPECT_TRUE(b.threshold.holds);
    EXPECT_LE(b.threshold.log_ratio, 6.0 * n);
    for (const auto& link : b.threshold.chain) EXPECT_TRUE(link.holds) << link.name;
  }
}

TEST(CommonInfo, GaussianMutualInformation) {
  const auto model = make_joint_model(make_gaussian(equicorrelation(2, 0.5)));
  EXPECT_TRUE(model.limit_mode);
  const auto b = g_bracket(model);
  EXPECT_NEAR(b.i_d.value, -0.5 * std::log(0.75), 1e-6);
  EXPECT_EQ(b.mode, "beta-to-infinity heuristic");
}

TEST(CommonInfo, DualTotalCorrelationSign) {
  // Three-dimensional Gaussian: I_D = sum_i h(X_-i) - 2 h(X) >= 0.
  const auto model = make_joint_model(make_gaussian(equicorrelation(3, 0.4)));
  const auto id = dual_total_correlation(model);
  const Eigen::MatrixXd S = equicorrelation(3, 0.4);
  const double ref = 3.0 * 0.5 * std::log(equicorrelation(2, 0.4).determinant()) - 0.5 * 2.0 * std::log(S.determinant());
  EXPECT_NEAR(id.value, ref, 1e-12);
  EXPECT_GT(id.value, 0.0);
}

TEST(CommonInfo, StudentTEntropyMatchesQuadrature) {
  for (double nu : {3.0, 6.0}) {
    const auto s = make_multivariate_t(nu, Eigen::MatrixXd::Constant(1, 1, 1.7));
    const double ref = oracle::line_integral([&](double x) {
      const double f = s.eval(std::span<const double>(&x, 1));
      return f > 0.0 ? -f * std::log(f) : 0.0;
    });
    EXPECT_NEAR(student_t_entropy(nu, Eigen::MatrixXd::Constant(1, 1, 1.7)), ref, 1e-9);
  }
}

TEST(CommonInfo, MonteCarloAgreesWithClosedForm) {
  const auto model = make_joint_model(make_multivariate_t(6.0, equicorrelation(2, 0.5)));
  const auto exact = dual_total_correlation(model);
  const auto mc = dual_total_correlation(model, mc_budget(400000, 3, 2));
  EXPECT_EQ(mc.method, Method::MonteCarlo);
  EXPECT_NEAR(mc.value, exact.value, 4.0 * mc.std_error);
  const auto again = dual_total_correlation(model, mc_budget(400000, 3, 2));
  EXPECT_EQ(mc.value, again.value);
}

TEST(CommonInfo, ModelValidation) {
  EXPECT_THROW(make_joint_model(make_multivariate_t(4.0, equicorrelation(2, 0.2))), InvalidArgument);
  EXPECT_THROW(make_joint_model(make_gaussian(Eigen::MatrixXd::Identity(1, 1))), InvalidArgument);
  const auto heur = make_joint_model(make_multivariate_t(4.0, equicorrelation(2, 0.2)), true);
  EXPECT_TRUE(heur.limit_mode);
}

TEST(CommonInfo, AssemblyStaysWithinGap) {
  const auto model = make_joint_model(make_multivariate_t(6.0, equicorrelation(2, 0.4)));
  const auto a = upper_bound_assembly(model);
  EXPECT_TRUE(a.first_term_holds);
  for (const auto& s : a.slices) EXPECT_TRUE(s.holds) << s.coordinate;
  EXPECT_TRUE(a.assembled_within_gap);
  EXPECT_LE(a.assembled, a.g_upper_raw + a.tolerance);
  EXPECT_DOUBLE_EQ(a.constant, covering_constant(2));
}

TEST(CommonInfo, WorstCaseAssemblyAgainstGap) {
  // With log_ratio at its ceiling 6n the term-by-term sum exceeds the gap by about 0.115 at n = 2 only.
  Eigen::MatrixXd S2 = equicorrelation(2, 0.0);
  const auto a2 = upper_bound_assembly(make_joint_model(make_multivariate_t(6.0, S2)));
  EXPECT_NEAR(a2.assembled_worst - a2.g_upper_raw, 0.11512708808607641, 1e-9);
  const auto a3 = upper_bound_assembly(make_joint_model(make_multivariate_t(9.0, equicorrelation(3, 0.2))));
  EXPECT_LT(a3.assembled_worst, a3.g_upper_raw);
}

TEST(CommonInfo, CoveringConstant) {
  EXPECT_DOUBLE_EQ(covering_constant(2), 3.0 * (1.0 + 2.0 * std::log(2.0) + std::log(3.0)));
}
