#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cvxbound/error.hpp"
#include "cvxbound/oracle.hpp"
#include "cvxbound/sampling.hpp"
#include "oracles.hpp"

using namespace cvxbound;

namespace {

Eigen::MatrixXd mat1(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

Budget mc_budget(long long samples, std::uint64_t seed, int workers = 1) {
  Budget b;
  b.method = Method::MonteCarlo;
  b.samples = samples;
  b.seed = seed;
  b.workers = workers;
  return b;
}

const Functional& mass_functional() {
  static const Functional f = Functional::custom(
      "mass", [](double x) { return x; }, [](double) { return 1.0; });
  return f;
}

}  // namespace

TEST(Oracle, EntropyOfUnitExponentialIsOne) {
  const auto s = make_extremal_linear(ConvexityFamily::log_concave(), 1, 1.0);
  const auto e = differential_entropy(s);
  EXPECT_EQ(e.method, Method::Quadrature);
  EXPECT_NEAR(e.value, 1.0, 1e-9);
}

TEST(Oracle, TruncatedPowerLawMass) {
  const auto s = make_extremal_linear(ConvexityFamily::beta_concave(2.0), 1, 1.0);
  EXPECT_NEAR(integrate_functional(s, Functional::truncation(0.25)).value, 0.75, 1e-8);
  EXPECT_NEAR(truncated_mass(s, 0.25).value, 0.75, 1e-8);
  EXPECT_DOUBLE_EQ(truncated_mass(s, 2.0).value, 1.0);
}

TEST(Oracle, GaussianEntropyInTwoDimensions) {
  Eigen::MatrixXd S(2, 2);
  S << 1.0, 0.5, 0.5, 1.0;
  const auto e = differential_entropy(make_gaussian(S));
  const double ref = 0.5 * std::log(std::pow(2.0 * std::numbers::pi * std::numbers::e, 2) * S.determinant());
  EXPECT_NEAR(e.value, ref, 1e-5);
}

TEST(Oracle, QuadraticRenyiMatchesBoost) {
  const auto s = make_quadratic(ConvexityFamily::beta_concave(2.5), mat1(1.5), Eigen::VectorXd::Zero(1), 1.0);
  const double ref = oracle::line_integral([&](double x) { return std::pow(s.eval(std::span<const double>(&x, 1)), 1.7); });
  EXPECT_NEAR(integrate_functional(s, Functional::renyi(1.7)).value, ref, 1e-8);
}

TEST(Oracle, MonteCarloAgreesWithQuadrature) {
  const auto s = make_extremal_linear(ConvexityFamily::beta_concave(6.0), 2, 0.8);
  const auto q = integrate_functional(s, Functional::entropy());
  const auto m = integrate_functional(s, Functional::entropy(), mc_budget(400000, 11, 2));
  EXPECT_EQ(m.method, Method::MonteCarlo);
  EXPECT_GT(m.std_error, 0.0);
  EXPECT_NEAR(m.value, q.value, 4.0 * m.std_error + q.abs_tol);
  EXPECT_DOUBLE_EQ(m.margin(), 3.0 * m.std_error);
}

TEST(Oracle, MonteCarloIsDeterministicPerSeedAndWorkers) {
  const auto s = make_uniform_box(ConvexityFamily::log_concave(), 3, 2.0);
  const auto g = make_gaussian(Eigen::MatrixXd::Identity(3, 3));
  const auto a = integrate_functional(g, Functional::renyi(2.0), mc_budget(50000, 5, 3));
  const auto b = integrate_functional(g, Functional::renyi(2.0), mc_budget(50000, 5, 3));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  const auto c = integrate_functional(g, Functional::renyi(2.0), mc_budget(50000, 6, 3));
  EXPECT_NE(a.value, c.value);
  EXPECT_NEAR(integrate_functional(s, Functional::entropy(), mc_budget(1000, 1)).value, -std::log(2.0), 1e-12);
}

TEST(Oracle, StreamSeedsDiffer) {
  EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
  EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
  EXPECT_EQ(stream_seed(9, 4), stream_seed(9, 4));
}

TEST(Oracle, ExactSamplersMatchMoments) {
  // Orthant extremal, log-concave n = 2, f_max = 1: coordinates sum to Gamma(2, 1).
  const auto s = make_extremal_linear(ConvexityFamily::log_concave(), 2, 1.0);
  const auto sampler = make_sampler(s);
  ASSERT_TRUE(sampler->exact());
  Rng rng(3);
  double sum = 0.0;
  const int m = 200000;
  std::vector<double> x(2);
  for (int i = 0; i < m; ++i) {
    sampler->draw(rng, x);
    ASSERT_GE(x[0], 0.0);
    ASSERT_GE(x[1], 0.0);
    sum += x[0] + x[1];
  }
  // lambda = G_2(0)^(1/2) = 1, so the sum has mean 2.
  EXPECT_NEAR(sum / m, 2.0, 0.02);
}

TEST(Oracle, SolveThresholdHitsTarget) {
  const auto s = make_gaussian(mat1(1.0));
  const double t = solve_threshold(s, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(truncated_mass(s, t).value, 1.0 / 3.0, 1e-8);
  EXPECT_LE(t, s.f_max());
  EXPECT_THROW(solve_threshold(s, 1.5, 1e-9), InvalidArgument);
}

TEST(Oracle, TruncatedEntropyOfExponential) {
  // min(e^-x, t) / gamma on [0, inf): flat part of length log(1/t), then an exponential tail.
  const auto s = make_extremal_linear(ConvexityFamily::log_concave(), 1, 1.0);
  const double t = 0.2;
  const double mass = t * std::log(1.0 / t) + t;
  const double ref = oracle::tail_integral(
      [&](double x) {
        const double v = std::min(std::exp(-x), t) / mass;
        return v > 0.0 ? -v * std::log(v) : 0.0;
      },
      0.0, std::log(1.0 / t));
  EXPECT_NEAR(truncated_entropy_at(s, t).value, ref, 1e-8);
}

TEST(Oracle, GeneratedDensitiesAreNormalizedAndPsiConcave) {
  for (auto gen : {RandomDensityConfig::Generator::Quadratic, RandomDensityConfig::Generator::MaxAffine}) {
    for (const auto& fam : {ConvexityFamily::log_concave(), ConvexityFamily::beta_concave(4.5)}) {
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        RandomDensityConfig cfg;
        cfg.family = fam;
        cfg.n = 2;
        cfg.generator = gen;
        cfg.seed = seed;
        const auto s = generate_random_density(cfg);
        const double mass = integrate_functional(s, mass_functional()).value;
        EXPECT_NEAR(mass, 1.0, 1e-5) << s.form_name() << " seed " << seed;
        // g = psi^-1(f) is convex along random segments.
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd(0.0, 2.0);
        for (int k = 0; k < 50; ++k) {
          const double a[2] = {nd(rng), nd(rng)};
          const double b[2] = {nd(rng), nd(rng)};
          const double m[2] = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
          const double ga = s.g(a), gb = s.g(b), gm = s.g(m);
          EXPECT_LE(gm, 0.5 * (ga + gb) + 1e-9 * (1.0 + std::abs(ga) + std::abs(gb)));
        }
      }
    }
  }
}

TEST(Oracle, SliceInequalityHoldsForGaussian) {
  Eigen::MatrixXd S(2, 2);
  S << 1.0, 0.6, 0.6, 1.5;
  const auto c = slice_inequality_check(make_gaussian(S));
  EXPECT_TRUE(c.holds);
  EXPECT_LE(c.lhs, c.rhs);
  EXPECT_GT(c.terms.sup_marginal, 0.0);
}

TEST(Oracle, UnsupportedBudgetRejected) {
  const auto s = make_gaussian(mat1(1.0));
  Budget b;
  b.samples = 0;
  b.method = Method::MonteCarlo;
  EXPECT_THROW(integrate_functional(s, Functional::entropy(), b), InvalidArgument);
}
