#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cvxbound/density.hpp"
#include "cvxbound/error.hpp"
#include "oracles.hpp"

using namespace cvxbound;

namespace {

double eval1(const DensitySpec& s, double x) { return s.eval(std::span<const double>(&x, 1)); }
double eval2(const DensitySpec& s, double x, double y) {
  const double p[2] = {x, y};
  return s.eval(std::span<const double>(p, 2));
}

Eigen::MatrixXd mat1(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }
Eigen::VectorXd vec1(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST(Density, ExtremalLinearNormalizedAndPeaked) {
  for (const auto& fam : {ConvexityFamily::log_concave(), ConvexityFamily::beta_concave(3.0)}) {
    for (double f_max : {0.5, 2.0}) {
      const auto s = make_extremal_linear(fam, 1, f_max);
      EXPECT_DOUBLE_EQ(s.f_max(), f_max);
      EXPECT_NEAR(eval1(s, 0.0), f_max, 1e-14 * f_max);
      EXPECT_EQ(eval1(s, -0.1), 0.0);
      EXPECT_NEAR(oracle::tail_integral([&](double x) { return eval1(s, x); }, 0.0), 1.0, 1e-10);
    }
  }
}

TEST(Density, ExtremalLinearTwoDimensionalMass) {
  const auto s = make_extremal_linear(ConvexityFamily::log_concave(), 2, 1.0);
  // Mass of psi(b + lambda (x + y)) over the quadrant: radial integral along x + y = r.
  const double mass = oracle::tail_integral([&](double r) { return r * eval2(s, r, 0.0); }, 0.0);
  EXPECT_NEAR(mass, 1.0, 1e-10);
}

TEST(Density, ExtremalRejectsDivergentG) {
  EXPECT_THROW(make_extremal_linear(ConvexityFamily::beta_concave(2.0), 2, 1.0), NonIntegrable);
  EXPECT_THROW(make_extremal_linear(ConvexityFamily::log_concave(), 1, 0.0), InvalidArgument);
}

TEST(Density, UniformBox) {
  const auto s = make_uniform_box(ConvexityFamily::log_concave(), 2, 4.0);
  EXPECT_NEAR(eval2(s, 0.1, 0.4), 4.0, 1e-15);
  EXPECT_EQ(eval2(s, 0.1, 0.6), 0.0);
  EXPECT_DOUBLE_EQ(std::get<UniformBox>(s.form()).side, 0.5);
}

TEST(Density, QuadraticLogConcaveIsGaussian) {
  const auto s = make_quadratic(ConvexityFamily::log_concave(), mat1(0.8), vec1(0.3), 0.0);
  const double var = 1.0 / (2.0 * 0.8);
  const double ref_peak = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
  EXPECT_NEAR(s.f_max(), ref_peak, 1e-13);
  EXPECT_NEAR(oracle::line_integral([&](double x) { return eval1(s, x); }, 0.3), 1.0, 1e-11);
  EXPECT_NEAR(s.mode()[0], 0.3, 1e-15);
}

TEST(Density, QuadraticBetaConcaveNormalized) {
  const auto s = make_quadratic(ConvexityFamily::beta_concave(1.7), mat1(2.0), vec1(-1.0), 0.5);
  EXPECT_NEAR(oracle::line_integral([&](double x) { return eval1(s, x); }, -1.0), 1.0, 1e-10);
  EXPECT_THROW(make_quadratic(ConvexityFamily::beta_concave(0.4), mat1(1.0), vec1(0.0), 1.0), NonIntegrable);
}

TEST(Density, QuadraticTwoDimensionalMass) {
  Eigen::MatrixXd Q(2, 2);
  Q << 1.0, 0.3, 0.3, 0.6;
  Eigen::Vector2d c(0.2, -0.4);
  const auto s = make_quadratic(ConvexityFamily::log_concave(), Q, c, 0.0);
  EXPECT_NEAR(oracle::grid_integral_2d([&](double x, double y) { return eval2(s, x, y); }, -12.0, 12.0, 1200), 1.0,
              1e-8);
}

TEST(Density, MaxAffineOneDimensionalMass) {
  const std::vector<AffinePiece> pieces = {{vec1(-2.0), 0.1}, {vec1(0.5), -0.3}, {vec1(1.5), -1.0}};
  const auto s = make_max_affine(ConvexityFamily::log_concave(), pieces);
  // Split at the kinks of g so each panel is smooth.
  const auto env = upper_envelope({{-2.0, 0.1}, {0.5, -0.3}, {1.5, -1.0}});
  const auto h = [&](double x) { return eval1(s, x); };
  double mass = oracle::tail_integral(h, env.breaks.back());
  mass += oracle::tail_integral([&](double y) { return h(2.0 * env.breaks.front() - y); }, env.breaks.front());
  for (std::size_t i = 0; i + 1 < env.breaks.size(); ++i) mass += oracle::finite_integral(h, env.breaks[i], env.breaks[i + 1]);
  EXPECT_NEAR(mass, 1.0, 1e-11);
  for (double x : {-2.0, -0.3, 0.7, 3.0}) EXPECT_LE(eval1(s, x), s.f_max() * (1.0 + 1e-14));
}

TEST(Density, MaxAffineTwoDimensionalMass) {
  std::vector<AffinePiece> pieces;
  for (int j = 0; j < 5; ++j) {
    const double th = 2.0 * std::numbers::pi * j / 5.0 + 0.2;
    pieces.push_back({Eigen::Vector2d(1.3 * std::cos(th), 1.3 * std::sin(th)), 0.1 * j});
  }
  const auto s = make_max_affine(ConvexityFamily::log_concave(), pieces);
  EXPECT_NEAR(oracle::grid_integral_2d([&](double x, double y) { return eval2(s, x, y); }, -25.0, 25.0, 2000), 1.0,
              1e-6);
}

TEST(Density, MaxAffineRejectsNonCoercive) {
  const std::vector<AffinePiece> pieces = {{vec1(1.0), 0.0}, {vec1(2.0), 0.0}};
  EXPECT_THROW(make_max_affine(ConvexityFamily::log_concave(), pieces), InvalidArgument);
}

TEST(Density, UpperEnvelope) {
  const auto env = upper_envelope({{-1.0, 0.0}, {1.0, 0.0}, {0.0, -5.0}, {1.0, -2.0}});
  ASSERT_EQ(env.lines.size(), 2u);
  ASSERT_EQ(env.breaks.size(), 1u);
  EXPECT_DOUBLE_EQ(env.breaks[0], 0.0);
  EXPECT_EQ(env.lines[0].first, -1.0);
  EXPECT_EQ(env.lines[1].first, 1.0);
}

TEST(Density, MaxAffineMinimumAndVertices) {
  MaxAffineG g;
  g.pieces = {{Eigen::Vector2d(1.0, 0.0), 0.0}, {Eigen::Vector2d(-1.0, 1.0), 0.0}, {Eigen::Vector2d(-1.0, -1.0), 0.0}};
  const auto [x, v] = max_affine_minimum(g, 2);
  EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_NEAR(x[0], 0.0, 1e-12);
  EXPECT_NEAR(x[1], 0.0, 1e-12);
  const auto verts = max_affine_vertices(g);
  ASSERT_EQ(verts.size(), 1u);
  EXPECT_NEAR(verts[0].norm(), 0.0, 1e-12);
}

TEST(Density, GaussianAndStudentTNormalizedInOneDimension) {
  const auto g = make_gaussian(mat1(2.5));
  EXPECT_NEAR(oracle::line_integral([&](double x) { return eval1(g, x); }), 1.0, 1e-12);
  const auto t = make_multivariate_t(3.0, mat1(0.7));
  EXPECT_NEAR(oracle::line_integral([&](double x) { return eval1(t, x); }), 1.0, 1e-10);
  EXPECT_EQ(t.family().kind(), FamilyKind::BetaConcave);
  EXPECT_DOUBLE_EQ(t.family().beta(), 2.0);
}

TEST(Density, DropCoordinateIsMarginal) {
  Eigen::MatrixXd S(2, 2);
  S << 1.0, 0.5, 0.5, 2.0;
  for (const auto& spec : {make_gaussian(S), make_multivariate_t(5.0, S)}) {
    const auto marg = drop_coordinate(spec, 1);
    ASSERT_EQ(marg.dimension(), 1);
    for (double x : {-1.5, 0.0, 0.8}) {
      const double ref = oracle::line_integral([&](double y) { return eval2(spec, x, y); });
      EXPECT_NEAR(eval1(marg, x), ref, 1e-10) << spec.form_name();
    }
  }
  EXPECT_THROW(drop_coordinate(make_uniform_box(ConvexityFamily::log_concave(), 2, 1.0), 0), Unsupported);
}

TEST(Density, LogEvalAgreesWithEval) {
  const auto s = make_extremal_linear(ConvexityFamily::beta_concave(4.0), 2, 1.5);
  for (double x : {0.0, 0.3, 2.0}) {
    const double p[2] = {x, 0.5 * x};
    EXPECT_NEAR(std::exp(s.log_eval(p)), s.eval(p), 1e-13 * s.eval(p));
  }
  const double outside[2] = {-1.0, 0.0};
  EXPECT_EQ(s.log_eval(outside), -std::numeric_limits<double>::infinity());
}
