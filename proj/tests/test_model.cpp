#include <gtest/gtest.h>

#include <cmath>

#include "cvxbound/error.hpp"
#include "cvxbound/model.hpp"
#include "oracles.hpp"

using namespace cvxbound;

TEST(ConvexityFamily, LogConcavePsiRoundTrip) {
  const auto f = ConvexityFamily::log_concave();
  for (double x : {-3.0, -0.5, 0.0, 0.7, 4.0, 30.0}) {
    EXPECT_NEAR(f.psi(x), std::exp(-x), 1e-15 * std::exp(-x));
    EXPECT_NEAR(f.psi_inv(f.psi(x)), x, 1e-12 * std::max(1.0, std::abs(x)));
  }
  EXPECT_TRUE(f.is_builtin());
  EXPECT_EQ(f.kind(), FamilyKind::LogConcave);
}

TEST(ConvexityFamily, BetaConcavePsiRoundTrip) {
  const auto f = ConvexityFamily::beta_concave(3.5);
  EXPECT_DOUBLE_EQ(f.beta(), 3.5);
  for (double x : {0.01, 0.5, 1.0, 7.0, 1e4}) {
    EXPECT_NEAR(f.psi(x), std::pow(x, -3.5), 1e-14 * std::pow(x, -3.5));
    EXPECT_NEAR(f.psi_inv(f.psi(x)), x, 1e-12 * x);
  }
}

TEST(ConvexityFamily, RejectsNonPositiveBeta) {
  EXPECT_THROW(ConvexityFamily::beta_concave(0.0), InvalidArgument);
  EXPECT_THROW(ConvexityFamily::beta_concave(-2.0), InvalidArgument);
  EXPECT_THROW(ConvexityFamily::beta_concave(std::nan("")), InvalidArgument);
  EXPECT_THROW(ConvexityFamily::log_concave().beta(), InvalidArgument);
}

TEST(ConvexityFamily, ClosedFormGMatchesRepeatedIntegral) {
  for (const auto& fam : {ConvexityFamily::log_concave(), ConvexityFamily::beta_concave(4.5),
                          ConvexityFamily::beta_concave(7.0)}) {
    const double b = fam.kind() == FamilyKind::LogConcave ? 0.3 : 1.7;
    for (int k = 0; k <= 3; ++k) {
      ASSERT_TRUE(fam.has_closed_form_g(k));
      const double ref = oracle::repeated_integral([&](double y) { return fam.psi(y); }, k, b);
      EXPECT_NEAR(fam.closed_form_g(k, b), ref, 1e-10 * std::abs(ref)) << fam.describe() << " k=" << k;
    }
  }
}

TEST(ConvexityFamily, BetaGDivergesAtOrAboveBeta) {
  const auto f = ConvexityFamily::beta_concave(2.0);
  EXPECT_TRUE(f.has_closed_form_g(1));
  EXPECT_FALSE(f.has_closed_form_g(2));
  EXPECT_THROW(f.closed_form_g(2, 1.0), NonIntegrable);
}

TEST(ConvexityFamily, CustomFamilyAcceptedAndRejected) {
  const auto ok = ConvexityFamily::custom(
      "exp2", [](double x) { return std::exp(-2.0 * x); }, [](double y) { return -0.5 * std::log(y); });
  EXPECT_FALSE(ok.is_builtin());
  EXPECT_FALSE(ok.has_closed_form_g(1));
  EXPECT_THROW(ok.closed_form_g(1, 0.0), NoClosedForm);

  EXPECT_THROW(ConvexityFamily::custom(
                   "increasing", [](double x) { return std::exp(x); }, [](double y) { return std::log(y); }),
               InvalidArgument);
  EXPECT_THROW(ConvexityFamily::custom(
                   "bad-inverse", [](double x) { return std::exp(-x); }, [](double y) { return std::log(y); }),
               InvalidArgument);
  EXPECT_THROW(ConvexityFamily::custom("missing", nullptr, [](double y) { return y; }), InvalidArgument);
}

TEST(Functional, PhiValues) {
  const auto h = Functional::entropy();
  EXPECT_DOUBLE_EQ(h.phi(0.0), 0.0);
  EXPECT_NEAR(h.phi(0.5), 0.5 * std::log(2.0), 1e-15);
  const auto r = Functional::renyi(2.0);
  EXPECT_DOUBLE_EQ(r.phi(3.0), 9.0);
  EXPECT_DOUBLE_EQ(r.alpha(), 2.0);
  const auto t = Functional::truncation(0.25);
  EXPECT_DOUBLE_EQ(t.phi(1.0), 0.25);
  EXPECT_DOUBLE_EQ(t.phi(0.1), 0.1);
  ASSERT_TRUE(t.kink().has_value());
  EXPECT_DOUBLE_EQ(*t.kink(), 0.25);
  EXPECT_DOUBLE_EQ(t.threshold(), 0.25);
}

TEST(Functional, RejectsOutOfRangeParameters) {
  EXPECT_THROW(Functional::renyi(1.0), InvalidArgument);
  EXPECT_THROW(Functional::renyi(0.0), InvalidArgument);
  EXPECT_THROW(Functional::renyi(-1.0), InvalidArgument);
  EXPECT_THROW(Functional::truncation(0.0), InvalidArgument);
  EXPECT_THROW(Functional::entropy().alpha(), InvalidArgument);
}

TEST(Functional, CustomNeedsZeroAtOrigin) {
  EXPECT_NO_THROW(Functional::custom(
      "square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; }));
  EXPECT_THROW(Functional::custom(
                   "shifted", [](double x) { return x + 1.0; }, [](double) { return 1.0; }),
               InvalidArgument);
}

TEST(Functional, DescribeIsStable) {
  EXPECT_EQ(Functional::entropy().describe(), "entropy");
  EXPECT_EQ(Functional::renyi(2.0).describe(), "renyi(alpha=2)");
  EXPECT_EQ(ConvexityFamily::beta_concave(4.0).describe(), "beta-concave(beta=4)");
}
