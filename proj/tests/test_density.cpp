#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "needle_iso.hpp"

namespace ni = needle_iso;
using ni::kHalfPi;
using ni::kPi;

namespace {

const ni::Interval kSym(-kHalfPi, kHalfPi);
const ni::Interval kQuarter(0.0, kHalfPi);

}  // namespace

TEST(Quadrature, PolynomialIsExact) {
  const double v = ni::integrate([](double t) { return t * t * t - 2 * t; }, -1.0, 2.0);
  EXPECT_NEAR(v, 0.75, 1e-14);
}

TEST(Quadrature, EmptyOrReversedRangeIsZero) {
  EXPECT_EQ(ni::integrate([](double) { return 1.0; }, 1.0, 1.0), 0.0);
  EXPECT_EQ(ni::integrate([](double) { return 1.0; }, 2.0, 1.0), 0.0);
}

TEST(Quadrature, EndpointSingularDerivative) {
  // sqrt has an infinite slope at 0; the adaptive split still converges.
  EXPECT_NEAR(ni::integrate([](double t) { return std::sqrt(t); }, 0.0, 1.0), 2.0 / 3.0, 1e-11);
}

TEST(TrigDensity, NormalizationConstants) {
  EXPECT_NEAR(ni::TrigDensity::normalized(1, 0, kSym).norm(), 0.5, 1e-14);
  EXPECT_NEAR(ni::TrigDensity::normalized(0, 0, ni::Interval(0, 1)).norm(), 1.0, 1e-14);
  EXPECT_NEAR(ni::TrigDensity::normalized(1, 1, kQuarter).norm(), 2.0, 1e-13);
}

TEST(TrigDensity, RejectsBadInput) {
  EXPECT_THROW(ni::TrigDensity::normalized(-1, 0, kSym), ni::Error);
  EXPECT_THROW(ni::TrigDensity::normalized(1, 1, kSym), ni::Error);  // sin < 0 on the left half
  EXPECT_THROW(ni::Interval(1.0, 1.0), ni::Error);
}

TEST(Cdf, ClosedForms) {
  const auto cos_half = ni::TrigDensity::normalized(1, 0, kSym);
  EXPECT_NEAR(ni::cdf(cos_half, kPi / 6), 0.75, 1e-12);
  EXPECT_EQ(ni::cdf(cos_half, -kHalfPi), 0.0);
  EXPECT_NEAR(ni::cdf(ni::TrigDensity::normalized(4, 0, kSym), 0.0), 0.5, 1e-12);
  // sin^3 cos on [0, pi/2]: F(r) = sin^4 r.
  EXPECT_NEAR(ni::cdf(ni::TrigDensity::normalized(1, 3, kQuarter), kPi / 4), 0.25, 1e-12);
  EXPECT_THROW(ni::cdf(cos_half, 2.0), ni::Error);
}

TEST(Cdf, AgreesWithIncompleteBeta) {
  // Normalized int_0^r cos^m sin^k = I_{sin^2 r}((k+1)/2, (m+1)/2).
  for (double m : {0.0, 1.0, 2.5, 7.0, 15.0}) {
    for (double k : {0.0, 1.0, 3.0, 4.5, 15.0}) {
      const auto d = ni::TrigDensity::normalized(m, k, kQuarter);
      for (double r : {0.05, 0.4, 0.8, 1.2, 1.5}) {
        const double s = std::sin(r);
        const double want = boost::math::ibeta((k + 1) / 2, (m + 1) / 2, s * s);
        EXPECT_NEAR(ni::cdf(d, r), want, 1e-11) << "m=" << m << " k=" << k << " r=" << r;
      }
    }
  }
}

TEST(Quantile, ClosedForms) {
  const auto cos_half = ni::TrigDensity::normalized(1, 0, kSym);
  EXPECT_NEAR(ni::quantile(cos_half, 0.25), -kPi / 6, 1e-12);
  EXPECT_EQ(ni::quantile(cos_half, 0.0), -kHalfPi);
  EXPECT_EQ(ni::quantile(cos_half, 1.0), kHalfPi);
  const auto cp2_ball = ni::TrigDensity::normalized(1, 3, kQuarter);
  EXPECT_NEAR(ni::quantile(cp2_ball, 0.25), kPi / 4, 1e-12);
}

TEST(Quantile, InvertsTheCdfForEndpointZeros) {
  // Densities vanishing to high order at an endpoint are the hard case
  // for any derivative-based inversion.
  const auto d = ni::TrigDensity::normalized(15, 7, kQuarter);
  for (double q : {1e-9, 1e-4, 0.1, 0.5, 0.9, 1 - 1e-6}) {
    EXPECT_NEAR(ni::cdf(d, ni::quantile(d, q)), q, 1e-12 + 1e-10 * q) << q;
  }
}

TEST(SinAffine, PhaseZeroIsPureCosine) {
  const auto a = ni::SinAffineDensity::normalized(0.0, 3.0, kSym);
  const auto t = ni::TrigDensity::normalized(3, 0, kSym);
  for (double x : {-1.2, -0.3, 0.0, 0.7, 1.5}) EXPECT_NEAR(a.pdf(x), t.pdf(x), 1e-13);
}

TEST(SinAffine, MassIsOne) {
  const auto a = ni::SinAffineDensity::normalized(0.4, 2.5, ni::Interval(0.0, 1.9));
  EXPECT_NEAR(a.mass(0.0, 1.9), 1.0, 1e-12);
}

TEST(Concavity, WorkedExamples) {
  for (int n = 2; n <= 10; ++n) {
    const auto needle = ni::TrigDensity::normalized(n - 1, 0, kSym);
    EXPECT_TRUE(ni::is_sin_concave(needle, n - 1)) << n;
    const auto sin_n = [n](double t) { return std::pow(std::sin(t), n); };
    EXPECT_FALSE(ni::is_sin_concave(sin_n, kSym, n)) << n;
  }
}

TEST(Concavity, ProductOfCosinePowers) {
  const auto f = [](double t) { return std::pow(std::cos(t - 0.3), 2) * std::pow(std::cos(t + 0.2), 3); };
  EXPECT_TRUE(ni::is_sin_concave(f, ni::Interval(-1.2, 1.2), 5.0));
}

TEST(Concavity, LowerOrderDoesNotFollow) {
  // cos^2 is sin^2-concave on [-pi/2, pi/2] but not sin^1-concave there:
  // at x1 = 0, x2 = 1.5 the order-1 midpoint inequality reads
  // cos^2(0.75) >= (1 + cos^2 1.5) / (2 cos 0.75), i.e. 0.535 >= 0.687.
  const auto cos2 = [](double t) { return std::pow(std::cos(t), 2); };
  EXPECT_TRUE(ni::is_sin_concave(cos2, kSym, 2.0));
  EXPECT_LT(cos2(0.75), (cos2(0.0) + cos2(1.5)) / (2 * std::cos(0.75)));
  EXPECT_FALSE(ni::is_sin_concave(cos2, kSym, 1.0));
}

TEST(Comparison, SelfComparisonIsEquality) {
  const auto f = [](double t) { return std::pow(std::cos(t), 3); };
  // With tau = pi/2 both sides of the ratio inequality are the same integral.
  const auto r = ni::check_comparison_lemma(f, 3.0, kHalfPi, 0.5, 0.0);
  EXPECT_TRUE(r.pointwise_ok);
  EXPECT_TRUE(r.ratio_ok);
  EXPECT_NEAR(r.matched_constant, 1.0, 1e-12);
  EXPECT_NEAR(r.ratio_lhs, r.ratio_rhs, 1e-10);
  const auto shorter = ni::check_comparison_lemma(f, 3.0, 1.2, 0.5, 0.0);
  EXPECT_TRUE(shorter.ratio_ok);
  EXPECT_GT(shorter.ratio_lhs, shorter.ratio_rhs);
}

TEST(Comparison, HigherPowerCosine) {
  const auto f = [](double t) { return std::pow(std::cos(t), 5); };
  const auto r = ni::check_comparison_lemma(f, 5.0, 1.4, 0.3, 0.0);
  EXPECT_TRUE(r.pointwise_ok);
  EXPECT_TRUE(r.ratio_ok);
  EXPECT_TRUE(r.tau_ok);
}

TEST(Comparison, RatioWithSinWeight) {
  const auto f = [](double t) { return std::pow(std::cos(t), 3); };
  const auto r = ni::check_comparison_lemma(f, 3.0, 1.5, kPi / 4, 2.0);
  EXPECT_TRUE(r.ratio_ok);
}

TEST(Comparison, RejectsNonConcaveInput) {
  const auto f = [](double t) { return 1.0 + std::sin(8 * t) * 0.5; };
  EXPECT_THROW(ni::check_comparison_lemma(f, 2.0, 1.0, 0.3, 0.0), ni::Error);
}

TEST(Binomial, PureCosineAndSine) {
  const auto c = ni::binomial_decompose(ni::SinAffineDensity::normalized(0.0, 4.0, kQuarter));
  ASSERT_EQ(c.components.size(), 1u);
  EXPECT_EQ(c.components[0].cos_power, 4);
  EXPECT_NEAR(c.components[0].mass, 1.0, 1e-12);
  const auto s = ni::binomial_decompose(ni::SinAffineDensity::normalized(kHalfPi, 4.0, kQuarter));
  ASSERT_EQ(s.components.size(), 1u);
  EXPECT_EQ(s.components[0].sin_power, 4);
  EXPECT_NEAR(s.components[0].mass, 1.0, 1e-12);
}

TEST(Binomial, QuarterPhaseSquare) {
  const auto d = ni::SinAffineDensity::normalized(kPi / 4, 2.0, kQuarter);
  const auto b = ni::binomial_decompose(d);
  ASSERT_EQ(b.components.size(), 3u);
  // (cos t + sin t)^2 / 2 = (cos^2 + 2 sin cos + sin^2) / 2.
  EXPECT_NEAR(b.components[0].coefficient, 0.5 * d.norm(), 1e-14);
  EXPECT_NEAR(b.components[1].coefficient, 1.0 * d.norm(), 1e-14);
  EXPECT_NEAR(b.components[2].coefficient, 0.5 * d.norm(), 1e-14);
  EXPECT_TRUE(b.all_nonnegative());
  EXPECT_NEAR(b.total_mass(), 1.0, 1e-12);
  for (int i = 0; i <= 20; ++i) {
    const double t = kHalfPi * i / 20;
    EXPECT_NEAR(b.evaluate(t), d.pdf(t), 1e-12);
  }
}

TEST(Binomial, RejectsFractionalPower) {
  EXPECT_THROW(ni::binomial_decompose(ni::SinAffineDensity::normalized(0.2, 2.5, kQuarter)),
               ni::Error);
}
