#include "entropart/unseen.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace entropart {
namespace {

Profile profile_of(std::vector<Count> counts) {
  return build_profile(CountTable::from_counts(counts));
}

/// Random profile with N <= max_n built from a random count vector.
Profile random_profile(std::mt19937_64& gen, Count max_n) {
  std::vector<Count> counts;
  Count n = 0;
  const Count target = 1 + gen() % max_n;
  const Count spread = 1 + gen() % 12;
  while (n < target) {
    const Count c = std::min<Count>(1 + gen() % spread, target - n);
    counts.push_back(c);
    n += c;
  }
  return profile_of(counts);
}

TEST(TotalMass, AllSingletonsMissingMassIsOne) {
  for (Count n : {1u, 2u, 7u, 100u, 5000u}) {
    const auto m = estimate_total_mass(profile_of(std::vector<Count>(n, 1)), 0);
    EXPECT_EQ(m.raw, 1.0) << n;
    EXPECT_EQ(m.clamped, 1.0);
    EXPECT_FALSE(m.forced_zero);
  }
}

TEST(TotalMass, TwoSymbolsSeenThreeTimes) {
  const auto m = estimate_total_mass(profile_of({3, 3}), 0);
  EXPECT_NEAR(m.raw, 0.1, 1e-15);
  EXPECT_NEAR(m.clamped, 0.1, 1e-15);
}

TEST(TotalMass, SingleSymbolClampsNegativeRaw) {
  const auto m = estimate_total_mass(profile_of({10}), 0);
  EXPECT_NEAR(m.raw, -1.0, 1e-15);
  EXPECT_EQ(m.clamped, 0.0);
  EXPECT_FALSE(m.forced_zero);
}

TEST(TotalMass, EmptyClassIsForcedZero) {
  const auto m = estimate_total_mass(profile_of({3, 1, 1}), 2);
  EXPECT_TRUE(m.forced_zero);
  EXPECT_EQ(m.clamped, 0.0);
  // The raw series is still reported: h_3 C(5,2)/C(5,3) = 1.
  EXPECT_NEAR(m.raw, 1.0, 1e-15);
}

TEST(TotalMass, ClassBeyondSampleSizeThrows) {
  EXPECT_THROW(estimate_total_mass(profile_of({2, 1}), 4), EstimationError);
}

TEST(TotalMass, GoodTuringLeadingTerm) {
  // With no class above 1 the series is exactly h1/N.
  std::vector<Count> counts(37, 1);
  const auto p = profile_of(counts);
  EXPECT_DOUBLE_EQ(estimate_total_mass(p, 0).raw, 37.0 / 37.0);

  // First term alone is h1/N; higher classes only correct it.
  const auto q = profile_of({1, 1, 1, 5, 9});
  const double first = 3.0 / 17.0;
  const double second = -0.0;  // h2 = 0
  const double fifth = 1.0 / std::exp(log_binomial(17, 5));
  const double ninth = 1.0 / std::exp(log_binomial(17, 9));
  EXPECT_NEAR(estimate_total_mass(q, 0).raw, first + second + fifth + ninth, 1e-15);
}

TEST(TotalMass, MatchesRationalOracleOnRandomProfiles) {
  std::mt19937_64 gen(2024);
  for (int rep = 0; rep < 150; ++rep) {
    const auto p = random_profile(gen, 200);
    for (Count k = 0; k <= std::min<Count>(3, p.n()); ++k) {
      const auto m = estimate_total_mass(p, k);
      EXPECT_EQ(m.forced_zero, k >= 1 && p.h(k) == 0);
      const double exact = static_cast<double>(oracle::total_mass(p.classes(), p.n(), k));
      EXPECT_NEAR(m.raw, exact, 1e-8) << "N=" << p.n() << " k=" << k;
      EXPECT_GE(m.clamped, 0.0);
      EXPECT_LE(m.clamped, 1.0);
      if (m.forced_zero) EXPECT_EQ(m.clamped, 0.0);
    }
  }
}

TEST(SmoothingParameter, DirectFormula) {
  EXPECT_NEAR(smoothing_parameter(10, 2.0), std::log(90.0) / 4.0, 1e-15);
  EXPECT_NEAR(smoothing_parameter(10, 2.0), 1.1249524175825663, 1e-14);
  EXPECT_NEAR(smoothing_parameter(100, 3.0), 1.1141019546113212, 1e-14);
}

TEST(SmoothingParameter, DivergesTowardsOne) {
  EXPECT_GT(smoothing_parameter(100, 1.0 + 1e-12), smoothing_parameter(100, 1.0 + 1e-6));
  EXPECT_GT(smoothing_parameter(100, 1.0 + 1e-12), 10.0);
  EXPECT_THROW(smoothing_parameter(100, 1.0), EstimationError);
  EXPECT_THROW(smoothing_parameter(100, 0.5), EstimationError);
}

TEST(UnseenCount, LimitConventionAtOne) {
  // h1=3, h2=1
  const auto u = estimate_unseen_count(profile_of({1, 1, 1, 2}), 1.0, 1);
  EXPECT_EQ(u.raw, 2.0);
  EXPECT_EQ(u.clamped, 2.0);
  EXPECT_TRUE(std::isinf(u.r));
}

TEST(UnseenCount, NegativeRawClampsAtZero) {
  // h2 = 2: Good-Toulmin gives -2
  const auto u = estimate_unseen_count(profile_of({2, 2}), 1.0, 1);
  EXPECT_EQ(u.raw, -2.0);
  EXPECT_EQ(u.clamped, 0.0);
}

TEST(UnseenCount, AllSingletonsAtTwo) {
  const auto u = estimate_unseen_count(profile_of(std::vector<Count>(10, 1)), 2.0, 1);
  const double r = std::log(90.0) / 4.0;
  EXPECT_NEAR(u.r, r, 1e-15);
  EXPECT_NEAR(u.raw, 2.0 * (1.0 - std::exp(-r)) * 10.0, 1e-12);
  EXPECT_NEAR(u.raw, 13.506641690498022, 1e-12);
}

TEST(UnseenCount, MatchesHighPrecisionOracle) {
  std::mt19937_64 gen(77);
  for (int rep = 0; rep < 60; ++rep) {
    const auto p = random_profile(gen, 40);
    const double a = std::vector<double>{1.5, 2.0, 5.0, 8.0, 100.0}[gen() % 5];
    const unsigned mu = 1 + gen() % 3;
    const auto u = estimate_unseen_count(p, a, mu);
    const double exact = static_cast<double>(oracle::smoothed_unseen(p.classes(), p.n(), oracle::Dec(a), mu));
    EXPECT_NEAR(u.raw, exact, 1e-9 * std::max(1.0, std::fabs(exact)))
        << "N=" << p.n() << " a=" << a << " mu=" << mu;
  }
}

TEST(UnseenCount, LargeAmplificationStaysFinite) {
  std::vector<Count> counts(90, 1);
  for (int i = 0; i < 5; ++i) counts.push_back(2);
  const auto u = estimate_unseen_count(profile_of(counts), 4e5, 1);
  EXPECT_TRUE(std::isfinite(u.raw));
  EXPECT_GT(u.raw, 0.0);

  std::vector<Count> big(300, 1);
  big.push_back(4000);
  const auto v = estimate_unseen_count(profile_of(big), 4e5, 1);
  EXPECT_TRUE(std::isfinite(v.raw));
}

TEST(UnseenCount, MultiplicityReducesCount) {
  const auto p = profile_of({1, 1, 1, 1, 1, 1, 2, 3});
  const auto one = estimate_unseen_count(p, 3.0, 1);
  const auto two = estimate_unseen_count(p, 3.0, 2);
  EXPECT_NE(one.raw, two.raw);
}

TEST(UnseenCount, RejectsBadArguments) {
  const auto p = profile_of({1, 2});
  EXPECT_THROW(estimate_unseen_count(p, 0.0, 1), EstimationError);
  EXPECT_THROW(estimate_unseen_count(p, -2.0, 1), EstimationError);
  EXPECT_THROW(estimate_unseen_count(p, 2.0, 0), EstimationError);
}

TEST(AmplificationLookup, Branches) {
  EXPECT_EQ(lookup_amplification(0.9), 4e5);
  EXPECT_EQ(lookup_amplification(0.5), 5.0);
  EXPECT_EQ(lookup_amplification(0.05), 1.0);
  EXPECT_EQ(lookup_amplification(0.8), 4e5);
  EXPECT_EQ(lookup_amplification(0.7), 100.0);
  EXPECT_EQ(lookup_amplification(0.55), 8.0);
  EXPECT_EQ(lookup_amplification(0.4), 5.0);
  EXPECT_EQ(lookup_amplification(0.3), 2.0);
  EXPECT_EQ(lookup_amplification(0.15), 1.5);
  EXPECT_EQ(lookup_amplification(0.0), 1.0);
  EXPECT_EQ(lookup_amplification(1.0), 4e5);
}

TEST(AmplificationLookup, NonincreasingStepFunction) {
  double prev = lookup_amplification(1.0);
  for (int i = 10000; i >= 0; --i) {
    const double a = lookup_amplification(i / 10000.0);
    EXPECT_LE(a, prev);
    prev = a;
  }
}

TEST(AmplificationTable, ValidatesThresholds) {
  EXPECT_THROW(AmplificationTable({{0.3, 2.0}, {0.5, 3.0}}, 1.0), EstimationError);
  EXPECT_THROW(AmplificationTable({{0.3, 2.0}}, 0.0), EstimationError);
  const AmplificationTable custom({{0.5, 10.0}}, 2.0);
  EXPECT_EQ(custom.lookup(0.5), 10.0);
  EXPECT_EQ(custom.lookup(0.49), 2.0);
}

}  // namespace
}  // namespace entropart
