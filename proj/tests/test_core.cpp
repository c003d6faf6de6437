#include "entropart/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace entropart {
namespace {

TEST(CountTable, FromCountsSkipsZeros) {
  const std::vector<Count> raw{0, 3, 0, 1};
  const auto t = CountTable::from_counts(raw);
  EXPECT_EQ(t.total(), 4u);
  ASSERT_EQ(t.distinct(), 2u);
  EXPECT_EQ(t.entries()[0], (CountTable::Entry{1, 3}));
  EXPECT_EQ(t.entries()[1], (CountTable::Entry{3, 1}));
}

TEST(CountTable, FromTokensInternsInOrder) {
  const std::vector<std::string> tokens{"b", "a", "b", "c", "b"};
  const auto t = CountTable::from_tokens(tokens);
  EXPECT_EQ(t.total(), 5u);
  EXPECT_EQ(t.counts(), (std::vector<Count>{3, 1, 1}));
}

TEST(CountTable, AddMergesAndKeepsOrder) {
  CountTable t;
  t.add(7, 2);
  t.add(3);
  t.add(7);
  t.add(9, 0);
  EXPECT_EQ(t.total(), 4u);
  EXPECT_EQ(t.distinct(), 2u);
  EXPECT_EQ(t.entries()[0].symbol, 3u);
  EXPECT_EQ(t.entries()[1].count, 3u);
}

TEST(BuildProfile, SmallExamples) {
  const std::vector<Count> abc{2, 1, 1};
  const auto p = build_profile(CountTable::from_counts(abc));
  EXPECT_EQ(p.h(1), 2u);
  EXPECT_EQ(p.h(2), 1u);
  EXPECT_EQ(p.h(3), 0u);
  EXPECT_EQ(p.n(), 4u);
  EXPECT_EQ(p.distinct(), 3u);

  const std::vector<Count> single{5};
  const auto q = build_profile(CountTable::from_counts(single));
  EXPECT_EQ(q.h(5), 1u);
  EXPECT_EQ(q.n(), 5u);
  EXPECT_EQ(q.classes().size(), 1u);
}

TEST(BuildProfile, EmptyIsRejected) {
  EXPECT_THROW(build_profile(CountTable{}), EstimationError);
}

TEST(BuildProfile, InvariantsAndLabelInvarianceOnRandomTables) {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Count> raw(1 + gen() % 60);
    for (auto& c : raw) c = gen() % 4 == 0 ? 0 : gen() % 12;
    if (std::accumulate(raw.begin(), raw.end(), Count{0}) == 0) raw[0] = 1;
    const auto table = CountTable::from_counts(raw);
    const auto profile = build_profile(table);

    Count weighted = 0, distinct = 0;
    for (const auto& [i, h] : profile.classes()) {
      weighted += i * h;
      distinct += h;
    }
    EXPECT_EQ(weighted, table.total());
    EXPECT_EQ(distinct, table.distinct());

    auto shuffled = raw;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    EXPECT_EQ(build_profile(CountTable::from_counts(shuffled)), profile);
  }
}

TEST(Profile, RejectsInconsistentTotals) {
  EXPECT_THROW(Profile({{1, 2}}, 3), EstimationError);
  EXPECT_THROW(Profile({{0, 2}}, 0), EstimationError);
  EXPECT_NO_THROW(Profile({{1, 2}, {3, 1}}, 5));
}

TEST(EntropyKernel, ClosedForms) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(entropy_kernel(half), std::log(2.0), 1e-15);
  const std::vector<double> point{1.0, 0.0};
  EXPECT_EQ(entropy_kernel(point), 0.0);
  const std::vector<double> uniform(1000, 1e-3);
  EXPECT_NEAR(entropy_kernel(uniform), 6.9077, 1e-4);
  EXPECT_NEAR(entropy_kernel(uniform), std::log(1000.0), 1e-12);
}

TEST(EntropyKernel, NegativeEntryThrows) {
  const std::vector<double> bad{0.5, -0.1, 0.6};
  EXPECT_THROW(entropy_kernel(bad), EstimationError);
}

TEST(EntropyKernel, PermutationInvariantAndBoundedByLogS) {
  std::mt19937_64 gen(5);
  std::gamma_distribution<double> g(0.3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t s = 2 + gen() % 300;
    std::vector<double> p(s);
    double total = 0.0;
    for (auto& x : p) total += (x = g(gen));
    for (auto& x : p) x /= total;
    const double h = entropy_kernel(p);
    EXPECT_LE(h, std::log(static_cast<double>(s)) + 1e-12);
    EXPECT_GE(h, 0.0);
    std::shuffle(p.begin(), p.end(), gen);
    EXPECT_NEAR(entropy_kernel(p), h, 1e-12);
  }
}

TEST(LogBinomial, SmallExactValues) {
  EXPECT_NEAR(log_binomial(10, 3), std::log(120.0), 1e-12);
  EXPECT_EQ(log_binomial(17, 0), 0.0);
  EXPECT_EQ(log_binomial(17, 17), 0.0);
  for (Count n = 0; n <= 60; ++n) {
    for (Count k = 0; k <= n; ++k) {
      const double exact = static_cast<double>(oracle::log_choose(n, k));
      EXPECT_NEAR(log_binomial(n, k), exact, 1e-10) << n << " " << k;
    }
  }
}

TEST(LogBinomial, LargeArgumentAgainstBigInteger) {
  const double exact = static_cast<double>(oracle::log_choose(1000, 500));
  EXPECT_NEAR(log_binomial(1000, 500), exact, 1e-9 * exact);
  const double exact2 = static_cast<double>(oracle::log_choose(5000, 1234));
  EXPECT_NEAR(log_binomial(5000, 1234), exact2, 1e-9 * exact2);
}

TEST(LogBinomial, KAboveNThrows) { EXPECT_THROW(log_binomial(3, 4), EstimationError); }

TEST(PoissonTail, ClosedForms) {
  EXPECT_EQ(poisson_tail(3.7, 0), 1.0);
  EXPECT_EQ(poisson_tail(0.0, 0), 1.0);
  EXPECT_EQ(poisson_tail(0.0, 1), 0.0);
  EXPECT_NEAR(poisson_tail(2.0, 2), 0.5939941502901619, 1e-14);
  EXPECT_NEAR(poisson_tail(2.0, 2), 1.0 - 3.0 * std::exp(-2.0), 1e-14);
}

TEST(PoissonTail, MatchesHighPrecisionOracle) {
  for (double r : {1e-5, 0.01, 0.3, 1.0, 2.5, 7.0, 20.0}) {
    for (Count i : {1u, 2u, 3u, 5u, 10u, 25u}) {
      const double exact = static_cast<double>(oracle::poisson_tail(oracle::Dec(r), i));
      // relative check where the oracle itself has digits to spare
      if (exact > 1e-30) EXPECT_NEAR(poisson_tail(r, i), exact, 1e-13 * exact + 1e-300) << r << " " << i;
    }
  }
}

TEST(PoissonTail, LogTailIsFiniteFarBeyondUnderflow) {
  // Pr(Poi(1e-5) >= 1000) ~ 1e-7567, below double range.
  const long double lt = log_poisson_tail(1e-5L, 1000);
  EXPECT_TRUE(std::isfinite(static_cast<double>(lt)));
  const long double approx = 1000 * std::log(1e-5L) - std::lgamma(1001.0L);
  EXPECT_NEAR(static_cast<double>(lt), static_cast<double>(approx), 1e-4);
}

TEST(PoissonTail, MonotoneOnGrid) {
  for (double r = 0.0; r <= 12.0; r += 0.25) {
    double prev = 1.0;
    for (Count i = 0; i <= 30; ++i) {
      const double t = poisson_tail(r, i);
      EXPECT_LE(t, prev + 1e-15);
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, 1.0);
      EXPECT_LE(t, poisson_tail(r + 0.25, i) + 1e-15);
      prev = t;
    }
  }
}

TEST(PoissonTail, RejectsNegativeRate) {
  EXPECT_THROW(poisson_tail(-1.0, 2), EstimationError);
}

TEST(CompensatedSum, RecoversCancellation) {
  CompensatedSum s;
  s.add(1e20L);
  s.add(1.0L);
  s.add(-1e20L);
  EXPECT_EQ(s.value(), 1.0L);
}

TEST(Units, NatsToBits) { EXPECT_NEAR(nats_to_bits(std::log(8.0)), 3.0, 1e-15); }

TEST(Concurrency, KernelsAreReentrant) {
  std::vector<double> results(8);
  std::vector<std::jthread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] {
      double acc = 0;
      for (int rep = 0; rep < 2000; ++rep) acc += log_binomial(400 + rep % 7, 100) + poisson_tail(1.5, 3);
      results[t] = acc;
    });
  }
  pool.clear();
  for (double r : results) EXPECT_EQ(r, results[0]);
}

}  // namespace
}  // namespace entropart
