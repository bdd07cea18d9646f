#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "sdsieve/divisibility.hpp"

using namespace sdsieve;

TEST(PAdicValuation, Basics) {
  EXPECT_EQ(p_adic_valuation(BigInt(48), 2), 4u);
  EXPECT_EQ(p_adic_valuation(BigInt(48), 3), 1u);
  EXPECT_EQ(p_adic_valuation(BigInt(-250), 5), 3u);
  EXPECT_EQ(p_adic_valuation(std::int64_t{7}, 2), 0u);
  EXPECT_EQ(p_adic_valuation(std::int64_t{-96}, 2), 5u);
  EXPECT_THROW(p_adic_valuation(BigInt(0), 2), DomainError);
  EXPECT_THROW(p_adic_valuation(std::int64_t{0}, 3), DomainError);
  EXPECT_THROW(p_adic_valuation(BigInt(5), 1), DomainError);
  BigInt big_power = 1;
  for (int i = 0; i < 100; ++i) big_power *= 3;
  EXPECT_EQ(p_adic_valuation(big_power * 10, 3), 100u);
}

TEST(Lemma3, CaseA) {
  const auto v = lemma3_verdict(DesignCandidate(5, 77));
  EXPECT_EQ(v.case_label, Lemma3Case::A);
  EXPECT_FALSE(v.passed);
  EXPECT_EQ(v.required_divisibility, "n | M");
  EXPECT_TRUE(lemma3_verdict(DesignCandidate(7, 196)).passed);
}

TEST(Lemma3, GuardsPartitionExceptKnownPatterns) {
  for (std::int64_t n = 3; n <= 400; ++n) {
    for (std::int64_t m = 1; m <= 200; ++m) {
      const auto g = lemma3_guards(n, m);
      const bool six = n % 6 == 0;
      const unsigned v2n = p_adic_valuation(n, 2), v3n = p_adic_valuation(n, 3);
      const unsigned v2m = p_adic_valuation(m, 2), v3m = p_adic_valuation(m, 3);
      const bool uncovered = six && v3n != 1 + v3m && (v2n == 2 || v2n == 1 + v2m);
      if (uncovered) {
        EXPECT_TRUE(g.empty()) << n << " " << m;
      } else {
        ASSERT_FALSE(g.empty()) << n << " " << m;
      }
      if (g.size() > 1) {
        // Only B2/B3 (v2(n) = 2 = 1 + v2(M)) and D3/D4 overlap.
        ASSERT_EQ(g.size(), 2u);
        const bool b = g[0] == Lemma3Case::B2 && g[1] == Lemma3Case::B3;
        const bool d = g[0] == Lemma3Case::D3 && g[1] == Lemma3Case::D4;
        EXPECT_TRUE(b || d) << n << " " << m;
        EXPECT_EQ(v2n, 2u);
        EXPECT_EQ(v2m, 1u);
      }
    }
  }
}

TEST(Lemma3, OverlapUsesWeakestConclusion) {
  // n = 4 * 5, M = 2 * odd: B2 (n | 4M) and B3 (n | 2M) both hold.
  const DesignCandidate c(20, 3110);
  const auto v = lemma3_verdict(c);
  ASSERT_TRUE(v.ambiguous());
  EXPECT_EQ(v.case_label, Lemma3Case::B2);
  EXPECT_EQ(v.required_divisibility, "n | 4M");
  EXPECT_TRUE(v.passed);  // 20 | 4 * 3110
}

TEST(Lemma3, UncoveredFallsBackToTwelveM) {
  // n = 12: v2(n) = 2, v3(n) = 1; M with 3 | M gives v3(n) != 1 + v3(M).
  const DesignCandidate c(12, 1005);
  const auto v = lemma3_verdict(c);
  EXPECT_EQ(v.case_label, Lemma3Case::Uncovered);
  EXPECT_EQ(v.required_divisibility, "n | 12M");
  EXPECT_TRUE(v.matched_guards.empty());
  EXPECT_TRUE(v.passed);
}

TEST(Lemma3, Multipliers) {
  EXPECT_EQ(lemma3_multiplier(Lemma3Case::A), 1);
  EXPECT_EQ(lemma3_multiplier(Lemma3Case::B2), 4);
  EXPECT_EQ(lemma3_multiplier(Lemma3Case::B3), 2);
  EXPECT_EQ(lemma3_multiplier(Lemma3Case::C2), 3);
  EXPECT_EQ(lemma3_multiplier(Lemma3Case::D3), 6);
  EXPECT_EQ(lemma3_multiplier(Lemma3Case::D4), 12);
}

TEST(Lemma5, Cases) {
  EXPECT_EQ(lemma5_verdict(DesignCandidate(7, 196)).case_label, Lemma5Case::B);  // n+1 = 8
  EXPECT_TRUE(lemma5_verdict(DesignCandidate(7, 196)).passed);
  EXPECT_EQ(lemma5_verdict(DesignCandidate(6, 120)).case_label, Lemma5Case::A);  // 7
  EXPECT_EQ(lemma5_verdict(DesignCandidate(8, 300)).case_label, Lemma5Case::C);  // 9
  EXPECT_EQ(lemma5_verdict(DesignCandidate(11, 600)).case_label, Lemma5Case::D);  // 12
  EXPECT_TRUE(lemma5_verdict(DesignCandidate(6, 161)).passed);   // 7 | 161
  EXPECT_FALSE(lemma5_verdict(DesignCandidate(6, 120)).passed);
}

TEST(FineSieve, IsNotContainedInCoarseSieve) {
  // (n+1) | 16 M^2 does not give (n+1) | 4 M^2 when 16 | n+1.
  const DesignCandidate c(14, 1295);
  EXPECT_TRUE(fine_sieve(c).passed);
  EXPECT_FALSE(coarse_sieve(c));
}

TEST(FineSieve, ImpliesNDivides12M) {
  // Every Lemma-3 conclusion n | dM has d | 12.
  for (std::int64_t n = 3; n <= 60; ++n) {
    const auto b = cardinality_bounds(n);
    for (std::int64_t m = b.lower + 1; m <= b.upper; ++m) {
      const DesignCandidate c(n, m);
      if (lemma3_verdict(c).passed) ASSERT_EQ(12 * m % n, 0) << n << " " << m;
    }
  }
}

TEST(CoarseSieve, ProgressionMatchesPredicate) {
  for (std::int64_t n = 3; n <= 80; ++n) {
    const auto step = coarse_step(n);
    const auto b = cardinality_bounds(n);
    for (std::int64_t m = b.lower + 1; m <= b.upper; ++m) {
      ASSERT_EQ(coarse_sieve(DesignCandidate(n, m)), m % step == 0) << n << " " << m;
    }
  }
}

TEST(CoarseSieve, StepIsMinimal) {
  for (std::int64_t n = 3; n <= 400; ++n) {
    const auto step = coarse_step(n);
    for (std::int64_t s = 1; s < step; ++s) {
      const bool ok = 12 * s % n == 0 && 4 * s % (n + 1) * s % (n + 1) == 0;
      ASSERT_FALSE(ok) << n << " " << s;
    }
    ASSERT_EQ(12 * step % n, 0);
    ASSERT_EQ(static_cast<__int128>(4) * step * step % (n + 1), 0);
  }
  EXPECT_EQ(coarse_step(7), 14);  // 7 | 12s and 8 | 4s^2
  EXPECT_THROW(coarse_step(2), DomainError);
}
