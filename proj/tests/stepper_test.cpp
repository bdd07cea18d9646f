#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "sdsieve/formulas.hpp"
#include "sdsieve/stepper.hpp"

using namespace sdsieve;

namespace {

void expect_matches_exact(std::int64_t n, std::int64_t m_first, std::int64_t m_last) {
  IntegralityStepper s(n, m_first, m_last);
  for (std::int64_t m = m_first; m <= m_last; ++m) {
    ASSERT_EQ(s.m(), m);
    const auto got = s.evaluate();
    const DesignCandidate c(n, m);
    const auto q = derived_quantities(c);
    ASSERT_EQ(got.r_zero, q.r == 0) << n << " " << m;
    if (!got.r_zero) {
      ASSERT_EQ(got.xyzt_integer, xyzt_product(c, q).is_integer()) << n << " " << m;
      ASSERT_EQ(got.nozaki_integer, nozaki_product(c, q).is_integer()) << n << " " << m;
    }
    if (m < m_last) s.advance();
  }
}

}  // namespace

TEST(Stepper, WorkedExample) {
  IntegralityStepper s(7, 196, 196);
  const auto r = s.evaluate();
  EXPECT_TRUE(r.xyzt_integer);
  EXPECT_TRUE(r.nozaki_integer);
  EXPECT_FALSE(r.r_zero);
}

TEST(Stepper, SmallDimensionsExhaustive) {
  for (std::int64_t n = 3; n <= 24; ++n) {
    const auto b = cardinality_bounds(n);
    expect_matches_exact(n, b.lower + 1, b.upper);
  }
}

TEST(Stepper, LargeDimensionWindows) {
  std::mt19937_64 rng(11);
  for (std::int64_t n : {97, 215, 1000, 4999, 20000, 50000}) {
    const auto b = cardinality_bounds(n);
    expect_matches_exact(n, b.lower + 1, b.lower + 300);
    expect_matches_exact(n, b.upper - 300, b.upper);
    const std::int64_t mid =
        std::uniform_int_distribution<std::int64_t>(b.lower + 1, b.upper - 300)(rng);
    expect_matches_exact(n, mid, mid + 300);
  }
}

TEST(Stepper, KnownIntegerPairs) {
  // Pairs found by the brute-force scan; the window crosses each one.
  const std::pair<std::int64_t, std::int64_t> pairs[] = {{7, 196}, {28, 9947}, {28, 35525}};
  for (const auto& [n, m] : pairs) {
    expect_matches_exact(n, m - 5, std::min(m + 5, cardinality_bounds(n).upper));
  }
}

TEST(Stepper, RejectsInvalidRanges) {
  EXPECT_THROW(IntegralityStepper(2, 10, 20), DomainError);
  EXPECT_THROW(IntegralityStepper(IntegralityStepper::kMaxDimension + 1, 10, 20), DomainError);
  EXPECT_THROW(IntegralityStepper(7, 200, 199), DomainError);
  EXPECT_THROW(IntegralityStepper(7, 10, 20), DomainError);  // A <= 0
}
