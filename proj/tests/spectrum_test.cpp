#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "sdsieve/roots.hpp"
#include "sdsieve/spectrum.hpp"

using namespace sdsieve;

namespace {

Interval iv(long lo_num, long hi_num, long den = 1) {
  return Interval(mpq_class(lo_num, den), mpq_class(hi_num, den));
}

Dyadic dy(long v) { return Dyadic::from_integer(v); }

}  // namespace

TEST(Interval, Arithmetic) {
  const auto a = iv(1, 2), b = iv(-3, 1);
  EXPECT_EQ(a + b, iv(-2, 3));
  EXPECT_EQ(a - b, iv(0, 5));
  EXPECT_EQ(a * b, iv(-6, 2));
  EXPECT_EQ(b.square(), iv(0, 9));
  EXPECT_EQ(iv(2, 4) / iv(1, 2), iv(1, 4));
  EXPECT_THROW(a / b, ZeroDivisorEnclosure);
  EXPECT_TRUE(iv(1, 2).positive());
  EXPECT_TRUE(iv(-2, -1).negative());
  EXPECT_TRUE(b.contains_zero());
}

TEST(Interval, DecimalRoundsOutward) {
  const Interval third(mpq_class(1, 3), mpq_class(1, 3));
  EXPECT_EQ(third.lo_decimal(5), "0.33333");
  EXPECT_EQ(third.hi_decimal(5), "0.33334");
  const Interval neg(mpq_class(-1, 3), mpq_class(-1, 3));
  EXPECT_EQ(neg.lo_decimal(3), "-0.334");
  EXPECT_EQ(neg.hi_decimal(3), "-0.333");
  EXPECT_EQ(Interval::point(mpq_class(5)).lo_decimal(2), "5.00");
}

TEST(Sturm, CountsDistinctRoots) {
  const IntPolynomial p = {1, 0, -2};  // t^2 - 2
  const SturmSequence s(p);
  EXPECT_EQ(s.count_real(), 2);
  EXPECT_EQ(s.count(dy(0), dy(2)), 1);
  EXPECT_EQ(s.count(dy(-2), dy(2)), 2);
  EXPECT_TRUE(s.squarefree());

  const IntPolynomial q = {1, -2, 1};  // (t - 1)^2
  const SturmSequence sq(q);
  EXPECT_FALSE(sq.squarefree());
  EXPECT_EQ(sq.count_real(), 1);
  EXPECT_EQ(sq.count(dy(0), dy(1)), 1);  // root at the right endpoint counts
  EXPECT_EQ(sq.count(dy(1), dy(2)), 0);

  EXPECT_EQ(SturmSequence({1, 0, 1}).count_real(), 0);
}

TEST(Roots, IsolatesAndRefines) {
  const IntPolynomial p = {1, 0, -2};
  const auto roots = isolate_roots(p, dy(-4), dy(4), 80);
  ASSERT_EQ(roots.size(), 2u);
  const mpq_class tiny(1, mpz_class(1) << 80);
  for (const auto& r : roots) {
    EXPECT_LE(r.interval.width(), tiny);
    EXPECT_NEAR(std::abs(r.interval.approx()), std::sqrt(2.0), 1e-15);
    // Sign change or exact root inside.
    EXPECT_LE(sign_at(p, r.interval.lo()) * sign_at(p, r.interval.hi()), 0);
  }
  EXPECT_LT(roots[0].interval.hi(), roots[1].interval.lo());

  // Rational roots are found exactly: (2t - 1)(t + 1).
  const auto exact = isolate_roots({2, 1, -1}, dy(-2), dy(2), 64);
  ASSERT_EQ(exact.size(), 2u);
  EXPECT_TRUE(exact[0].interval.contains(mpq_class(-1)));
  EXPECT_TRUE(exact[1].interval.contains(mpq_class(1, 2)));
}

TEST(Roots, HigherPrecisionNests) {
  const IntPolynomial p = {3, 0, -7, 1};
  const auto low = isolate_roots(p, dy(-3), dy(3), 40);
  const auto high = isolate_roots(p, dy(-3), dy(3), 120);
  ASSERT_EQ(low.size(), 3u);
  ASSERT_EQ(high.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(low[i].interval.contains(high[i].interval));
}

TEST(Spectrum, WorkedExampleRoots) {
  const auto q = derived_quantities(DesignCandidate(7, 196));
  const auto solved = solve_quartic(q.quartic, 128);
  ASSERT_EQ(solved.status, SpectrumStatus::Ok) << solved.detail;
  const auto& s = *solved.spectrum;
  const double expected[] = {-0.821721, -0.442124, 0.0508952, 0.546284};
  const auto roots = s.roots();
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(roots[i]->approx(), expected[i], 1e-5);
}

TEST(Spectrum, RejectsPolynomialsOutsideTheConditions) {
  // Two real roots only.
  EXPECT_EQ(solve_quartic({1, 0, 0, 0, -1}, 64).status, SpectrumStatus::TooFewRealRoots);
  // (t^2 - 1/4)^2 has repeated roots.
  EXPECT_EQ(solve_quartic({16, 0, -8, 0, 1}, 64).status, SpectrumStatus::RepeatedRoot);
  // Roots -0.9, -0.4, 0.1, 0.5: fine ordering |a| > |d| > |b| > |c|.
  const Quartic ok = {1000, 700, -370, -151, 18};
  EXPECT_EQ(solve_quartic(ok, 64).status, SpectrumStatus::Ok);
  // Roots -0.9, -0.4, 0.1, 0.95: |d| > |a|.
  const Quartic bad_order = {10000, 2500, -9100, -2545, 342};
  EXPECT_EQ(solve_quartic(bad_order, 64).status, SpectrumStatus::OrderingViolation);
  // Roots -0.9, -0.4, -0.1, 0.5: c < 0.
  const Quartic bad_sign = {1000, 900, -210, -209, -18};
  EXPECT_EQ(solve_quartic(bad_sign, 64).status, SpectrumStatus::SignPattern);
}

TEST(Spectrum, EnclosuresContainExactProducts) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(3, 200)(rng);
    const auto b = cardinality_bounds(n);
    const std::int64_t m = std::uniform_int_distribution<std::int64_t>(b.lower + 1, b.upper)(rng);
    const DesignCandidate c(n, m);
    const auto solved = solve_quartic(derived_quantities(c).quartic, 200);
    ASSERT_EQ(solved.status, SpectrumStatus::Ok) << n << " " << m << " " << solved.detail;
    const auto dd = distance_distribution(*solved.spectrum, c);
    EXPECT_TRUE(dd.product().contains(oracle::xyzt(n, m)));
    const auto nk = nozaki_coefficients(*solved.spectrum, c);
    EXPECT_TRUE(nk.product().contains(oracle::nozaki(n, m)));
    // Moment equations with even i: sum x^i X = f_i M - 1.
    const auto& s = *solved.spectrum;
    for (int i : {0, 2, 4, 6}) {
      Interval sum = Interval::point(0);
      const std::array<const Interval*, 4> r = s.roots(), w = dd.values();
      for (int j = 0; j < 4; ++j) {
        Interval power = Interval::point(1);
        for (int e = 0; e < i; ++e) power = power * *r[j];
        sum = sum + power * *w[j];
      }
      EXPECT_TRUE(sum.contains(oracle::moment(i, n) * m - 1)) << n << " " << m << " i=" << i;
    }
  }
}

TEST(NozakiBound, SmallDimension) {
  EXPECT_EQ(nozaki_dimension(7), 112);
  EXPECT_EQ(nozaki_bound(7), 8);
  for (std::int64_t n = 3; n <= 300; ++n) {
    const double big_n = static_cast<double>(nozaki_dimension(n));
    const double s = big_n * big_n / (2 * big_n - 2) + 0.25;
    const auto k = nozaki_bound(n);
    // k is the largest integer with (k - 1/2)^2 <= s.
    EXPECT_LE((k - 0.5) * (k - 0.5), s * (1 + 1e-12)) << n;
    EXPECT_GT((k + 0.5) * (k + 0.5), s * (1 - 1e-12)) << n;
  }
}

TEST(NozakiFactorization, MatchesExhaustiveSearch) {
  auto exhaustive = [](long product, long bound) {
    for (long a = -bound; a <= bound; ++a)
      for (long b = -bound; b <= bound; ++b)
        for (long c = -bound; c <= bound; ++c) {
          const long d = 1 - a - b - c;
          if (std::abs(d) <= bound && a * b * c * d == product) return true;
        }
    return false;
  };
  for (long bound : {1, 3, 8}) {
    for (long product = -200; product <= 200; ++product) {
      ASSERT_EQ(nozaki_factorization_feasible(BigInt(product), bound), exhaustive(product, bound))
          << product << " bound " << bound;
    }
  }
  EXPECT_FALSE(nozaki_factorization_feasible(BigInt(121), 8));
}

TEST(Integrality, Verdicts) {
  const PrecisionPolicy policy;
  const auto near_three = Interval(mpq_class(3) - mpq_class(1, mpz_class(1) << 70),
                                   mpq_class(3) + mpq_class(1, mpz_class(1) << 70));
  const auto v = integrality_test(near_three, policy, 128);
  EXPECT_EQ(v.outcome, IntegralityOutcome::NumericallyInteger);
  EXPECT_EQ(v.value, 3);
  EXPECT_EQ(integrality_test(iv(31, 32, 10), policy).outcome,
            IntegralityOutcome::CertifiedNonInteger);
  EXPECT_EQ(integrality_test(iv(29, 31, 10), policy).outcome, IntegralityOutcome::Undecided);
}

TEST(FullAnalysis, WorkedExampleIsRefuted) {
  const auto a = full_candidate_analysis(DesignCandidate(7, 196), PrecisionPolicy{});
  EXPECT_EQ(a.outcome, AnalysisOutcome::Refuted);
  EXPECT_EQ(a.refutation, "X is not an integer");
  ASSERT_TRUE(a.distribution);
  const auto values = a.distribution->values();
  // Values follow from the closed forms for X..T in terms of a < b < c < d.
  const double expected[] = {5.6345, 53.9553, 93.8405, 41.5698};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(values[i]->approx(), expected[i], 1e-3);
  EXPECT_EQ(a.precision_bits, 128u);
}
