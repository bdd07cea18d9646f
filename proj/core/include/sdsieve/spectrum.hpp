#pragma once

// Certified evaluation of the inner-product spectrum {a, b, c, d}, the
// distance distribution (X, Y, Z, T) and the Nozaki coefficients, and the
// integrality decisions built on them.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdsieve/exact.hpp"
#include "sdsieve/formulas.hpp"
#include "sdsieve/interval.hpp"
#include "sdsieve/roots.hpp"

namespace sdsieve {

struct PrecisionPolicy {
  unsigned start_bits = 128;
  unsigned max_bits = 16384;
  unsigned confirmation_width = 64;  // NumericallyInteger needs width <= 2^-confirmation_width
};

struct InnerProductSpectrum {
  Interval a, b, c, d;  // ascending, pairwise disjoint
  unsigned precision_bits = 0;

  std::array<const Interval*, 4> roots() const { return {&a, &b, &c, &d}; }
};

enum class SpectrumStatus {
  Ok,
  TooFewRealRoots,
  RepeatedRoot,
  RootOutOfRange,     // a real root outside [-1, 1)
  SignPattern,        // b < 0 < c fails
  OrderingViolation,  // |a| > |d| > |b| > |c| fails
  NeedsPrecision,     // a required comparison is not decided at this precision
};

std::string_view to_string(SpectrumStatus s);

struct SpectrumResult {
  SpectrumStatus status = SpectrumStatus::NeedsPrecision;
  std::optional<InnerProductSpectrum> spectrum;  // set when status == Ok
  std::vector<RootEnclosure> roots;              // distinct real roots found in [-1, 1)
  std::string detail;
};

// Isolates and validates the four roots of the quartic. Violations of the
// spectrum conditions are reported through status, never thrown.
SpectrumResult solve_quartic(const Quartic& q, unsigned precision_bits);

struct DistanceDistribution {
  Interval x, y, z, t;
  ExactRational exact_product;  // XYZT from the closed form in (n, M)

  std::array<const Interval*, 4> values() const { return {&x, &y, &z, &t}; }
  Interval product() const { return x * y * z * t; }
};

// Throws ZeroDivisorEnclosure when a denominator enclosure contains zero;
// the caller escalates precision.
DistanceDistribution distance_distribution(const InnerProductSpectrum& s,
                                           const ExactRational& exact_product);
DistanceDistribution distance_distribution(const InnerProductSpectrum& s, const DesignCandidate& c);

struct NozakiCoefficients {
  Interval ka, kb, kc, kd;
  ExactRational exact_product;
  std::int64_t bound = 0;

  std::array<const Interval*, 4> values() const { return {&ka, &kb, &kc, &kd}; }
  Interval product() const { return ka * kb * kc * kd; }
};

// floor(1/2 + sqrt(N^2/(2N-2) + 1/4)) with N = n(n+1)(n+5)/6, in integers.
std::int64_t nozaki_bound(std::int64_t n);
std::int64_t nozaki_dimension(std::int64_t n);  // N

NozakiCoefficients nozaki_coefficients(const InnerProductSpectrum& s, std::int64_t n,
                                       const ExactRational& exact_product);
NozakiCoefficients nozaki_coefficients(const InnerProductSpectrum& s, const DesignCandidate& c);

// Whether `product` factors as k1 k2 k3 k4 with k1+k2+k3+k4 = 1 and |ki| <= bound.
bool nozaki_factorization_feasible(const BigInt& product, std::int64_t bound);

enum class IntegralityOutcome { CertifiedNonInteger, NumericallyInteger, Undecided };
std::string_view to_string(IntegralityOutcome o);

struct IntegralityVerdict {
  IntegralityOutcome outcome = IntegralityOutcome::Undecided;
  BigInt value;  // meaningful for NumericallyInteger
  unsigned precision_used = 0;
};

IntegralityVerdict integrality_test(const Interval& e, const PrecisionPolicy& policy,
                                    unsigned precision_used = 0);

enum class AnalysisOutcome { Refuted, Survivor, Undecided };
std::string_view to_string(AnalysisOutcome o);

struct QuantityVerdict {
  std::string quantity;  // "X", "Y", "Z", "T", "k_a", "k_b", "k_c", "k_d"
  IntegralityVerdict verdict;
};

struct SpectrumAnalysis {
  AnalysisOutcome outcome = AnalysisOutcome::Undecided;
  std::string refutation;  // empty unless Refuted
  SpectrumStatus spectrum_status = SpectrumStatus::NeedsPrecision;
  std::optional<InnerProductSpectrum> spectrum;
  std::optional<DistanceDistribution> distribution;
  std::optional<NozakiCoefficients> nozaki;
  std::vector<QuantityVerdict> verdicts;
  unsigned precision_bits = 0;
};

// Roots, distance distribution, Nozaki coefficients and their integrality,
// escalating precision (doubling) from policy.start_bits to policy.max_bits.
// A NumericallyInteger survivor still requires exact algebraic confirmation.
SpectrumAnalysis full_candidate_analysis(const DesignCandidate& c, const PrecisionPolicy& policy);
SpectrumAnalysis full_candidate_analysis(const DesignCandidate& c, const DerivedQuantities& q,
                                         const PrecisionPolicy& policy);

}  // namespace sdsieve
