#pragma once

// Closed-form quantities attached to a hypothetical spherical 4-distance
// 7-design of dimension n and cardinality M. Everything here is exact.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sdsieve/exact.hpp"

namespace sdsieve {

// Upper limit on n keeping every M in range below 2^63.
inline constexpr std::int64_t kMaxDimension = 100000;
inline constexpr std::int64_t kMinDimension = 3;

// Valid cardinalities satisfy lower < M <= upper. lower is the tight
// 7-design size 2*C(n+2,3); upper is the absolute bound C(n+3,4)+C(n+2,3).
struct CardinalityBounds {
  std::int64_t lower;
  std::int64_t upper;
};

CardinalityBounds cardinality_bounds(std::int64_t n);

enum class RejectReason {
  DimensionTooSmall,
  DimensionTooLarge,
  TightBound,          // M == 2*C(n+2,3): tight designs are excluded by assumption
  BelowTightBound,
  AboveAbsoluteBound,
};

std::string_view to_string(RejectReason reason);
std::optional<RejectReason> validate_candidate(std::int64_t n, std::int64_t m);

class InvalidCandidate : public DomainError {
 public:
  InvalidCandidate(RejectReason reason, std::int64_t n, std::int64_t m);
  RejectReason reason() const { return reason_; }

 private:
  RejectReason reason_;
};

// A (dimension, cardinality) pair inside the non-tight search range.
class DesignCandidate {
 public:
  DesignCandidate(std::int64_t n, std::int64_t m);

  std::int64_t n() const { return n_; }
  std::int64_t m() const { return m_; }

  friend auto operator<=>(const DesignCandidate&, const DesignCandidate&) = default;

 private:
  std::int64_t n_;
  std::int64_t m_;
};

// Integer coefficients of f(t), highest degree first: (c4, c3, c2, c1, c0).
using Quartic = std::array<BigInt, 5>;

struct DerivedQuantities {
  BigInt a;  // 6M - n(n+1)(n+5)
  BigInt b;  // 3M - n(n+1)(n+2)
  Quartic quartic;
  BigInt r;  // R(n, M)
};

DerivedQuantities derived_quantities(const DesignCandidate& c);
// Same formulas without the range check; used for boundary experiments.
DerivedQuantities derived_quantities_unchecked(std::int64_t n, std::int64_t m);

// Normalized sphere moments f_i, i in [0, 7].
ExactRational moment(int i, std::int64_t n);

// R(n, M) is kept in factored form: each coefficient of M^k is
// sign * 2^pow2 * 3^pow3 * prod(factor(n)^exponent).
struct RFactor {
  std::vector<std::int64_t> poly;  // coefficients in n, highest degree first
  unsigned exponent;
};

struct RTerm {
  unsigned m_power;
  int sign;
  unsigned pow2;
  unsigned pow3;
  std::vector<RFactor> factors;
};

std::span<const RTerm> r_terms();

// Coefficient of M^k at index k.
std::array<BigInt, 7> r_coefficients(std::int64_t n);
BigInt evaluate_r(std::int64_t n, std::int64_t m);
BigInt evaluate_r(const std::array<BigInt, 7>& coefficients, std::int64_t m);

// M^3 (n-1)^2 (n+4)^4 A^7 / (54 n^4 (n+1)^2 R). Throws SingularDenominator if R = 0.
ExactRational xyzt_product(const DesignCandidate& c);
ExactRational xyzt_product(const DesignCandidate& c, const DerivedQuantities& q);

// 2 M^3 (n+1) (n+4)^2 (n-1)^3 A^3 / R. Throws SingularDenominator if R = 0.
ExactRational nozaki_product(const DesignCandidate& c);
ExactRational nozaki_product(const DesignCandidate& c, const DerivedQuantities& q);

// Discriminant of a quartic from the Sylvester resultant Res(f, f') / c4.
BigInt quartic_discriminant(const Quartic& f);

// Checks disc(f) == c4^6 * 108 (n+1)^2 R / ((n+2)^3 (n+4)^5 A^6) exactly.
bool discriminant_identity_check(const DesignCandidate& c);

}  // namespace sdsieve
