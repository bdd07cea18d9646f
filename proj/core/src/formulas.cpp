#include "sdsieve/formulas.hpp"

#include <string>
#include <utility>

namespace sdsieve {

namespace {

BigInt binomial(std::int64_t n, unsigned long k) {
  BigInt r;
  mpz_bin_ui(r.get_mpz_t(), big(n).get_mpz_t(), k);
  return r;
}

BigInt eval_poly(const std::vector<std::int64_t>& poly, const BigInt& x) {
  BigInt acc = 0;
  for (const auto c : poly) acc = acc * x + big(c);
  return acc;
}

// The seven terms of R(n, M), highest power of M first.
const std::vector<RTerm> kRTerms = {
    {6, +1, 14, 6, {}},
    {5, -1, 13, 7, {{{1, 0}, 1}, {{1, 1}, 1}, {{1, 3}, 1}}},
    {4, +1, 9, 5, {{{1, 0}, 2}, {{1, 1}, 1}, {{1, 93, 629, 1339, 818}, 1}}},
    {3, -1, 7, 4,
     {{{1, 0}, 3}, {{1, 1}, 2}, {{13, 436, 3688, 12782, 19163, 9998}, 1}}},
    {2, +1, 2, 3,
     {{{1, 0}, 4},
      {{1, 1}, 3},
      {{1, 2}, 1},
      {{1, 7}, 2},
      {{5, 447, 3303, 7873, 5652}, 1}}},
    {1, -1, 2, 3,
     {{{1, 0}, 5}, {{1, 1}, 4}, {{1, 2}, 2}, {{1, 5}, 2}, {{1, 7}, 3}, {{3, 5}, 1}}},
    {0, +1, 0, 0, {{{1, 0}, 6}, {{1, 1}, 5}, {{1, 2}, 3}, {{1, 5}, 3}, {{1, 7}, 4}}},
};

void require_dimension(std::int64_t n) {
  if (n < kMinDimension) throw DomainError("dimension must be at least 3, got " + std::to_string(n));
  if (n > kMaxDimension)
    throw DomainError("dimension exceeds supported maximum " + std::to_string(kMaxDimension));
}

}  // namespace

CardinalityBounds cardinality_bounds(std::int64_t n) {
  require_dimension(n);
  const BigInt tight = 2 * binomial(n + 2, 3);
  const BigInt absolute = binomial(n + 3, 4) + binomial(n + 2, 3);
  return {to_int64(tight), to_int64(absolute)};
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::DimensionTooSmall:
      return "dimension below 3";
    case RejectReason::DimensionTooLarge:
      return "dimension above supported maximum";
    case RejectReason::TightBound:
      return "M equals the tight 7-design bound 2*C(n+2,3); tight designs are excluded";
    case RejectReason::BelowTightBound:
      return "M below the 7-design lower bound 2*C(n+2,3)";
    case RejectReason::AboveAbsoluteBound:
      return "M above the 4-distance absolute bound C(n+3,4)+C(n+2,3)";
  }
  return "unknown";
}

std::optional<RejectReason> validate_candidate(std::int64_t n, std::int64_t m) {
  if (n < kMinDimension) return RejectReason::DimensionTooSmall;
  if (n > kMaxDimension) return RejectReason::DimensionTooLarge;
  const auto bounds = cardinality_bounds(n);
  if (m == bounds.lower) return RejectReason::TightBound;
  if (m < bounds.lower) return RejectReason::BelowTightBound;
  if (m > bounds.upper) return RejectReason::AboveAbsoluteBound;
  return std::nullopt;
}

InvalidCandidate::InvalidCandidate(RejectReason reason, std::int64_t n, std::int64_t m)
    : DomainError("invalid candidate (n=" + std::to_string(n) + ", M=" + std::to_string(m) +
                  "): " + std::string(to_string(reason))),
      reason_(reason) {}

DesignCandidate::DesignCandidate(std::int64_t n, std::int64_t m) : n_(n), m_(m) {
  if (const auto reason = validate_candidate(n, m)) throw InvalidCandidate(*reason, n, m);
}

DerivedQuantities derived_quantities_unchecked(std::int64_t n_in, std::int64_t m_in) {
  const BigInt n = big(n_in);
  const BigInt m = big(m_in);
  DerivedQuantities q;
  q.a = 6 * m - n * (n + 1) * (n + 5);
  q.b = 3 * m - n * (n + 1) * (n + 2);
  q.quartic = {
      (n + 2) * (n + 4) * q.a,
      n * (n - 1) * (n + 1) * (n + 2) * (n + 4),
      -9 * (n + 2) * (4 * m - n * (n + 1) * (n + 3)),
      -3 * n * (n - 1) * (n + 1) * (n + 2),
      6 * q.b,
  };
  q.r = evaluate_r(n_in, m_in);
  return q;
}

DerivedQuantities derived_quantities(const DesignCandidate& c) {
  return derived_quantities_unchecked(c.n(), c.m());
}

ExactRational moment(int i, std::int64_t n_in) {
  if (i < 0 || i > 7) throw DomainError("moment index must lie in [0, 7]");
  require_dimension(n_in);
  const BigInt n = big(n_in);
  switch (i) {
    case 0:
      return ExactRational(BigInt(1));
    case 2:
      return ExactRational(BigInt(1), n);
    case 4:
      return ExactRational(BigInt(3), n * (n + 2));
    case 6:
      return ExactRational(BigInt(15), n * (n + 2) * (n + 4));
    default:
      return ExactRational(BigInt(0));
  }
}

std::span<const RTerm> r_terms() { return kRTerms; }

std::array<BigInt, 7> r_coefficients(std::int64_t n_in) {
  const BigInt n = big(n_in);
  std::array<BigInt, 7> coefficients;
  for (const auto& term : kRTerms) {
    BigInt value = pow(BigInt(2), term.pow2) * pow(BigInt(3), term.pow3);
    for (const auto& factor : term.factors) value *= pow(eval_poly(factor.poly, n), factor.exponent);
    coefficients[term.m_power] = term.sign < 0 ? BigInt(-value) : value;
  }
  return coefficients;
}

BigInt evaluate_r(const std::array<BigInt, 7>& coefficients, std::int64_t m_in) {
  const BigInt m = big(m_in);
  BigInt acc = coefficients[6];
  for (int k = 5; k >= 0; --k) acc = acc * m + coefficients[k];
  return acc;
}

BigInt evaluate_r(std::int64_t n, std::int64_t m) { return evaluate_r(r_coefficients(n), m); }

ExactRational xyzt_product(const DesignCandidate& c, const DerivedQuantities& q) {
  if (q.r == 0) {
    throw SingularDenominator("R(n,M) = 0 for n=" + std::to_string(c.n()) +
                              ", M=" + std::to_string(c.m()));
  }
  const BigInt n = big(c.n());
  const BigInt m = big(c.m());
  const BigInt num = pow(m, 3) * pow(n - 1, 2) * pow(n + 4, 4) * pow(q.a, 7);
  const BigInt den = 54 * pow(n, 4) * pow(n + 1, 2) * q.r;
  return ExactRational(num, den);
}

ExactRational xyzt_product(const DesignCandidate& c) {
  return xyzt_product(c, derived_quantities(c));
}

ExactRational nozaki_product(const DesignCandidate& c, const DerivedQuantities& q) {
  if (q.r == 0) {
    throw SingularDenominator("R(n,M) = 0 for n=" + std::to_string(c.n()) +
                              ", M=" + std::to_string(c.m()));
  }
  const BigInt n = big(c.n());
  const BigInt m = big(c.m());
  const BigInt num = 2 * pow(m, 3) * (n + 1) * pow(n + 4, 2) * pow(n - 1, 3) * pow(q.a, 3);
  return ExactRational(num, q.r);
}

ExactRational nozaki_product(const DesignCandidate& c) {
  return nozaki_product(c, derived_quantities(c));
}

namespace {

// Fraction-free Gaussian elimination (Bareiss); exact for integer matrices.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t size = a.size();
  BigInt previous = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < size && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == size) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
      }
      a[i][k] = 0;
    }
    previous = a[k][k];
  }
  return sign * a[size - 1][size - 1];
}

}  // namespace

BigInt quartic_discriminant(const Quartic& f) {
  if (f[0] == 0) throw DomainError("quartic_discriminant: leading coefficient is zero");
  const std::array<BigInt, 4> df = {4 * f[0], 3 * f[1], 2 * f[2], f[3]};
  // Sylvester matrix of f (degree 4) and f' (degree 3): 3 rows of f, 4 rows of f'.
  std::vector<std::vector<BigInt>> s(7, std::vector<BigInt>(7, BigInt(0)));
  for (std::size_t row = 0; row < 3; ++row)
    for (std::size_t k = 0; k < 5; ++k) s[row][row + k] = f[k];
  for (std::size_t row = 0; row < 4; ++row)
    for (std::size_t k = 0; k < 4; ++k) s[3 + row][row + k] = df[k];
  // disc = (-1)^(4*3/2) * Res(f, f') / c4, and (-1)^6 = 1.
  const BigInt resultant = bareiss_determinant(std::move(s));
  return resultant / f[0];
}

bool discriminant_identity_check(const DesignCandidate& c) {
  const auto q = derived_quantities(c);
  const BigInt n = big(c.n());
  const BigInt lhs = quartic_discriminant(q.quartic) * pow(n + 2, 3) * pow(n + 4, 5) * pow(q.a, 6);
  const BigInt rhs = pow(q.quartic[0], 6) * 108 * pow(n + 1, 2) * q.r;
  return lhs == rhs;
}

}  // namespace sdsieve
