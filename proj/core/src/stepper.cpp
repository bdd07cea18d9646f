#include "sdsieve/stepper.hpp"

#include <bit>
#include <string>

#include "sdsieve/formulas.hpp"

namespace sdsieve {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_p(u128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & kP);
  std::uint64_t hi = static_cast<std::uint64_t>((x >> 61) & kP);
  std::uint64_t top = static_cast<std::uint64_t>(x >> 122);
  std::uint64_t r = lo + hi + top;
  while (r >= kP) r -= kP;
  return r;
}

std::uint64_t mul_p(std::uint64_t a, std::uint64_t b) { return mod_p(static_cast<u128>(a) * b); }

std::uint64_t pow_p(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = mul_p(r, base);
  return r;
}

// 2^k mod (2^61 - 1); negative exponents use 2^61 = 1.
std::uint64_t pow2_p(long k) {
  long e = k % 61;
  if (e < 0) e += 61;
  return std::uint64_t{1} << e;
}

u128 pow_128(u128 base, unsigned e) {
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

// Inverse of an odd number modulo 2^128 by Newton iteration.
u128 inverse_128(u128 d) {
  u128 x = d;  // correct to 3 bits
  for (int i = 0; i < 6; ++i) x *= 2 - d * x;
  return x;
}

unsigned bit_length(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 128 - static_cast<unsigned>(std::countl_zero(hi));
  return 64 - static_cast<unsigned>(std::countl_zero(static_cast<std::uint64_t>(v)));
}

unsigned ctz_128(u128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return static_cast<unsigned>(std::countr_zero(lo));
  return 64 + static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(v >> 64)));
}

}  // namespace

IntegralityStepper::Factor IntegralityStepper::factor_of(const BigInt& v) {
  if (v <= 0) throw DomainError("IntegralityStepper: factor must be positive");
  Factor f;
  f.v2 = static_cast<unsigned>(mpz_scan1(v.get_mpz_t(), 0));
  f.bits = static_cast<unsigned>(mpz_sizeinbase(v.get_mpz_t(), 2));
  BigInt odd;
  mpz_fdiv_q_2exp(odd.get_mpz_t(), v.get_mpz_t(), f.v2);
  BigInt low;
  mpz_fdiv_r_2exp(low.get_mpz_t(), odd.get_mpz_t(), 128);
  BigInt low_hi;
  mpz_fdiv_q_2exp(low_hi.get_mpz_t(), low.get_mpz_t(), 64);
  f.odd_mod_2_128 = (static_cast<u128>(mpz_get_ui(low_hi.get_mpz_t())) << 64) |
                    static_cast<u128>(mpz_get_ui(low.get_mpz_t()) & ~std::uint64_t{0});
  f.odd_mod_p = mpz_fdiv_ui(odd.get_mpz_t(), kP);
  return f;
}

IntegralityStepper::IntegralityStepper(std::int64_t n, std::int64_t m_first, std::int64_t m_last)
    : n_(n), m_(m_first) {
  if (n < kMinDimension || n > kMaxDimension) {
    throw DomainError("IntegralityStepper: dimension out of range: " + std::to_string(n));
  }
  if (m_first < 1 || m_last < m_first) throw DomainError("IntegralityStepper: empty M range");
  n_term_ = n * (n + 1) * (n + 5);
  if (6 * m_first <= n_term_) throw DomainError("IntegralityStepper: requires A > 0 on the range");

  const auto coefficients = r_coefficients(n);
  BigInt bound = 0;
  const BigInt m_top = big(m_last) + 7;
  for (int k = 6; k >= 0; --k) bound = bound * m_top + abs(coefficients[k]);
  // Differences of order <= 6 are at most 2^6 max|R|; one more bit for the sign.
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 6 + 2;
  limbs_ = (bits + 63) / 64;
  if (limbs_ > kMaxLimbs) throw DomainError("IntegralityStepper: R exceeds fixed-width capacity");

  std::array<BigInt, 7> values;
  for (int i = 0; i < 7; ++i) values[i] = evaluate_r(coefficients, m_first + i);
  BigInt modulus = 1;
  mpz_mul_2exp(modulus.get_mpz_t(), modulus.get_mpz_t(), 64 * limbs_);
  for (int j = 0; j < 7; ++j) {
    // diffs_[j] = sum_i (-1)^(j-i) C(j,i) R(M+i)
    BigInt d = 0;
    for (int i = 0; i <= j; ++i) {
      BigInt binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(i));
      d += ((j - i) % 2 == 0 ? 1 : -1) * binom * values[i];
    }
    if (d < 0) d += modulus;
    std::size_t count = 0;
    mpz_export(diffs_[j].data(), &count, -1, sizeof(std::uint64_t), 0, 0, d.get_mpz_t());
  }

  const BigInt nb = big(n);
  xyzt_num_ = factor_of(pow(nb - 1, 2) * pow(nb + 4, 4));
  xyzt_den_ = factor_of(54 * pow(nb, 4) * pow(nb + 1, 2));
  nozaki_num_ = factor_of(2 * (nb + 1) * pow(nb + 4, 2) * pow(nb - 1, 3));
  nozaki_den_ = factor_of(BigInt(1));
}

void IntegralityStepper::advance() {
  ++m_;
  for (std::size_t j = 0; j < 6; ++j) {
    auto& lhs = diffs_[j];
    const auto& rhs = diffs_[j + 1];
    u128 carry = 0;
    for (std::size_t i = 0; i < limbs_; ++i) {
      const u128 s = static_cast<u128>(lhs[i]) + rhs[i] + carry;
      lhs[i] = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
  }
}

bool IntegralityStepper::divides(const Factor& num_const, unsigned m_power, unsigned a_power,
                                 const Factor& den_const, const Factor& r, bool& confirmed) const {
  confirmed = false;
  const auto m = static_cast<u128>(m_);
  const auto a = static_cast<u128>(6 * m_ - n_term_);
  const unsigned v2m = ctz_128(m), v2a = ctz_128(a);
  const u128 odd_m = m >> v2m, odd_a = a >> v2a;

  const unsigned e_num = num_const.v2 + m_power * v2m + a_power * v2a;
  const unsigned e_den = den_const.v2 + r.v2;
  if (e_num < e_den) return false;

  const long bits_num_upper = static_cast<long>(num_const.bits + m_power * bit_length(m) +
                                                a_power * bit_length(a));
  const long bits_den_lower = static_cast<long>(den_const.bits + r.bits) - 1;
  if (bits_num_upper < bits_den_lower) return false;  // 0 < N < d
  const long quotient_bits = bits_num_upper - bits_den_lower + 1;
  if (quotient_bits > 128) {
    confirmed = true;
    return true;
  }

  const unsigned shift = e_num - e_den;
  const u128 num_odd = num_const.odd_mod_2_128 * pow_128(odd_m, m_power) * pow_128(odd_a, a_power);
  const u128 num_reduced = shift >= 128 ? 0 : num_odd << shift;
  const u128 den_odd = den_const.odd_mod_2_128 * r.odd_mod_2_128;
  // If d | N the quotient is below 2^quotient_bits <= 2^128 and equals this.
  const u128 q = num_reduced * inverse_128(den_odd);
  if (quotient_bits < 128 && (q >> quotient_bits) != 0) return false;

  const std::uint64_t num_p = mul_p(
      mul_p(mul_p(num_const.odd_mod_p, pow_p(mod_p(odd_m), m_power)), pow_p(mod_p(odd_a), a_power)),
      pow2_p(static_cast<long>(shift)));
  const std::uint64_t den_p = mul_p(den_const.odd_mod_p, r.odd_mod_p);
  if (mul_p(mod_p(q), den_p) != num_p) return false;
  confirmed = true;
  return true;
}

StepResult IntegralityStepper::evaluate() const {
  StepResult result;
  Limbs r = diffs_[0];
  const bool negative = (r[limbs_ - 1] >> 63) != 0;
  if (negative) {
    u128 carry = 1;
    for (std::size_t i = 0; i < limbs_; ++i) {
      const u128 s = static_cast<u128>(~r[i]) + carry;
      r[i] = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
  }
  std::size_t top = limbs_;
  while (top > 0 && r[top - 1] == 0) --top;
  if (top == 0) {
    result.r_zero = true;
    return result;
  }

  Factor rf;
  rf.bits = static_cast<unsigned>(64 * (top - 1) + 64 - std::countl_zero(r[top - 1]));
  std::size_t low = 0;
  while (r[low] == 0) ++low;
  rf.v2 = static_cast<unsigned>(64 * low + std::countr_zero(r[low]));
  {
    // bits [v2, v2 + 128) of |R|
    const std::size_t limb = rf.v2 / 64;
    const unsigned offset = rf.v2 % 64;
    const auto at = [&](std::size_t i) -> std::uint64_t { return i < limbs_ ? r[i] : 0; };
    std::uint64_t w0 = at(limb), w1 = at(limb + 1), w2 = at(limb + 2);
    if (offset != 0) {
      w0 = (w0 >> offset) | (w1 << (64 - offset));
      w1 = (w1 >> offset) | (w2 << (64 - offset));
    }
    rf.odd_mod_2_128 = (static_cast<u128>(w1) << 64) | w0;
  }
  std::uint64_t residue = 0;
  for (std::size_t i = top; i-- > 0;) residue = mod_p((static_cast<u128>(residue) << 64) | r[i]);
  rf.odd_mod_p = mul_p(residue, pow2_p(-static_cast<long>(rf.v2)));

  bool confirm = false;
  if (divides(xyzt_num_, 3, 7, xyzt_den_, rf, confirm)) {
    result.xyzt_integer = confirm ? confirm_xyzt() : true;
  }
  if (divides(nozaki_num_, 3, 3, nozaki_den_, rf, confirm)) {
    result.nozaki_integer = confirm ? confirm_nozaki() : true;
  }
  return result;
}

bool IntegralityStepper::confirm_xyzt() const {
  ++exact_confirmations_;
  const BigInt n = big(n_), m = big(m_);
  const BigInt a = 6 * m - n * (n + 1) * (n + 5);
  const BigInt num = pow(m, 3) * pow(n - 1, 2) * pow(n + 4, 4) * pow(a, 7);
  const BigInt den = 54 * pow(n, 4) * pow(n + 1, 2) * abs(evaluate_r(n_, m_));
  return mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) != 0;
}

bool IntegralityStepper::confirm_nozaki() const {
  ++exact_confirmations_;
  const BigInt n = big(n_), m = big(m_);
  const BigInt a = 6 * m - n * (n + 1) * (n + 5);
  const BigInt num = 2 * pow(m, 3) * (n + 1) * pow(n + 4, 2) * pow(n - 1, 3) * pow(a, 3);
  const BigInt den = abs(evaluate_r(n_, m_));
  return mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) != 0;
}

}  // namespace sdsieve
