#pragma once

// Fast exact integrality decisions for XYZT and k_a k_b k_c k_d over
// consecutive cardinalities M of one dimension, used by the brute-force
// scan. R(n, M) is advanced by forward differences in fixed-width two's
// complement; a divisibility d | N is rejected through the low 128 bits of
// the would-be quotient (Hensel lifting) and one residue check modulo
// 2^61 - 1, and confirmed with full GMP arithmetic otherwise.

#include <array>
#include <cstdint>
#include <vector>

#include "sdsieve/exact.hpp"

namespace sdsieve {

struct StepResult {
  bool r_zero = false;
  bool xyzt_integer = false;
  bool nozaki_integer = false;
};

class IntegralityStepper {
 public:
  // Limits n so that 6M stays below 2^63 for every M in range.
  static constexpr std::int64_t kMaxDimension = 50000;

  IntegralityStepper(std::int64_t n, std::int64_t m_first, std::int64_t m_last);

  std::int64_t m() const { return m_; }
  StepResult evaluate() const;
  void advance();

  // Number of candidates that needed a full-width confirmation so far.
  std::uint64_t exact_confirmations() const { return exact_confirmations_; }

 private:
  static constexpr std::size_t kMaxLimbs = 12;
  using Limbs = std::array<std::uint64_t, kMaxLimbs>;
  __extension__ typedef unsigned __int128 u128;

  // Factor known as odd part residues, 2-adic valuation and bit length.
  struct Factor {
    u128 odd_mod_2_128 = 0;
    std::uint64_t odd_mod_p = 0;
    unsigned v2 = 0;
    unsigned bits = 0;
  };
  static Factor factor_of(const BigInt& v);

  bool divides(const Factor& num_const, unsigned m_power, unsigned a_power,
               const Factor& den_const, const Factor& r, bool& confirmed) const;
  bool confirm_xyzt() const;
  bool confirm_nozaki() const;

  std::int64_t n_;
  std::int64_t m_;
  std::int64_t n_term_;  // n(n+1)(n+5), A = 6M - n_term_
  std::size_t limbs_;
  std::array<Limbs, 7> diffs_{};  // forward differences of R at M, diffs_[0] = R(M)
  Factor xyzt_num_, xyzt_den_, nozaki_num_, nozaki_den_;
  mutable std::uint64_t exact_confirmations_ = 0;
};

}  // namespace sdsieve
