#include "sdsieve/divisibility.hpp"

#include <bit>
#include <numeric>

namespace sdsieve {

namespace {

__extension__ typedef unsigned __int128 u128;

// (factor * x^power) mod modulus, with x < 2^63 and modulus < 2^63.
bool divides_scaled_power(std::uint64_t modulus, std::uint64_t factor, std::uint64_t x,
                          unsigned power) {
  if (modulus == 1) return true;
  u128 acc = factor % modulus;
  const u128 base = x % modulus;
  for (unsigned i = 0; i < power; ++i) acc = acc * base % modulus;
  return acc == 0;
}

unsigned v2(std::uint64_t x) { return static_cast<unsigned>(std::countr_zero(x)); }

unsigned v3(std::uint64_t x) {
  unsigned e = 0;
  while (x % 3 == 0) {
    x /= 3;
    ++e;
  }
  return e;
}

std::string divisibility_text(std::string_view lhs, std::int64_t multiplier, std::string_view rhs) {
  std::string s(lhs);
  s += " | ";
  if (multiplier != 1) s += std::to_string(multiplier);
  s += rhs;
  return s;
}

}  // namespace

unsigned p_adic_valuation(const BigInt& x, unsigned long p) {
  if (x == 0) throw DomainError("p_adic_valuation: valuation of zero is undefined");
  if (p < 2) throw DomainError("p_adic_valuation: p must be prime");
  if (p == 2) return static_cast<unsigned>(mpz_scan1(x.get_mpz_t(), 0));
  BigInt rest;
  mpz_abs(rest.get_mpz_t(), x.get_mpz_t());
  const BigInt prime(p);
  return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), prime.get_mpz_t()));
}

unsigned p_adic_valuation(std::int64_t x, std::uint64_t p) {
  if (x == 0) throw DomainError("p_adic_valuation: valuation of zero is undefined");
  if (p < 2) throw DomainError("p_adic_valuation: p must be prime");
  std::uint64_t u = x < 0 ? 0 - static_cast<std::uint64_t>(x) : static_cast<std::uint64_t>(x);
  if (p == 2) return v2(u);
  unsigned e = 0;
  while (u % p == 0) {
    u /= p;
    ++e;
  }
  return e;
}

std::string_view to_string(Lemma3Case c) {
  switch (c) {
    case Lemma3Case::A: return "A";
    case Lemma3Case::B1: return "B1";
    case Lemma3Case::B2: return "B2";
    case Lemma3Case::B3: return "B3";
    case Lemma3Case::C1: return "C1";
    case Lemma3Case::C2: return "C2";
    case Lemma3Case::D1: return "D1";
    case Lemma3Case::D2: return "D2";
    case Lemma3Case::D3: return "D3";
    case Lemma3Case::D4: return "D4";
    case Lemma3Case::Uncovered: return "UNCOVERED";
  }
  return "?";
}

std::string_view to_string(Lemma5Case c) {
  switch (c) {
    case Lemma5Case::A: return "A";
    case Lemma5Case::B: return "B";
    case Lemma5Case::C: return "C";
    case Lemma5Case::D: return "D";
  }
  return "?";
}

std::int64_t lemma3_multiplier(Lemma3Case c) {
  switch (c) {
    case Lemma3Case::A:
    case Lemma3Case::B1:
    case Lemma3Case::C1:
    case Lemma3Case::D1:
      return 1;
    case Lemma3Case::B3:
      return 2;
    case Lemma3Case::C2:
    case Lemma3Case::D2:
      return 3;
    case Lemma3Case::B2:
      return 4;
    case Lemma3Case::D3:
      return 6;
    case Lemma3Case::D4:
    case Lemma3Case::Uncovered:
      return 12;
  }
  return 12;
}

std::vector<Lemma3Case> lemma3_guards(std::int64_t n_in, std::int64_t m_in) {
  const auto n = static_cast<std::uint64_t>(n_in);
  const auto m = static_cast<std::uint64_t>(m_in);
  const unsigned v2n = v2(n), v3n = v3(n), v2m = v2(m), v3m = v3(m);
  const bool two = n % 2 == 0;
  const bool three = n % 3 == 0;
  const bool v2_special = v2n == 2 || v2n == 1 + v2m;  // v2(n) in {2, 1 + v2(M)}
  const bool v3_special = v3n == 1 + v3m;

  std::vector<Lemma3Case> guards;
  if (!two && !three) guards.push_back(Lemma3Case::A);
  if (!three && two && !v2_special) guards.push_back(Lemma3Case::B1);
  if (!three && v2n == 2) guards.push_back(Lemma3Case::B2);
  if (!three && v2n == 1 + v2m) guards.push_back(Lemma3Case::B3);
  if (!two && three && !v3_special) guards.push_back(Lemma3Case::C1);
  if (!two && v3_special) guards.push_back(Lemma3Case::C2);
  if (two && three && !v3_special && !v2_special) guards.push_back(Lemma3Case::D1);
  if (two && three && v3_special && !v2_special) guards.push_back(Lemma3Case::D2);
  if (two && three && v3_special && v2n == 1 + v2m) guards.push_back(Lemma3Case::D3);
  if (two && three && v3_special && v2n == 2) guards.push_back(Lemma3Case::D4);
  return guards;
}

Lemma3Verdict lemma3_verdict(const DesignCandidate& c) {
  auto guards = lemma3_guards(c.n(), c.m());
  Lemma3Case label = Lemma3Case::Uncovered;
  std::int64_t multiplier = lemma3_multiplier(Lemma3Case::Uncovered);
  if (!guards.empty()) {
    // Overlapping guards: require only the weakest conclusion among them.
    label = guards.front();
    multiplier = 1;
    for (const auto g : guards) {
      const auto d = lemma3_multiplier(g);
      if (d > lemma3_multiplier(label)) label = g;
      multiplier = std::lcm(multiplier, d);
    }
  }
  const auto n = static_cast<std::uint64_t>(c.n());
  const bool passed = divides_scaled_power(n, static_cast<std::uint64_t>(multiplier),
                                           static_cast<std::uint64_t>(c.m()), 1);
  return {label, passed, divisibility_text("n", multiplier, "M"), std::move(guards)};
}

Lemma5Verdict lemma5_verdict(const DesignCandidate& c) {
  const auto np1 = static_cast<std::uint64_t>(c.n()) + 1;
  const auto m = static_cast<std::uint64_t>(c.m());
  const bool even = np1 % 2 == 0;
  const bool three = np1 % 3 == 0;
  if (!even && !three) {
    return {Lemma5Case::A, divides_scaled_power(np1, 1, m, 2), "(n+1) | M^2", {Lemma5Case::A}};
  }
  if (even && !three) {
    return {Lemma5Case::B, divides_scaled_power(np1, 16, m, 2), "(n+1) | 16M^2", {Lemma5Case::B}};
  }
  if (!even && three) {
    return {Lemma5Case::C, divides_scaled_power(np1, 3, m, 2), "(n+1) | 3M^2", {Lemma5Case::C}};
  }
  return {Lemma5Case::D, divides_scaled_power(np1 * np1, 48, m, 4), "(n+1)^2 | 48M^4",
          {Lemma5Case::D}};
}

bool coarse_sieve(const DesignCandidate& c) {
  const auto n = static_cast<std::uint64_t>(c.n());
  const auto m = static_cast<std::uint64_t>(c.m());
  return divides_scaled_power(n, 12, m, 1) && divides_scaled_power(n + 1, 4, m, 2);
}

FineSieveResult fine_sieve(const DesignCandidate& c) {
  auto l3 = lemma3_verdict(c);
  auto l5 = lemma5_verdict(c);
  const bool passed = l3.passed && l5.passed;
  return {passed, std::move(l3), std::move(l5)};
}

std::int64_t coarse_step(std::int64_t n) {
  if (n < kMinDimension) throw DomainError("coarse_step: dimension must be at least 3");
  const std::int64_t from_n = n / std::gcd(n, std::int64_t{12});
  // (n+1) | 4 s^2 iff p^ceil(e/2) | s for odd p^e || n+1 and 2^ceil((e-2)/2) | s.
  std::int64_t rest = n + 1;
  std::int64_t from_np1 = 1;
  const auto absorb = [&from_np1](std::int64_t p, unsigned e) {
    const unsigned need = p == 2 ? (e > 2 ? (e - 1) / 2 : 0) : (e + 1) / 2;
    for (unsigned i = 0; i < need; ++i) from_np1 *= p;
  };
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e > 0) absorb(p, e);
  }
  if (rest > 1) absorb(rest, 1);
  return from_n * from_np1;
}

}  // namespace sdsieve
