#pragma once

// Integer-only refutation stages: p-adic valuations and the case analysis
// that turns integrality of XYZT into divisibility conditions on (n, M).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sdsieve/exact.hpp"
#include "sdsieve/formulas.hpp"

namespace sdsieve {

// Largest e with p^e | x. Throws DomainError for x == 0 or p < 2.
unsigned p_adic_valuation(const BigInt& x, unsigned long p);
unsigned p_adic_valuation(std::int64_t x, std::uint64_t p);

// Cases for divisibility by n. Uncovered marks the valuation pattern that
// none of the ten guards matches (6 | n, v3(n) != 1 + v3(M) and
// v2(n) in {2, 1 + v2(M)}); it falls back to n | 12M.
enum class Lemma3Case { A, B1, B2, B3, C1, C2, D1, D2, D3, D4, Uncovered };
enum class Lemma5Case { A, B, C, D };

std::string_view to_string(Lemma3Case c);
std::string_view to_string(Lemma5Case c);

template <class Case>
struct LemmaVerdict {
  Case case_label;
  bool passed;
  std::string required_divisibility;  // e.g. "n | 2M"
  std::vector<Case> matched_guards;   // all guards that held; size != 1 is logged

  bool ambiguous() const { return matched_guards.size() != 1; }
};

using Lemma3Verdict = LemmaVerdict<Lemma3Case>;
using Lemma5Verdict = LemmaVerdict<Lemma5Case>;

// All Lemma-3 guards that hold for (n, M), in declaration order.
std::vector<Lemma3Case> lemma3_guards(std::int64_t n, std::int64_t m);
// Multiplier d in the conclusion n | dM.
std::int64_t lemma3_multiplier(Lemma3Case c);

Lemma3Verdict lemma3_verdict(const DesignCandidate& c);
Lemma5Verdict lemma5_verdict(const DesignCandidate& c);

// n | 12M and (n+1) | 4M^2.
bool coarse_sieve(const DesignCandidate& c);

struct FineSieveResult {
  bool passed;
  Lemma3Verdict lemma3;
  Lemma5Verdict lemma5;
};

FineSieveResult fine_sieve(const DesignCandidate& c);

// Every M passing coarse_sieve for dimension n is a multiple of this step,
// and every multiple passes: n/gcd(n,12) times the least s with (n+1) | 4s^2.
std::int64_t coarse_step(std::int64_t n);

}  // namespace sdsieve
