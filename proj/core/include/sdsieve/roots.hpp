#pragma once

// Certified real-root isolation for integer polynomials via Sturm sequences
// and exact dyadic bisection.

#include <vector>

#include "sdsieve/exact.hpp"
#include "sdsieve/interval.hpp"

namespace sdsieve {

// Integer polynomial, coefficients highest degree first.
using IntPolynomial = std::vector<BigInt>;

// x = mantissa / 2^exponent.
struct Dyadic {
  BigInt mantissa;
  unsigned long exponent = 0;

  mpq_class to_rational() const;
  static Dyadic from_integer(long v) { return {BigInt(v), 0}; }
};

Dyadic midpoint(const Dyadic& a, const Dyadic& b);

// Sign of p(x), evaluated exactly.
int sign_at(const IntPolynomial& p, const Dyadic& x);
int sign_at(const IntPolynomial& p, const mpq_class& x);

class SturmSequence {
 public:
  explicit SturmSequence(const IntPolynomial& p);

  // Distinct real roots in (a, b]; requires a <= b.
  int count(const Dyadic& a, const Dyadic& b) const;
  int count_real() const;
  // True when gcd(p, p') is constant, i.e. p has no repeated root.
  bool squarefree() const { return squarefree_; }
  const std::vector<IntPolynomial>& chain() const { return chain_; }

 private:
  int variations(const Dyadic& x) const;
  int variations_at_infinity(bool positive) const;

  std::vector<IntPolynomial> chain_;
  bool squarefree_ = true;
};

struct RootEnclosure {
  Interval interval;
  bool exact = false;  // the root equals interval.lo() == interval.hi()
};

// Encloses every distinct real root of p in (lo, hi], ascending, each with
// width <= 2^-precision_bits. Refinement is deterministic bisection, so a
// higher precision yields enclosures nested in the lower-precision ones.
std::vector<RootEnclosure> isolate_roots(const IntPolynomial& p, const Dyadic& lo,
                                         const Dyadic& hi, unsigned precision_bits);

}  // namespace sdsieve
