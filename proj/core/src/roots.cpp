#include "sdsieve/roots.hpp"

#include <utility>

namespace sdsieve {

namespace {

using RationalPolynomial = std::vector<mpq_class>;

void trim(RationalPolynomial& p) {
  std::size_t lead = 0;
  while (lead + 1 < p.size() && p[lead] == 0) ++lead;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lead));
}

bool is_zero(const RationalPolynomial& p) { return p.size() == 1 && p[0] == 0; }

// Remainder of a / b, both highest degree first.
RationalPolynomial remainder(RationalPolynomial a, const RationalPolynomial& b) {
  while (a.size() >= b.size() && !is_zero(a)) {
    const mpq_class factor = a[0] / b[0];
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= factor * b[i];
    a.erase(a.begin());
    if (a.empty()) a.push_back(0);
    trim(a);
  }
  return a;
}

// Positive rescaling to coprime integer coefficients; signs are preserved.
IntPolynomial to_integer(const RationalPolynomial& p) {
  BigInt denominator_lcm = 1;
  for (const auto& c : p) mpz_lcm(denominator_lcm.get_mpz_t(), denominator_lcm.get_mpz_t(),
                                  c.get_den_mpz_t());
  IntPolynomial out;
  out.reserve(p.size());
  BigInt content = 0;
  for (const auto& c : p) {
    out.emplace_back(c.get_num() * (denominator_lcm / c.get_den()));
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), out.back().get_mpz_t());
  }
  if (content > 1)
    for (auto& c : out) c /= content;
  return out;
}

int sign_of(const BigInt& v) { return sgn(v); }

}  // namespace

mpq_class Dyadic::to_rational() const {
  mpq_class q(mantissa);
  mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), exponent);
  return q;
}

Dyadic midpoint(const Dyadic& a, const Dyadic& b) {
  const unsigned long k = std::max(a.exponent, b.exponent);
  BigInt am = a.mantissa, bm = b.mantissa;
  mpz_mul_2exp(am.get_mpz_t(), am.get_mpz_t(), k - a.exponent);
  mpz_mul_2exp(bm.get_mpz_t(), bm.get_mpz_t(), k - b.exponent);
  return {am + bm, k + 1};
}

int sign_at(const IntPolynomial& p, const Dyadic& x) {
  // p(m / 2^k) * 2^(k*d) = sum a_j m^j 2^(k(d-j)), evaluated by Horner.
  BigInt acc = p.front();
  BigInt term;
  for (std::size_t i = 1; i < p.size(); ++i) {
    acc *= x.mantissa;
    mpz_mul_2exp(term.get_mpz_t(), p[i].get_mpz_t(), x.exponent * i);
    acc += term;
  }
  return sign_of(acc);
}

int sign_at(const IntPolynomial& p, const mpq_class& x) {
  mpq_class acc(p.front());
  for (std::size_t i = 1; i < p.size(); ++i) acc = acc * x + mpq_class(p[i]);
  return sgn(acc);
}

SturmSequence::SturmSequence(const IntPolynomial& p) {
  if (p.empty() || p.front() == 0) throw DomainError("SturmSequence: leading coefficient is zero");
  RationalPolynomial p0(p.begin(), p.end());
  RationalPolynomial p1;
  const std::size_t degree = p.size() - 1;
  for (std::size_t i = 0; i < degree; ++i) p1.emplace_back(p[i] * static_cast<long>(degree - i));
  if (p1.empty()) p1.push_back(0);
  chain_.push_back(to_integer(p0));
  if (is_zero(p1)) return;
  chain_.push_back(to_integer(p1));
  while (true) {
    RationalPolynomial r = remainder(p0, p1);
    if (is_zero(r)) break;
    for (auto& c : r) c = -c;
    chain_.push_back(to_integer(r));
    p0 = std::move(p1);
    p1 = std::move(r);
  }
  squarefree_ = chain_.back().size() == 1;
}

int SturmSequence::variations(const Dyadic& x) const {
  int changes = 0;
  int previous = 0;
  for (const auto& q : chain_) {
    const int s = sign_at(q, x);
    if (s == 0) continue;
    if (previous != 0 && s != previous) ++changes;
    previous = s;
  }
  return changes;
}

int SturmSequence::variations_at_infinity(bool positive) const {
  int changes = 0;
  int previous = 0;
  for (const auto& q : chain_) {
    int s = sign_of(q.front());
    if (!positive && (q.size() - 1) % 2 == 1) s = -s;
    if (previous != 0 && s != previous) ++changes;
    previous = s;
  }
  return changes;
}

int SturmSequence::count(const Dyadic& a, const Dyadic& b) const {
  return variations(a) - variations(b);
}

int SturmSequence::count_real() const {
  return variations_at_infinity(false) - variations_at_infinity(true);
}

std::vector<RootEnclosure> isolate_roots(const IntPolynomial& p, const Dyadic& lo,
                                         const Dyadic& hi, unsigned precision_bits) {
  const SturmSequence sturm(p);
  std::vector<RootEnclosure> out;

  // Width target 2^-precision as a dyadic comparison on mantissas.
  const auto narrow_enough = [precision_bits](const Dyadic& a, const Dyadic& b) {
    const unsigned long k = std::max(a.exponent, b.exponent);
    BigInt am = a.mantissa, bm = b.mantissa;
    mpz_mul_2exp(am.get_mpz_t(), am.get_mpz_t(), k - a.exponent);
    mpz_mul_2exp(bm.get_mpz_t(), bm.get_mpz_t(), k - b.exponent);
    BigInt width = bm - am;  // width / 2^k <= 2^-precision  <=>  width * 2^precision <= 2^k
    if (k >= precision_bits) {
      BigInt limit = 1;
      mpz_mul_2exp(limit.get_mpz_t(), limit.get_mpz_t(), k - precision_bits);
      return width <= limit;
    }
    mpz_mul_2exp(width.get_mpz_t(), width.get_mpz_t(), precision_bits - k);
    return width <= 1;
  };

  const auto refine = [&](Dyadic a, Dyadic b) {
    if (sign_at(p, b) == 0) {
      out.push_back({Interval::point(b.to_rational()), true});
      return;
    }
    int sign_a = sign_at(p, a);
    while (!narrow_enough(a, b)) {
      Dyadic m = midpoint(a, b);
      const int s = sign_at(p, m);
      if (s == 0) {
        out.push_back({Interval::point(m.to_rational()), true});
        return;
      }
      // Sign bisection needs a simple root and a nonzero sign at a.
      const bool root_left = (sign_a != 0 && sturm.squarefree()) ? s != sign_a
                                                                 : sturm.count(a, m) == 1;
      if (root_left) {
        b = std::move(m);
      } else {
        a = std::move(m);
        sign_a = s;
      }
    }
    out.push_back({Interval(a.to_rational(), b.to_rational()), false});
  };

  // Depth-first, left to right, so output is ascending.
  std::vector<std::pair<Dyadic, Dyadic>> stack;
  stack.emplace_back(lo, hi);
  while (!stack.empty()) {
    auto [a, b] = std::move(stack.back());
    stack.pop_back();
    const int roots = sturm.count(a, b);
    if (roots == 0) continue;
    if (roots == 1) {
      refine(std::move(a), std::move(b));
      continue;
    }
    Dyadic m = midpoint(a, b);
    stack.emplace_back(m, b);
    stack.emplace_back(a, m);
  }
  return out;
}

}  // namespace sdsieve
