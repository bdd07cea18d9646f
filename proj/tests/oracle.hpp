#pragma once

// Independent reference computations used to cross-check the library. None
// of these go through R(n, M) or the closed forms for XYZT and the Nozaki
// product; they start from the quartic f(t) and symmetric functions of its
// roots.

#include <array>
#include <cstdint>

#include <gmpxx.h>

namespace oracle {

// Quartic coefficients (c4, c3, c2, c1, c0) straight from (n, M).
inline std::array<mpz_class, 5> quartic(std::int64_t n_in, std::int64_t m_in) {
  const mpz_class n = n_in, m = m_in;
  const mpz_class a = 6 * m - n * (n + 1) * (n + 5);
  const mpz_class b = 3 * m - n * (n + 1) * (n + 2);
  return {(n + 2) * (n + 4) * a, n * (n - 1) * (n + 1) * (n + 2) * (n + 4),
          -9 * (n + 2) * (4 * m - n * (n + 1) * (n + 3)), -3 * n * (n - 1) * (n + 1) * (n + 2),
          6 * b};
}

// Discriminant of a t^4 + b t^3 + c t^2 + d t + e by the textbook formula.
inline mpz_class discriminant(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                              const mpz_class& d, const mpz_class& e) {
  mpz_class r = 256 * a * a * a * e * e * e;
  r -= 192 * a * a * b * d * e * e;
  r -= 128 * a * a * c * c * e * e;
  r += 144 * a * a * c * d * d * e;
  r -= 27 * a * a * d * d * d * d;
  r += 144 * a * b * b * c * e * e;
  r -= 6 * a * b * b * d * d * e;
  r -= 80 * a * b * c * c * d * e;
  r += 18 * a * b * c * d * d * d;
  r += 16 * a * c * c * c * c * e;
  r -= 4 * a * c * c * c * d * d;
  r -= 27 * b * b * b * b * e * e;
  r += 18 * b * b * b * c * d * e;
  r -= 4 * b * b * b * d * d * d;
  r -= 4 * b * b * c * c * c * e;
  r += b * b * c * c * d * d;
  return r;
}

inline mpz_class discriminant(const std::array<mpz_class, 5>& f) {
  return discriminant(f[0], f[1], f[2], f[3], f[4]);
}

inline mpz_class eval(const std::array<mpz_class, 5>& f, long t) {
  mpz_class v = 0;
  for (const auto& c : f) v = v * t + c;
  return v;
}

// R(n, M) recovered from the discriminant:
// R = disc(f) (n+2)^3 (n+4)^5 A^6 / (108 (n+1)^2 c4^6).
inline mpq_class r_from_discriminant(std::int64_t n_in, std::int64_t m_in) {
  const mpz_class n = n_in, m = m_in;
  const auto f = quartic(n_in, m_in);
  const mpz_class a = 6 * m - n * (n + 1) * (n + 5);
  mpz_class num = discriminant(f), den = 108;
  mpz_class t;
  mpz_pow_ui(t.get_mpz_t(), mpz_class(n + 2).get_mpz_t(), 3);
  num *= t;
  mpz_pow_ui(t.get_mpz_t(), mpz_class(n + 4).get_mpz_t(), 5);
  num *= t;
  mpz_pow_ui(t.get_mpz_t(), a.get_mpz_t(), 6);
  num *= t;
  den *= (n + 1) * (n + 1);
  mpz_pow_ui(t.get_mpz_t(), f[0].get_mpz_t(), 6);
  den *= t;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

// XYZT = prod(1 - x^2)^3 / (abcd * prod_{i<j}(x_i^2 - x_j^2)^2), using
// prod(1 - x^2) = f(1) f(-1) / c4^2, abcd = c0 / c4, and the discriminant
// of the monic quartic whose roots are the squares a^2..d^2.
inline mpq_class xyzt(std::int64_t n, std::int64_t m) {
  const auto f = quartic(n, m);
  // f(t) f(-t) = g(t^2) = g4 prod(s - x_i^2).
  const mpz_class &c4 = f[0], &c3 = f[1], &c2 = f[2], &c1 = f[3], &c0 = f[4];
  const mpz_class g4 = c4 * c4;
  const mpz_class g3 = 2 * c4 * c2 - c3 * c3;
  const mpz_class g2 = c2 * c2 + 2 * c4 * c0 - 2 * c3 * c1;
  const mpz_class g1 = 2 * c2 * c0 - c1 * c1;
  const mpz_class g0 = c0 * c0;
  // disc(g) = g4^6 prod_{i<j}(x_i^2 - x_j^2)^2.
  const mpq_class squares_disc(discriminant(g4, g3, g2, g1, g0), g4 * g4 * g4 * g4 * g4 * g4);
  const mpq_class one_minus(eval(f, 1) * eval(f, -1), c4 * c4);
  const mpq_class product_roots(c0, c4);
  mpq_class r = one_minus * one_minus * one_minus / (product_roots * squares_disc);
  r.canonicalize();
  return r;
}

// prod k = prod(1 - x)^3 / prod_{i<j}(x_i - x_j)^2 = f(1)^3 c4^3 / disc(f).
inline mpq_class nozaki(std::int64_t n, std::int64_t m) {
  const auto f = quartic(n, m);
  const mpz_class f1 = eval(f, 1);
  mpq_class r(f1 * f1 * f1 * f[0] * f[0] * f[0], discriminant(f));
  r.canonicalize();
  return r;
}

// Normalized sphere moments f_0..f_7.
inline mpq_class moment(int i, std::int64_t n_in) {
  const mpz_class n = n_in;
  mpq_class f = 0;
  if (i == 0) f = 1;
  if (i == 2) f = mpq_class(1, n);
  if (i == 4) f = mpq_class(3, n * (n + 2));
  if (i == 6) f = mpq_class(15, n * (n + 2) * (n + 4));
  f.canonicalize();
  return f;
}

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
