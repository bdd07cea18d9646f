#pragma once

#include <stdexcept>
#include <string>

#include "sdsieve/exact.hpp"

namespace sdsieve {

// An enclosure would need to divide by an interval containing zero.
class ZeroDivisorEnclosure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed interval [lo, hi] with exact rational endpoints. Arithmetic is
// exact on the endpoints, so every result is a certified enclosure.
class Interval {
 public:
  Interval() = default;
  Interval(const mpq_class& lo, const mpq_class& hi);
  static Interval point(const mpq_class& value) { return Interval(value, value); }

  const mpq_class& lo() const { return lo_; }
  const mpq_class& hi() const { return hi_; }
  mpq_class width() const { return hi_ - lo_; }
  mpq_class midpoint() const { return (lo_ + hi_) / 2; }

  bool contains(const mpq_class& x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return contains(mpq_class(0)); }
  bool contains(const Interval& inner) const { return lo_ <= inner.lo_ && inner.hi_ <= hi_; }
  bool positive() const { return lo_ > 0; }
  bool negative() const { return hi_ < 0; }

  // Endpoints rounded outward to `digits` decimals.
  std::string lo_decimal(unsigned digits = 30) const;
  std::string hi_decimal(unsigned digits = 30) const;
  double approx() const { return midpoint().get_d(); }

  Interval operator-() const { return Interval(-hi_, -lo_); }
  Interval square() const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  mpq_class lo_{0};
  mpq_class hi_{0};
};

Interval operator+(const Interval& a, const mpq_class& b);
Interval operator-(const mpq_class& a, const Interval& b);
Interval operator*(const mpq_class& a, const Interval& b);

// Decimal rendering of floor(x * 10^digits) / 10^digits (or ceil when round_up).
std::string to_decimal(const mpq_class& x, unsigned digits, bool round_up);

}  // namespace sdsieve
