#include "sdsieve/interval.hpp"

#include <algorithm>
#include <array>

namespace sdsieve {

Interval::Interval(const mpq_class& lo, const mpq_class& hi) : lo_(lo), hi_(hi) {
  if (lo_ > hi_) throw DomainError("Interval: lower endpoint exceeds upper endpoint");
}

Interval Interval::square() const {
  if (lo_ >= 0) return Interval(lo_ * lo_, hi_ * hi_);
  if (hi_ <= 0) return Interval(hi_ * hi_, lo_ * lo_);
  const mpq_class a = lo_ * lo_, b = hi_ * hi_;
  return Interval(mpq_class(0), a > b ? a : b);
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

Interval operator*(const Interval& a, const Interval& b) {
  const std::array<mpq_class, 4> p = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  return Interval(*lo, *hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw ZeroDivisorEnclosure("interval divisor encloses zero");
  return a * Interval(1 / b.hi_, 1 / b.lo_);
}

Interval operator+(const Interval& a, const mpq_class& b) { return a + Interval::point(b); }
Interval operator-(const mpq_class& a, const Interval& b) { return Interval::point(a) - b; }
Interval operator*(const mpq_class& a, const Interval& b) { return Interval::point(a) * b; }

std::string to_decimal(const mpq_class& x, unsigned digits, bool round_up) {
  const BigInt scale = pow(BigInt(10), digits);
  const BigInt scaled_num = x.get_num() * scale;
  const BigInt q = round_up ? ceil_div(scaled_num, x.get_den()) : floor_div(scaled_num, x.get_den());
  BigInt magnitude = abs(q);
  std::string digits_text = magnitude.get_str();
  if (digits_text.size() <= digits) digits_text.insert(0, digits + 1 - digits_text.size(), '0');
  std::string out = q < 0 ? "-" : "";
  out += digits_text.substr(0, digits_text.size() - digits);
  if (digits > 0) {
    out += '.';
    out += digits_text.substr(digits_text.size() - digits);
  }
  return out;
}

std::string Interval::lo_decimal(unsigned digits) const { return to_decimal(lo_, digits, false); }
std::string Interval::hi_decimal(unsigned digits) const { return to_decimal(hi_, digits, true); }

}  // namespace sdsieve
