#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace sdsieve {

using BigInt = mpz_class;

// Raised for arguments outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when R(n, M) vanishes and a closed form would divide by zero.
class SingularDenominator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reduced fraction with positive denominator. Integrality is a bit-exact
// property: denominator() == 1.
class ExactRational {
 public:
  ExactRational() = default;
  explicit ExactRational(const BigInt& integer);
  ExactRational(const BigInt& numerator, const BigInt& denominator);
  explicit ExactRational(const mpq_class& value);

  // Parses "p" or "p/q" in decimal.
  static ExactRational parse(const std::string& text);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  const mpq_class& value() const { return value_; }

  // "1185921" for integers, "p/q" otherwise.
  std::string to_string() const;

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ + b.value_));
  }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ - b.value_));
  }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ * b.value_));
  }
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b);

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

BigInt big(std::int64_t v);
std::int64_t to_int64(const BigInt& v);  // throws DomainError when out of range
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt ceil_div(const BigInt& a, const BigInt& b);
BigInt isqrt(const BigInt& v);
BigInt pow(const BigInt& base, unsigned long exponent);

}  // namespace sdsieve
