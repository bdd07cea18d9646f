#include "sdsieve/exact.hpp"

#include <limits>

namespace sdsieve {

ExactRational::ExactRational(const BigInt& integer) : value_(integer) {}

ExactRational::ExactRational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw DomainError("ExactRational: zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

ExactRational::ExactRational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

ExactRational ExactRational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return ExactRational(BigInt(text, 10));
    return ExactRational(BigInt(text.substr(0, slash), 10), BigInt(text.substr(slash + 1), 10));
  } catch (const std::invalid_argument&) {
    throw DomainError("ExactRational: cannot parse '" + text + "'");
  }
}

std::string ExactRational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

ExactRational operator/(const ExactRational& a, const ExactRational& b) {
  if (b.value_ == 0) throw DomainError("ExactRational: division by zero");
  return ExactRational(mpq_class(a.value_ / b.value_));
}

BigInt big(std::int64_t v) {
  BigInt r;
  mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
  return r;
}

std::int64_t to_int64(const BigInt& v) {
  if (!mpz_fits_slong_p(v.get_mpz_t())) throw DomainError("value exceeds 64-bit range");
  return static_cast<std::int64_t>(mpz_get_si(v.get_mpz_t()));
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt isqrt(const BigInt& v) {
  if (v < 0) throw DomainError("isqrt of a negative value");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

BigInt pow(const BigInt& base, unsigned long exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

}  // namespace sdsieve
