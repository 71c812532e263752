#include "matrixfirst/rational.hpp"

#include <cctype>

#include "matrixfirst/error.hpp"

namespace matrixfirst {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rational::Rational(long numerator, long denominator)
    : Rational(mpz_class(numerator), mpz_class(denominator)) {}

Rational::Rational(const mpz_class& numerator, const mpz_class& denominator) {
  if (denominator == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  const std::string_view token = trim(text);
  const auto slash = token.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_token(token)) {
      throw Error(ErrorCode::Parse, "not a rational token: '" + std::string(token) + "'");
    }
    return Rational(parse_integer(token), mpz_class(1));
  }
  const auto num = trim(token.substr(0, slash));
  const auto den = trim(token.substr(slash + 1));
  if (!is_integer_token(num) || !is_integer_token(den)) {
    throw Error(ErrorCode::Parse, "not a rational token: '" + std::string(token) + "'");
  }
  const mpz_class d = parse_integer(den);
  if (d == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator in '" + std::string(token) + "'");
  return Rational(parse_integer(num), d);
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw Error(ErrorCode::DivisionByZero, "rational division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace matrixfirst
