#include "thickset/rational.hpp"

#include <cctype>
#include <string>

#include "thickset/errors.hpp"

namespace thickset {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (!all_digits(digits)) {
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return mpz_class(text, 10);
}

}  // namespace

Rational::Rational(long long value) : value_(mpz_class(std::to_string(value), 10)) {}

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw DomainError("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const mpz_class num = parse_integer(text.substr(0, slash), text);
    const std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw ParseError("malformed rational '" + std::string(text) + "'");
    const mpz_class den(std::string(den_text), 10);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(mpq_class(num, den));
  }

  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    const std::string_view frac_part = text.substr(dot + 1);
    if (!frac_part.empty() && !all_digits(frac_part)) {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if (int_part.empty() && frac_part.empty()) throw ParseError("malformed decimal '" + std::string(text) + "'");
    if (!int_part.empty() && !all_digits(int_part)) {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    const std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    mpq_class q(mpz_class(digits.empty() ? "0" : digits, 10), scale);
    if (negative) q = -q;
    return Rational(q);
  }

  return Rational(mpq_class(parse_integer(text, text)));
}

Rational Rational::pow2(long exponent) {
  mpz_class p = 1;
  const unsigned long magnitude = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                               : static_cast<unsigned long>(exponent);
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), magnitude);
  return exponent < 0 ? Rational(mpq_class(mpz_class(1), p)) : Rational(mpq_class(p));
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::reciprocal() const {
  if (is_zero()) throw DomainError("reciprocal of zero");
  return Rational(mpq_class(1) / value_);
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
  if (rhs.is_zero()) throw DomainError("division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational midpoint(const Rational& a, const Rational& b) {
  mpq_class sum = a.raw() + b.raw();
  mpq_div_2exp(sum.get_mpq_t(), sum.get_mpq_t(), 1);
  return Rational(sum);
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

long floor_log2(const Rational& value) {
  if (value.is_zero()) throw DomainError("floor_log2 of zero");
  const Rational v = value.abs();
  const long num_bits = static_cast<long>(mpz_sizeinbase(v.raw().get_num_mpz_t(), 2));
  const long den_bits = static_cast<long>(mpz_sizeinbase(v.raw().get_den_mpz_t(), 2));
  long k = num_bits - den_bits;
  // 2^(k-1) < v < 2^(k+1); settle the last bit exactly
  while (Rational::pow2(k) > v) --k;
  while (Rational::pow2(k + 1) <= v) ++k;
  return k;
}

}  // namespace thickset
