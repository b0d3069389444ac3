#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace thickset {

/// Exact arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
class Rational {
 public:
  Rational() = default;
  Rational(int value) : value_(value) {}  // NOLINT: integers convert freely
  Rational(long value) : value_(value) {}  // NOLINT
  Rational(long long value);  // NOLINT
  Rational(long numerator, long denominator);
  explicit Rational(mpq_class value);

  /// Accepts "p/q", "p", and plain decimals such as "-1.01".
  static Rational parse(std::string_view text);

  /// 2^exponent for any integer exponent.
  static Rational pow2(long exponent);

  /// Lowest-terms "p/q", or "p" when the denominator is 1.
  std::string str() const { return value_.get_str(); }
  double to_double() const { return value_.get_d(); }

  const mpq_class& raw() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  Rational abs() const;
  Rational reciprocal() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  friend Rational operator-(const Rational& v) { return Rational(mpq_class(-v.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class value_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational midpoint(const Rational& a, const Rational& b);

/// Integer power with nonnegative exponent.
Rational pow(const Rational& base, unsigned exponent);

/// Largest k with 2^k <= |value|, for nonzero value.
long floor_log2(const Rational& value);

}  // namespace thickset
