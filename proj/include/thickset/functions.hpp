#pragma once

// Configuration functions f with f(0) = 0: exact evaluation, derivatives,
// certified inverses, and rigorous derivative bounds.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thickset/core.hpp"

namespace thickset {

/// Dense polynomial with rational coefficients; coefficient i multiplies x^i.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const Rational& leading() const { return coeffs_.back(); }
  Rational coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }

  Rational operator()(const Rational& x) const;
  /// Natural interval extension by Horner's rule; inclusion monotone.
  ClosedInterval enclose(const ClosedInterval& box) const;
  Polynomial derivative() const;

  friend Polynomial operator-(const Polynomial& p);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Remainder of a divided by b (b nonzero).
Polynomial remainder(const Polynomial& a, const Polynomial& b);

/// Sturm sequence of p, used for exact counting of distinct real roots.
class SturmSequence {
 public:
  explicit SturmSequence(const Polynomial& p);
  /// Distinct roots in the half-open interval (a, b].
  std::size_t count(const Rational& a, const Rational& b) const;
  /// Distinct roots in the closed interval [a, b].
  std::size_t count_closed(const Rational& a, const Rational& b) const;

 private:
  std::size_t variations(const Rational& x) const;
  std::vector<Polynomial> chain_;
};

/// Boxes of width at most `width` isolating every real root of p, found by
/// bisection of a fixed Cauchy-bound interval. The boxes depend only on p and
/// `width`, never on a query window.
std::vector<ClosedInterval> isolate_real_roots(const Polynomial& p, const Rational& width);

/// f(t) = c1 t + c2 t^2 + ... + cd t^d, degree at most 8, no constant term.
class FunctionSpec {
 public:
  static constexpr std::size_t kMaxDegree = 8;

  /// coefficients[0] is c1.
  explicit FunctionSpec(std::vector<Rational> coefficients);
  static FunctionSpec identity() { return FunctionSpec({Rational(1)}); }
  /// Parses "c1,c2,...,cd".
  static FunctionSpec parse(std::string_view text);

  /// c1, ..., cd as given (trailing zeros trimmed).
  std::vector<Rational> coefficients() const;
  const Polynomial& polynomial() const { return poly_; }
  Rational slope_at_zero() const { return poly_.coefficient(1); }
  std::string str() const;

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;

 private:
  Polynomial poly_;
};

Rational eval(const FunctionSpec& f, const Rational& t);
Polynomial derivative(const FunctionSpec& f);

/// Open interval (max(tau/(tau+1), 1/tau), min(tau, 1 + 1/tau)) for f'(0).
struct DerivativeWindow {
  Rational lower;
  Rational upper;
  bool contains(const Rational& slope) const { return lower < slope && slope < upper; }
};

DerivativeWindow derivative_window(const Rational& tau);

/// Rational enclosure [lo, hi] of a real value.
struct CertifiedValue {
  Rational lo;
  Rational hi;

  static CertifiedValue exact(const Rational& v) { return {v, v}; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  ClosedInterval interval() const { return {lo, hi}; }
  friend bool operator==(const CertifiedValue&, const CertifiedValue&) = default;
};

/// 2^-64, or the value of THICKSET_PRECISION when set ("p/q", decimal, or
/// "2^-k").
Rational default_inverse_precision();

/// Bisection for the preimage of y under f on [lo, hi], assuming f is strictly
/// monotone there and y lies between f(lo) and f(hi). No checks.
CertifiedValue bisect_preimage(const Polynomial& f, const Rational& y, Rational lo, Rational hi, bool increasing,
                               const Rational& precision);

/// Enclosure of f^{-1}(y) on `bracket` of width at most `precision`. The
/// bracket must not contain a zero of f' in its interior.
CertifiedValue monotone_inverse(const FunctionSpec& f, const Rational& y, const ClosedInterval& bracket,
                                const Rational& precision);

/// Rigorous [min, max] bounds of f' over the window, from endpoint values and
/// interval evaluation over the isolated critical points of f'. Shrinking the
/// window never widens the bounds.
ClosedInterval derivative_range(const FunctionSpec& f, const ClosedInterval& window);

/// Upper bound on sup over x, y in the window of | |f'(x)|/|f'(y)| - 1 |.
/// Throws DomainError when f' vanishes on the window.
Rational derivative_ratio_bound(const FunctionSpec& f, const ClosedInterval& window);

/// A strictly increasing map given either by f itself or by f^{-1} on a
/// bracket where f' > 0. Values come back as certified enclosures.
class MonotoneMap {
 public:
  static MonotoneMap forward(FunctionSpec f);
  /// `bracket` is a domain of f on which f' > 0 (verified).
  static MonotoneMap inverse(FunctionSpec f, ClosedInterval bracket, Rational precision);

  bool is_inverse() const { return inverse_; }
  const FunctionSpec& function() const { return f_; }
  const Rational& precision() const { return precision_; }
  const ClosedInterval& bracket() const { return bracket_; }

  CertifiedValue enclose(const Rational& y) const;
  /// As enclose(), with a known enclosure of the value to start from.
  CertifiedValue enclose(const Rational& y, const ClosedInterval& hint) const;

  /// Rigorous bounds on the map's derivative over a window of its domain.
  ClosedInterval derivative_bounds(const ClosedInterval& window) const;

  std::string describe() const;

 private:
  MonotoneMap(FunctionSpec f, bool inverse, ClosedInterval bracket, Rational precision);

  FunctionSpec f_;
  bool inverse_;
  ClosedInterval bracket_;
  Rational precision_;
};

}  // namespace thickset
