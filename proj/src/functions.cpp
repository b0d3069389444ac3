#include "thickset/functions.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "thickset/errors.hpp"

namespace thickset {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

namespace {

ClosedInterval interval_mul(const ClosedInterval& a, const ClosedInterval& b) {
  const Rational p1 = a.lo * b.lo;
  const Rational p2 = a.lo * b.hi;
  const Rational p3 = a.hi * b.lo;
  const Rational p4 = a.hi * b.hi;
  return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

}  // namespace

ClosedInterval Polynomial::enclose(const ClosedInterval& box) const {
  ClosedInterval acc{0, 0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = interval_mul(acc, box);
    acc.lo += *it;
    acc.hi += *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
  return Polynomial(std::move(d));
}

Polynomial operator-(const Polynomial& p) {
  std::vector<Rational> c = p.coeffs_;
  for (auto& v : c) v = -v;
  return Polynomial(std::move(c));
}

namespace {

// quotient and remainder of a / b
std::pair<Polynomial, Polynomial> divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rational> rem = a.coefficients();
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial(), a};
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - db + 1));
  for (int k = a.degree(); k >= db; --k) {
    const Rational coef = rem[static_cast<std::size_t>(k)] / b.leading();
    quot[static_cast<std::size_t>(k - db)] = coef;
    if (coef.is_zero()) continue;
    for (int j = 0; j <= db; ++j) {
      rem[static_cast<std::size_t>(k - db + j)] -= coef * b.coefficient(static_cast<std::size_t>(j));
    }
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divide(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Polynomial square_free(const Polynomial& p) {
  const Polynomial g = gcd(p, p.derivative());
  if (g.degree() <= 0) return p;
  return divide(p, g).first;
}

}  // namespace

Polynomial remainder(const Polynomial& a, const Polynomial& b) { return divide(a, b).second; }

SturmSequence::SturmSequence(const Polynomial& p) {
  if (p.is_zero()) throw DomainError("Sturm sequence of the zero polynomial");
  const Polynomial sqf = square_free(p);
  chain_.push_back(sqf);
  chain_.push_back(sqf.derivative());
  while (!chain_.back().is_zero()) {
    chain_.push_back(-remainder(chain_[chain_.size() - 2], chain_.back()));
  }
  chain_.pop_back();
}

std::size_t SturmSequence::variations(const Rational& x) const {
  std::size_t changes = 0;
  int last = 0;
  for (const auto& q : chain_) {
    const int s = q(x).sign();
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::size_t SturmSequence::count(const Rational& a, const Rational& b) const {
  if (!(a < b)) return 0;
  return variations(a) - variations(b);
}

std::size_t SturmSequence::count_closed(const Rational& a, const Rational& b) const {
  if (b < a) return 0;
  const std::size_t at_a = chain_.front()(a).is_zero() ? 1 : 0;
  return at_a + count(a, b);
}

std::vector<ClosedInterval> isolate_real_roots(const Polynomial& p, const Rational& width) {
  if (p.degree() <= 0) return {};
  if (width <= 0) throw DomainError("isolation width must be positive");
  const Polynomial sqf = square_free(p);
  Rational bound = 0;
  for (int i = 0; i < sqf.degree(); ++i) {
    bound = max(bound, (sqf.coefficient(static_cast<std::size_t>(i)) / sqf.leading()).abs());
  }
  bound += 1;

  const SturmSequence sturm(sqf);
  std::vector<ClosedInterval> boxes;
  // depth-first, left half first, so boxes come out in increasing order
  std::vector<ClosedInterval> pending{{-bound, bound}};
  while (!pending.empty()) {
    ClosedInterval box = std::move(pending.back());
    pending.pop_back();
    if (sturm.count(box.lo, box.hi) == 0) continue;
    if (box.length() <= width) {
      boxes.push_back(std::move(box));
      continue;
    }
    const Rational mid = midpoint(box.lo, box.hi);
    pending.push_back({mid, box.hi});
    pending.push_back({box.lo, mid});
  }
  return boxes;
}

// ---------------------------------------------------------------------------

FunctionSpec::FunctionSpec(std::vector<Rational> coefficients) {
  while (!coefficients.empty() && coefficients.back().is_zero()) coefficients.pop_back();
  if (coefficients.size() > kMaxDegree) {
    throw DomainError("function degree " + std::to_string(coefficients.size()) + " exceeds " +
                      std::to_string(kMaxDegree));
  }
  coefficients.insert(coefficients.begin(), Rational(0));
  poly_ = Polynomial(std::move(coefficients));
}

FunctionSpec FunctionSpec::parse(std::string_view text) {
  std::vector<Rational> coeffs;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    coeffs.push_back(Rational::parse(text.substr(start, comma == std::string_view::npos ? text.size() - start
                                                                                        : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return FunctionSpec(std::move(coeffs));
}

std::vector<Rational> FunctionSpec::coefficients() const {
  const auto& c = poly_.coefficients();
  if (c.size() <= 1) return {};
  return {c.begin() + 1, c.end()};
}

std::string FunctionSpec::str() const {
  const auto c = coefficients();
  if (c.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  return os.str();
}

Rational eval(const FunctionSpec& f, const Rational& t) { return f.polynomial()(t); }

Polynomial derivative(const FunctionSpec& f) { return f.polynomial().derivative(); }

DerivativeWindow derivative_window(const Rational& tau) {
  if (tau <= 1) throw DomainError("derivative window needs tau > 1, got " + tau.str());
  return {max(tau / (tau + 1), tau.reciprocal()), min(tau, 1 + tau.reciprocal())};
}

// ---------------------------------------------------------------------------

Rational default_inverse_precision() {
  if (const char* env = std::getenv("THICKSET_PRECISION"); env != nullptr && *env != '\0') {
    std::string_view text(env);
    Rational value;
    if (text.rfind("2^", 0) == 0) {
      value = Rational::pow2(std::stol(std::string(text.substr(2))));
    } else {
      value = Rational::parse(text);
    }
    if (value <= 0) throw DomainError("THICKSET_PRECISION must be positive");
    return value;
  }
  return Rational::pow2(-64);
}

CertifiedValue bisect_preimage(const Polynomial& f, const Rational& y, Rational lo, Rational hi, bool increasing,
                               const Rational& precision) {
  while (hi - lo > precision) {
    Rational mid = midpoint(lo, hi);
    const Rational fm = f(mid);
    if (fm == y) return CertifiedValue::exact(mid);
    if ((fm < y) == increasing) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return {std::move(lo), std::move(hi)};
}

namespace {

bool derivative_vanishes_inside(const Polynomial& d, const ClosedInterval& bracket) {
  if (d.is_zero()) return true;
  const SturmSequence sturm(d);
  std::size_t roots = sturm.count(bracket.lo, bracket.hi);
  if (roots > 0 && d(bracket.hi).is_zero()) --roots;
  return roots > 0;
}

const Rational& critical_width() {
  static const Rational width = Rational::pow2(-96);
  return width;
}

}  // namespace

CertifiedValue monotone_inverse(const FunctionSpec& f, const Rational& y, const ClosedInterval& bracket,
                                const Rational& precision) {
  if (precision <= 0) throw DomainError("precision must be positive");
  if (bracket.hi < bracket.lo) throw DomainError("empty bracket");
  const Polynomial& p = f.polynomial();
  const Polynomial d = p.derivative();
  if (bracket.degenerate()) {
    if (p(bracket.lo) != y) throw RangeError(y.str() + " is not the value at the degenerate bracket");
    return CertifiedValue::exact(bracket.lo);
  }
  if (derivative_vanishes_inside(d, bracket)) {
    throw DomainError("f' vanishes inside [" + bracket.lo.str() + ", " + bracket.hi.str() +
                      "]; f is not certified monotone there");
  }
  const Rational f_lo = p(bracket.lo);
  const Rational f_hi = p(bracket.hi);
  const bool increasing = f_lo < f_hi;
  if (y < min(f_lo, f_hi) || max(f_lo, f_hi) < y) {
    throw RangeError(y.str() + " lies outside f([" + bracket.lo.str() + ", " + bracket.hi.str() + "])");
  }
  if (y == f_lo) return CertifiedValue::exact(bracket.lo);
  if (y == f_hi) return CertifiedValue::exact(bracket.hi);
  return bisect_preimage(p, y, bracket.lo, bracket.hi, increasing, precision);
}

ClosedInterval derivative_range(const FunctionSpec& f, const ClosedInterval& window) {
  const Polynomial d = derivative(f);
  const Rational at_lo = d(window.lo);
  const Rational at_hi = d(window.hi);
  ClosedInterval range{min(at_lo, at_hi), max(at_lo, at_hi)};
  for (const auto& box : isolate_real_roots(d.derivative(), critical_width())) {
    const auto part = box.intersection(window);
    if (!part) continue;
    const ClosedInterval values = d.enclose(*part);
    range.lo = min(range.lo, values.lo);
    range.hi = max(range.hi, values.hi);
  }
  return range;
}

Rational derivative_ratio_bound(const FunctionSpec& f, const ClosedInterval& window) {
  const Polynomial d = derivative(f);
  if (d.is_zero() || SturmSequence(d).count_closed(window.lo, window.hi) > 0) {
    throw DomainError("f' vanishes on [" + window.lo.str() + ", " + window.hi.str() + "]");
  }
  const ClosedInterval range = derivative_range(f, window);
  if (range.lo.sign() > 0) return range.hi / range.lo - 1;
  if (range.hi.sign() < 0) return range.lo / range.hi - 1;
  throw PrecisionError("derivative bounds straddle zero; critical-point enclosure too coarse");
}

// ---------------------------------------------------------------------------

MonotoneMap::MonotoneMap(FunctionSpec f, bool inverse, ClosedInterval bracket, Rational precision)
    : f_(std::move(f)), inverse_(inverse), bracket_(std::move(bracket)), precision_(std::move(precision)) {}

MonotoneMap MonotoneMap::forward(FunctionSpec f) {
  return MonotoneMap(std::move(f), false, ClosedInterval{0, 0}, Rational(0));
}

MonotoneMap MonotoneMap::inverse(FunctionSpec f, ClosedInterval bracket, Rational precision) {
  if (precision <= 0) throw DomainError("precision must be positive");
  const Polynomial d = derivative(f);
  if (d.is_zero() || SturmSequence(d).count_closed(bracket.lo, bracket.hi) > 0 || d(bracket.lo).sign() < 0) {
    throw DomainError("f' is not positive on [" + bracket.lo.str() + ", " + bracket.hi.str() + "]");
  }
  return MonotoneMap(std::move(f), true, std::move(bracket), std::move(precision));
}

CertifiedValue MonotoneMap::enclose(const Rational& y) const {
  if (!inverse_) return CertifiedValue::exact(eval(f_, y));
  return monotone_inverse(f_, y, bracket_, precision_);
}

CertifiedValue MonotoneMap::enclose(const Rational& y, const ClosedInterval& hint) const {
  if (!inverse_) return CertifiedValue::exact(eval(f_, y));
  const Polynomial& p = f_.polynomial();
  if (p(hint.lo) == y) return CertifiedValue::exact(hint.lo);
  if (p(hint.hi) == y) return CertifiedValue::exact(hint.hi);
  return bisect_preimage(p, y, hint.lo, hint.hi, true, precision_);
}

ClosedInterval MonotoneMap::derivative_bounds(const ClosedInterval& window) const {
  if (!inverse_) return derivative_range(f_, window);
  ClosedInterval preimage{enclose(window.lo).lo, enclose(window.hi).hi};
  preimage.lo = max(preimage.lo, bracket_.lo);
  preimage.hi = min(preimage.hi, bracket_.hi);
  const ClosedInterval d = derivative_range(f_, preimage);
  if (d.lo.sign() <= 0) throw PrecisionError("derivative of f is not bounded away from zero");
  return {d.hi.reciprocal(), d.lo.reciprocal()};
}

std::string MonotoneMap::describe() const {
  return inverse_ ? "inverse of f(t) with coefficients " + f_.str() : "f(t) with coefficients " + f_.str();
}

}  // namespace thickset
