#include "thickset/constructions.hpp"

#include <random>
#include <string>

#include "thickset/errors.hpp"

namespace thickset {

MiddleAlphaFamily::MiddleAlphaFamily(Rational alpha) : alpha_(std::move(alpha)) {
  if (alpha_ <= 0 || alpha_ >= 1) throw DomainError("middle-alpha needs 0 < alpha < 1, got " + alpha_.str());
  beta_ = (Rational(1) - alpha_) / 2;
}

std::vector<FamilyNode> MiddleAlphaFamily::roots() const {
  return {FamilyNode{{0, 1}, 0, 0, {}, {}, nullptr}};
}

std::vector<FamilyNode> MiddleAlphaFamily::children(const FamilyNode& node) const {
  const auto& iv = node.interval;
  const Rational piece = beta_ * iv.length();
  return {FamilyNode{{iv.lo, iv.lo + piece}, node.level + 1, 0, {}, {}, nullptr},
          FamilyNode{{iv.hi - piece, iv.hi}, node.level + 1, 0, {}, {}, nullptr}};
}

FamilyPtr middle_alpha_family(const Rational& alpha) { return std::make_shared<MiddleAlphaFamily>(alpha); }

CantorStage middle_alpha(const Rational& alpha, std::size_t depth) {
  return MiddleAlphaFamily(alpha).stage(depth);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kDraws = 4096;  // resolution of the random proportions

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

}  // namespace

RandomThickFamily::RandomThickFamily(RandomThickSpec spec) : spec_(std::move(spec)) {
  if (spec_.target_tau <= 0) throw DomainError("random thick set needs target_tau > 0");
  if (spec_.gap_spread < 0 || spec_.gap_spread >= 1) throw DomainError("gap_spread must lie in [0,1)");
}

std::vector<FamilyNode> RandomThickFamily::roots() const {
  return {FamilyNode{{0, 1}, 0, splitmix64(spec_.seed), {}, {}, nullptr}};
}

std::vector<FamilyNode> RandomThickFamily::children(const FamilyNode& node) const {
  const Rational& tau = spec_.target_tau;
  const Rational length = node.interval.length();

  Rational widest = length / (2 * tau + 1);
  if (node.gap_left) widest = min(widest, *node.gap_left);
  if (node.gap_right) widest = min(widest, *node.gap_right);

  std::mt19937_64 rng(node.key);
  std::uniform_int_distribution<std::uint64_t> draw(0, kDraws);
  const Rational shrink(static_cast<long>(draw(rng)), static_cast<long>(kDraws));
  const Rational slide(static_cast<long>(draw(rng)), static_cast<long>(kDraws));

  const Rational gap = widest * (Rational(1) - spec_.gap_spread * shrink);
  const Rational slack = length - gap - 2 * tau * gap;  // >= 0 since gap <= L/(2 tau + 1)
  const Rational left_len = tau * gap + slide * slack;

  const Rational cut_lo = node.interval.lo + left_len;
  const Rational cut_hi = cut_lo + gap;
  FamilyNode left{{node.interval.lo, cut_lo}, node.level + 1, splitmix64(node.key ^ 0x1ULL), node.gap_left, gap, nullptr};
  FamilyNode right{{cut_hi, node.interval.hi}, node.level + 1, splitmix64(node.key ^ 0x2ULL), gap, node.gap_right, nullptr};
  return {std::move(left), std::move(right)};
}

FamilyPtr random_thick_family(const RandomThickSpec& spec) { return std::make_shared<RandomThickFamily>(spec); }

CantorStage random_thick(const RandomThickSpec& spec) { return RandomThickFamily(spec).stage(spec.depth); }

// ---------------------------------------------------------------------------

CounterexampleParams CounterexampleParams::make(Rational tau, Rational eps, Rational c) {
  if (tau < 1) throw DomainError("counterexample needs tau >= 1");
  if (eps <= 0) throw DomainError("counterexample needs eps > 0");
  if (c <= 0 || c >= 1) throw DomainError("counterexample needs 0 < c < 1");
  Rational denom = 2 * tau + 1;
  Rational alpha = Rational(1) / denom;
  Rational beta = tau / denom;
  return {std::move(tau), std::move(eps), std::move(c), std::move(alpha), std::move(beta)};
}

std::array<Gap, 4> CounterexampleParts::gaps() const {
  std::array<Gap, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = Gap{intervals[i].hi, intervals[i + 1].lo, GapKind::bounded};
  return out;
}

CantorStage CounterexampleParts::stage() const {
  return CantorStage(std::vector<ClosedInterval>(intervals.begin(), intervals.end()));
}

CounterexampleParts counterexample_parts(const CounterexampleParams& p) {
  const Rational& tau = p.tau;
  const Rational& eps = p.eps;
  const Rational eps2 = eps * eps;
  const Rational c_inv = p.c.reciprocal();
  const Rational bt = p.beta * tau;
  const Rational at = p.alpha * tau;

  CounterexampleParts parts{{
      ClosedInterval{-(1 + tau) * eps, -(1 + bt + at) * eps},
      ClosedInterval{-(1 + bt) * eps, -eps},
      ClosedInterval{0, p.c * eps2},
      ClosedInterval{pow(1 + bt, 2) * c_inv * eps2, pow(1 + bt + at, 2) * p.c * eps2},
      ClosedInterval{pow(1 + tau, 2) * c_inv * eps2, tau * eps},
  }};

  for (std::size_t i = 0; i < 5; ++i) {
    const auto& iv = parts.intervals[i];
    if (!(iv.lo < iv.hi)) {
      throw ConstructionError("I" + std::to_string(i + 1) + " is empty: " + iv.lo.str() + " >= " + iv.hi.str());
    }
    if (i > 0 && !(parts.intervals[i - 1].hi < iv.lo)) {
      throw ConstructionError("I" + std::to_string(i) + " must lie left of I" + std::to_string(i + 1));
    }
  }
  return parts;
}

CantorStage counterexample_set(const CounterexampleParams& params) { return counterexample_parts(params).stage(); }

namespace {

bool calibrated(const Rational& tau, const Rational& eps, const Rational& tol, const Rational& c) {
  try {
    const auto th = thickness(counterexample_set(CounterexampleParams::make(tau, eps, c))).value;
    return tau - tol <= th && th <= tau;
  } catch (const ConstructionError&) {
    return false;
  }
}

constexpr long kCalibrationBits = 48;

}  // namespace

CounterexampleParams counterexample_calibrate(const Rational& tau, const Rational& eps, const Rational& tol) {
  if (tau <= 1) throw DomainError("calibration needs tau > 1, got " + tau.str());
  if (eps <= 0) throw DomainError("calibration needs eps > 0");
  if (tol < 0) throw DomainError("calibration needs tol >= 0");

  // Reachability is monotone in c in practice (the c-dependent bridge ratios
  // grow toward their c = 1 limits), so locate one working c near 1 and then
  // bisect down to the threshold.
  std::optional<Rational> working;
  for (long k = 1; k <= kCalibrationBits && !working; ++k) {
    const Rational c = Rational(1) - Rational::pow2(-k);
    if (calibrated(tau, eps, tol, c)) working = c;
  }
  if (!working) {
    throw CalibrationFailure("no c in (0,1) gives thickness within " + tol.str() + " of tau = " + tau.str() +
                             "; tau is beyond the reachable range for eps = " + eps.str());
  }

  Rational lo = 0;
  Rational hi = *working;
  for (long i = 0; i < kCalibrationBits && hi - lo > Rational::pow2(-kCalibrationBits); ++i) {
    const Rational mid = midpoint(lo, hi);
    if (calibrated(tau, eps, tol, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // halfway between the threshold and 1, so every c-dependent ratio is strict
  const Rational chosen = midpoint(hi, Rational(1));
  if (calibrated(tau, eps, tol, chosen)) return CounterexampleParams::make(tau, eps, chosen);
  return CounterexampleParams::make(tau, eps, hi);
}

}  // namespace thickset
