#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "thickset/core.hpp"
#include "thickset/family.hpp"

namespace thickset {

// --- middle-alpha sets -------------------------------------------------------

/// Starting from [0,1], removes the open middle proportion `alpha` of every
/// interval at each level. Stage thickness is (1-alpha)/(2 alpha) at every
/// depth >= 1.
class MiddleAlphaFamily final : public StageFamily {
 public:
  explicit MiddleAlphaFamily(Rational alpha);

  const Rational& alpha() const { return alpha_; }
  /// Proportion kept on each side, (1 - alpha)/2.
  const Rational& beta() const { return beta_; }

  std::vector<FamilyNode> roots() const override;
  std::vector<FamilyNode> children(const FamilyNode& node) const override;

 private:
  Rational alpha_;
  Rational beta_;
};

FamilyPtr middle_alpha_family(const Rational& alpha);
CantorStage middle_alpha(const Rational& alpha, std::size_t depth);

// --- randomized thick sets ---------------------------------------------------

struct RandomThickSpec {
  Rational target_tau = 1;
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  /// In [0,1). 0 cuts the widest admissible gap dead center, like a middle-alpha
  /// set; larger values shrink the gap by a random factor down to
  /// (1 - gap_spread) and slide it within the admissible middle region.
  Rational gap_spread = Rational(1, 2);
};

/// Each interval of length L is cut by a gap of length at most
/// min(L/(2 target_tau + 1), adjacent gaps), placed so both pieces are at
/// least target_tau times the gap. Randomness is keyed per node, so any
/// subtree can be expanded on its own.
class RandomThickFamily final : public StageFamily {
 public:
  explicit RandomThickFamily(RandomThickSpec spec);

  const RandomThickSpec& spec() const { return spec_; }

  std::vector<FamilyNode> roots() const override;
  std::vector<FamilyNode> children(const FamilyNode& node) const override;

 private:
  RandomThickSpec spec_;
};

FamilyPtr random_thick_family(const RandomThickSpec& spec);
/// Stage at `spec.depth`, with lineage.
CantorStage random_thick(const RandomThickSpec& spec);

// --- the five-interval set avoiding {x - t, x, x + t^2} -------------------------

struct CounterexampleParams {
  Rational tau;
  Rational eps;
  Rational c;
  Rational alpha;
  Rational beta;

  /// alpha = 1/(2 tau + 1), beta = tau/(2 tau + 1). Requires tau >= 1, eps > 0,
  /// 0 < c < 1; tau = 1 is accepted so the limiting length table can be
  /// reproduced.
  static CounterexampleParams make(Rational tau, Rational eps, Rational c);
};

struct CounterexampleParts {
  std::array<ClosedInterval, 5> intervals;  // I1..I5

  /// G1..G4 as open gaps between consecutive intervals.
  std::array<Gap, 4> gaps() const;
  CantorStage stage() const;
};

/// I1..I5 exactly; throws ConstructionError naming the first violated
/// ordering.
CounterexampleParts counterexample_parts(const CounterexampleParams& params);
CantorStage counterexample_set(const CounterexampleParams& params);

/// Searches c in (0,1) so the set's thickness lies in [tau - tol, tau].
/// Throws CalibrationFailure when no c works (tau beyond the reachable range).
CounterexampleParams counterexample_calibrate(const Rational& tau, const Rational& eps, const Rational& tol);

}  // namespace thickset
