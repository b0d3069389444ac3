#pragma once

// Constructive finders for three-point configurations {x - t, x, x + f(t)}.
//
// Both finders follow the same outline. Take the largest gap, translated to
// (-a, 0) (after reflecting, if the right bridge is the longer one). Cut the
// left bridge [-b, -a] and right bridge [0, c] into K1 and K2. Then the
// reflected K1 meets g(K2), where g = f^{-1}. A nested chain of common
// intervals through the refinement levels certifies the point t of that
// intersection.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thickset/constructions.hpp"
#include "thickset/core.hpp"
#include "thickset/family.hpp"
#include "thickset/functions.hpp"
#include "thickset/gaplemma.hpp"

namespace thickset {

struct LargestGapFrame {
  Gap gap;
  GapBridgeReport left_bridge;
  GapBridgeReport right_bridge;
  /// |left bridge| >= |right bridge|; ties count as true.
  bool left_at_least_right = true;
};

/// Largest bounded gap (leftmost on ties) and its two bridges.
LargestGapFrame largest_gap_frame(const CantorStage& stage);

struct SubsetExtraction {
  FamilyPtr family;  // the original family restricted to `bridge`
  ClosedInterval bridge;
  Gap anchor_gap;  // the gap whose right endpoint starts the bridge
  Gap cut_gap;     // the smaller gap whose left bridge is `bridge`
  std::size_t discovery_level = 0;
};

/// Finds a bridge of hull width below delta and restricts the family to it.
/// Throws InsufficientDepth (with a depth hint) when no level up to
/// `max_level` exposes a suitable gap.
SubsetExtraction subset_extract(const FamilyPtr& family, const Rational& delta, std::size_t max_level = 48);

/// Lowest thickness over levels 1..up_to that have a bounded gap.
std::optional<Rational> family_thickness(const StageFamily& family, std::size_t up_to);

/// Enclosure of a map g by certified endpoint images, outward rounded and
/// clipped so every child image lies inside its parent's image.
class ImageFamily final : public StageFamily {
 public:
  ImageFamily(FamilyPtr base, MonotoneMap map);

  std::vector<FamilyNode> roots() const override;
  std::vector<FamilyNode> children(const FamilyNode& node) const override;
  std::optional<std::size_t> max_level() const override { return base_->max_level(); }
  bool degenerate_allowed() const override { return true; }

 private:
  FamilyPtr base_;
  MonotoneMap map_;
};

struct ChainSearchOptions {
  std::size_t min_depth = 10;
  std::size_t max_depth = 40;
  /// Stop once the common interval is this narrow (and min_depth is reached).
  std::optional<Rational> target_width;
  std::size_t node_budget = 200000;
};

struct ChainStep {
  FamilyNode a;
  FamilyNode b;
  ClosedInterval common;
};

/// Depth-first search for a nested chain of overlapping node pairs of the two
/// families, widest overlaps first. Returns the chain from level 0 down.
std::vector<ChainStep> nested_chain_search(const StageFamily& fa, const StageFamily& fb,
                                           const ChainSearchOptions& options);

struct MvtReport {
  Rational a, b, c, tau;
  CertifiedValue g_of_c;
  bool positive_inputs = false;                // a, b, c > 0
  bool left_bridge_at_least_right = false;     // b - a >= c
  bool right_bridge_ratio = false;             // tau a <= c
  bool left_bridge_ratio = false;              // tau a <= b - a
  bool derivative_lower = false;               // 1/tau < g' on [0, c]
  bool derivative_upper = false;               // g' < 1 + 1/tau on [0, c]
  bool g_zero = false;                         // g(0) = 0
  bool a_below_gc = false;                     // a < g(c)
  bool gc_below_b = false;                     // g(c) < b

  bool preconditions_hold() const {
    return positive_inputs && left_bridge_at_least_right && right_bridge_ratio && left_bridge_ratio &&
           derivative_lower && derivative_upper && g_zero;
  }
  bool conclusion_holds() const { return a_below_gc && gc_below_b; }
  std::vector<std::string> failures() const;
};

/// Checks 0 < a < g(c) < b and each hypothesis it rests on, separately.
/// Violations are reported, not thrown.
MvtReport verify_mvt_bounds(const Rational& a, const Rational& b, const Rational& c, const Rational& tau,
                            const MonotoneMap& g);
MvtReport verify_mvt_bounds(const Rational& a, const Rational& b, const Rational& c, const Rational& tau,
                            const FunctionSpec& g);

struct SearchConfig {
  std::optional<Rational> rho;      // default (1 + 1/tau)/2
  std::optional<Rational> epsilon;  // default (1/rho - 1)/2
  std::optional<Rational> delta;    // initial value; default the level-0 hull width
  std::size_t analysis_depth = 6;   // levels materialized for thickness checks
  std::size_t analysis_extra = 4;   // levels past subset discovery used for the frame
  std::size_t min_depth = 10;
  std::size_t max_depth = 40;
  std::optional<Rational> target_width;
  Rational inverse_precision = default_inverse_precision();
  std::size_t max_shrink = 60;
  std::size_t node_budget = 200000;
  /// When false, f'(0) outside the derivative window is attempted anyway and
  /// lemma failures are reported instead of treated as contradictions.
  bool enforce_window = true;
};

struct SearchDiagnostics {
  Rational tau;
  Rational rho;
  Rational epsilon;
  Rational delta;
  std::size_t shrink_steps = 0;
  std::size_t attempts = 0;
  std::size_t discovery_level = 0;
  std::size_t analysis_level = 0;
  ClosedInterval subset_bridge{0, 0};
  bool reflected = false;
  Rational a, b, c;
  Rational subset_thickness;
  Rational k1_thickness;
  std::optional<Rational> image_thickness;
  bool gap_lemma_applies = false;
  std::optional<MvtReport> mvt;
  std::size_t cross_check_level = 0;
};

struct ConfigWitness {
  FunctionSpec f = FunctionSpec::identity();
  Rational x;
  CertifiedValue t;
  CertifiedValue fx;
  std::size_t depth = 0;
  /// Intervals of the input family containing x - t, x, x + f(t), for levels
  /// 0..depth.
  std::array<std::vector<ClosedInterval>, 3> chains;
  std::optional<SearchDiagnostics> diagnostics;

  CertifiedValue left_point() const { return {x - t.hi, x - t.lo}; }
  CertifiedValue right_point() const { return {x + fx.lo, x + fx.hi}; }
};

struct WitnessCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Replays a witness against the family: every chain entry must be a node of
/// its level, nested in the previous entry, and hold its point's enclosure.
WitnessCheck verify_witness(const ConfigWitness& witness, const StageFamily& family);

struct ThreeApOptions {
  std::size_t analysis_depth = 6;
  std::size_t min_depth = 10;
  std::size_t max_depth = 40;
  std::optional<Rational> target_width;
  std::size_t node_budget = 200000;
};

/// A 3-AP whose middle point is an endpoint of the largest gap. Requires
/// thickness >= 1.
ConfigWitness find_3ap(const FamilyPtr& family, const ThreeApOptions& options = {});

/// A configuration {x - t, x, x + f(t)} for a set of thickness tau > 1 and
/// f'(0) inside derivative_window(tau).
ConfigWitness find_config(const FamilyPtr& family, const FunctionSpec& f, const SearchConfig& config = {});

// --- counterexample verification ----------------------------------------------

struct AvoidanceCheck {
  std::string name;
  std::string inequality;
  bool passed = false;
};

struct AvoidanceReport {
  CounterexampleParams params;
  std::optional<CounterexampleParts> parts;
  std::optional<Rational> thickness;
  std::vector<AvoidanceCheck> checks;
  /// Local thickness at both ends of each gap G1..G4.
  std::vector<GapBridgeReport> bridge_table;

  bool all_passed() const;
  /// Throws VerificationFailure naming the first failed inequality.
  void require_pass() const;
};

/// Checks (i) squares of -I1 and -I2 land in G4 and G3, (ii) sup over K of t^2
/// is below eps, (iii) thickness within `tol` of tau.
AvoidanceReport verify_counterexample(const CounterexampleParams& params, const Rational& tol = Rational(1, 1000000));
AvoidanceReport verify_counterexample_parts(const CounterexampleParams& params, const CounterexampleParts& parts,
                                            const Rational& tol = Rational(1, 1000000));

}  // namespace thickset
