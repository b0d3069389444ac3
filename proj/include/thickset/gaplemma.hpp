#pragma once

// The Newhouse gap lemma as executable checks: hypothesis verdicts, exact
// stage intersections, and nested-interval certificates across refinements.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thickset/core.hpp"
#include "thickset/family.hpp"

namespace thickset {

struct GapLemmaVerdict {
  std::optional<Rational> tau1;  // absent when the stage has no bounded gap
  std::optional<Rational> tau2;
  bool product_ok = false;  // tau1 * tau2 >= 1
  std::optional<Gap> k1_in_gap_of_k2;
  std::optional<Gap> k2_in_gap_of_k1;
  bool applies = false;
  std::vector<std::string> reasons;  // why the lemma does not apply
};

GapLemmaVerdict check_hypotheses(const CantorStage& k1, const CantorStage& k2);

/// The gap of `outer` (bounded or unbounded) containing the hull of `inner`.
std::optional<Gap> enclosing_gap(const CantorStage& inner, const CantorStage& outer);

struct IntersectionWitness {
  /// Exact intersection at the deepest level; may contain single points.
  CantorStage common;
  Rational sample_point;
  /// One common interval per level, coarse to fine, each inside the previous.
  std::vector<ClosedInterval> chain;
  /// Family levels the chain entries belong to.
  std::vector<std::size_t> levels;
};

/// Merge scan of two sorted interval lists.
std::optional<IntersectionWitness> intersect(const CantorStage& k1, const CantorStage& k2);

struct PersistenceResult {
  std::optional<IntersectionWitness> witness;
  /// First level whose stage intersection is empty.
  std::optional<std::size_t> empty_at_level;

  bool ok() const { return witness.has_value(); }
};

/// Intersects the two families at every level 1..depth (level 0 alone when
/// depth is 0) and certifies a nested chain of common intervals.
PersistenceResult persistent_intersect(const StageFamily& k1_family, const StageFamily& k2_family, std::size_t depth);

}  // namespace thickset
