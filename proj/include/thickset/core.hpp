#pragma once

// Exact interval geometry for finite Cantor stages: gaps, bridges, and
// Newhouse thickness.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "thickset/rational.hpp"

namespace thickset {

struct ClosedInterval {
  Rational lo;
  Rational hi;

  /// Throws DomainError when lo > hi.
  static ClosedInterval make(Rational lo, Rational hi);

  Rational length() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const ClosedInterval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool intersects(const ClosedInterval& other) const { return !(other.hi < lo || hi < other.lo); }
  std::optional<ClosedInterval> intersection(const ClosedInterval& other) const;

  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

std::ostream& operator<<(std::ostream& os, const ClosedInterval& iv);

enum class Side { left, right };

const char* to_string(Side side);

enum class GapKind { bounded, left_unbounded, right_unbounded };

const char* to_string(GapKind kind);

/// A connected component of the complement. For unbounded gaps only the finite
/// end is meaningful; the other field repeats it.
struct Gap {
  Rational lo;
  Rational hi;
  GapKind kind = GapKind::bounded;

  bool bounded() const { return kind == GapKind::bounded; }
  Rational length() const { return hi - lo; }
  /// Open-gap containment of a closed interval.
  bool contains(const ClosedInterval& iv) const;

  friend bool operator==(const Gap&, const Gap&) = default;
};

/// Finite union of pairwise disjoint closed intervals in increasing order,
/// with an optional link to the coarser stage it refines. Immutable.
class CantorStage {
 public:
  /// Validates ordering, disjointness, and (unless `allow_degenerate`)
  /// positive lengths. When `parent` is given every interval must lie inside
  /// one of the parent's intervals.
  CantorStage(std::vector<ClosedInterval> intervals, std::size_t depth = 0,
              std::shared_ptr<const CantorStage> parent = nullptr, bool allow_degenerate = false);

  static CantorStage single(Rational lo, Rational hi);

  const std::vector<ClosedInterval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  std::size_t depth() const { return depth_; }
  const std::shared_ptr<const CantorStage>& parent() const { return parent_; }
  bool degenerate_allowed() const { return allow_degenerate_; }

  const Rational& min() const { return intervals_.front().lo; }
  const Rational& max() const { return intervals_.back().hi; }
  ClosedInterval hull() const { return {min(), max()}; }

  /// Index of the interval containing x, if any.
  std::optional<std::size_t> locate(const Rational& x) const;
  /// Index of the interval containing all of `iv`, if any.
  std::optional<std::size_t> locate(const ClosedInterval& iv) const;
  bool contains(const Rational& x) const { return locate(x).has_value(); }

  /// Stages from the root of the lineage down to this one.
  std::vector<std::shared_ptr<const CantorStage>> lineage() const;

  friend bool operator==(const CantorStage& a, const CantorStage& b) {
    return a.depth_ == b.depth_ && a.intervals_ == b.intervals_;
  }

 private:
  std::vector<ClosedInterval> intervals_;
  std::size_t depth_;
  std::shared_ptr<const CantorStage> parent_;
  bool allow_degenerate_;
};

struct GapBridgeReport {
  Rational endpoint;
  Side side;  // which end of the gap `endpoint` is; the bridge extends away from the gap
  Gap gap;
  ClosedInterval bridge;
  Rational local_thickness;

  friend bool operator==(const GapBridgeReport&, const GapBridgeReport&) = default;
};

struct ThicknessResult {
  Rational value;
  GapBridgeReport argmin;
};

/// Bounded gaps in increasing order followed by the left- and right-unbounded
/// gaps.
std::vector<Gap> gaps(const CantorStage& stage);
std::vector<Gap> bounded_gaps(const CantorStage& stage);

/// Bridge at a gap endpoint by direct scan away from the gap. `side` says
/// which end of its gap `endpoint` is.
GapBridgeReport bridge_at(const CantorStage& stage, const Rational& endpoint, Side side);

/// Reports for every bounded-gap endpoint, left to right (left end of each gap
/// first). Linear time.
std::vector<GapBridgeReport> all_bridges(const CantorStage& stage);

/// Exact minimum of |B|/|G| over all gap endpoints, with the leftmost argmin.
ThicknessResult thickness(const CantorStage& stage);

/// Thickness if the stage has a bounded gap.
std::optional<Rational> thickness_if_defined(const CantorStage& stage);

/// Clip every interval to `window`; zero-length clips are dropped. The
/// lineage is restricted along with the stage.
CantorStage restrict(const CantorStage& stage, const ClosedInterval& window);

/// Exact image under x -> scale*x + shift; the lineage is mapped as well.
CantorStage affine_image(const CantorStage& stage, const Rational& scale, const Rational& shift);

}  // namespace thickset
