#pragma once

// Refinement families: Cantor sets as lazily refined trees of closed
// intervals. Level 0 holds the roots, and every node's children are the
// intervals of the next level inside it. A stage at any level can be
// materialized, but searches that follow a single nested chain only expand
// the nodes they visit, so they can reach depths where the full stage would
// have billions of intervals.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "thickset/core.hpp"

namespace thickset {

struct FamilyNode {
  ClosedInterval interval;
  std::size_t level = 0;
  /// Per-node randomness key for generators that need one.
  std::uint64_t key = 0;
  /// Bounded gaps adjacent to the interval when it was cut.
  std::optional<Rational> gap_left;
  std::optional<Rational> gap_right;
  /// The node this one was derived from, for families wrapping another.
  std::shared_ptr<const FamilyNode> source;

  /// Follows `source` links to the node of the innermost family.
  const FamilyNode& origin() const;
};

class StageFamily {
 public:
  virtual ~StageFamily() = default;

  virtual std::vector<FamilyNode> roots() const = 0;
  /// Children in increasing order; empty past `max_level()`.
  virtual std::vector<FamilyNode> children(const FamilyNode& node) const = 0;
  /// Deepest available level, or nullopt for unbounded generators.
  virtual std::optional<std::size_t> max_level() const { return std::nullopt; }
  virtual bool degenerate_allowed() const { return false; }

  std::vector<FamilyNode> nodes(std::size_t level) const;
  /// Materialized stage with its lineage back to level 0.
  CantorStage stage(std::size_t level) const;
  /// Stages for levels 0..up_to.
  std::vector<CantorStage> stages(std::size_t up_to) const;
};

using FamilyPtr = std::shared_ptr<const StageFamily>;

/// A family given by explicit stages (e.g. parsed from JSON). Consecutive
/// stages must refine each other.
class ExplicitFamily final : public StageFamily {
 public:
  explicit ExplicitFamily(std::vector<CantorStage> stages);
  /// The lineage of `deepest` as a family.
  static FamilyPtr from_lineage(const CantorStage& deepest);

  std::vector<FamilyNode> roots() const override;
  std::vector<FamilyNode> children(const FamilyNode& node) const override;
  std::optional<std::size_t> max_level() const override { return levels_.size() - 1; }
  bool degenerate_allowed() const override;

 private:
  std::vector<CantorStage> levels_;
};

/// Image of a family under x -> scale*x + shift.
class AffineFamily final : public StageFamily {
 public:
  AffineFamily(FamilyPtr base, Rational scale, Rational shift);

  std::vector<FamilyNode> roots() const override;
  std::vector<FamilyNode> children(const FamilyNode& node) const override;
  std::optional<std::size_t> max_level() const override { return base_->max_level(); }
  bool degenerate_allowed() const override { return base_->degenerate_allowed(); }

 private:
  std::vector<FamilyNode> map(std::vector<FamilyNode> nodes) const;

  FamilyPtr base_;
  Rational scale_;
  Rational shift_;
};

/// Every level clipped to a closed window; zero-length clips are dropped.
class RestrictedFamily final : public StageFamily {
 public:
  RestrictedFamily(FamilyPtr base, ClosedInterval window);

  const ClosedInterval& window() const { return window_; }

  std::vector<FamilyNode> roots() const override;
  std::vector<FamilyNode> children(const FamilyNode& node) const override;
  std::optional<std::size_t> max_level() const override { return base_->max_level(); }
  bool degenerate_allowed() const override { return base_->degenerate_allowed(); }

 private:
  std::vector<FamilyNode> clip(std::vector<FamilyNode> nodes) const;

  FamilyPtr base_;
  ClosedInterval window_;
};

/// Wraps a base node as the source of a derived node with a new interval.
FamilyNode derive_node(const FamilyNode& base, ClosedInterval interval);

}  // namespace thickset
