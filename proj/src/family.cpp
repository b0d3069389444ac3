#include "thickset/family.hpp"

#include <algorithm>
#include <string>

#include "thickset/errors.hpp"

namespace thickset {

const FamilyNode& FamilyNode::origin() const {
  const FamilyNode* node = this;
  while (node->source) node = node->source.get();
  return *node;
}

std::vector<FamilyNode> StageFamily::nodes(std::size_t level) const {
  if (auto cap = max_level(); cap && level > *cap) {
    throw InsufficientDepth("family has no level " + std::to_string(level), level);
  }
  std::vector<FamilyNode> current = roots();
  for (std::size_t l = 0; l < level; ++l) {
    std::vector<FamilyNode> next;
    for (const auto& node : current) {
      auto kids = children(node);
      next.insert(next.end(), std::make_move_iterator(kids.begin()), std::make_move_iterator(kids.end()));
    }
    current = std::move(next);
  }
  return current;
}

namespace {

std::vector<ClosedInterval> intervals_of(const std::vector<FamilyNode>& nodes) {
  std::vector<ClosedInterval> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.interval);
  return out;
}

}  // namespace

CantorStage StageFamily::stage(std::size_t level) const {
  if (auto cap = max_level(); cap && level > *cap) {
    throw InsufficientDepth("family has no level " + std::to_string(level), level);
  }
  std::vector<FamilyNode> current = roots();
  auto stage = std::make_shared<const CantorStage>(intervals_of(current), 0, nullptr, degenerate_allowed());
  for (std::size_t l = 0; l < level; ++l) {
    std::vector<FamilyNode> next;
    for (const auto& node : current) {
      auto kids = children(node);
      next.insert(next.end(), std::make_move_iterator(kids.begin()), std::make_move_iterator(kids.end()));
    }
    current = std::move(next);
    if (current.empty()) throw DomainError("family level " + std::to_string(l + 1) + " is empty");
    stage = std::make_shared<const CantorStage>(intervals_of(current), l + 1, stage, degenerate_allowed());
  }
  return *stage;
}

std::vector<CantorStage> StageFamily::stages(std::size_t up_to) const {
  const CantorStage deepest = stage(up_to);
  std::vector<CantorStage> out;
  for (const auto& s : deepest.lineage()) out.push_back(*s);
  return out;
}

FamilyNode derive_node(const FamilyNode& base, ClosedInterval interval) {
  FamilyNode node;
  node.interval = std::move(interval);
  node.level = base.level;
  node.key = base.key;
  node.gap_left = base.gap_left;
  node.gap_right = base.gap_right;
  node.source = std::make_shared<const FamilyNode>(base);
  return node;
}

// ---------------------------------------------------------------------------

ExplicitFamily::ExplicitFamily(std::vector<CantorStage> stages) : levels_(std::move(stages)) {
  if (levels_.empty()) throw DomainError("explicit family needs at least one stage");
  for (std::size_t l = 1; l < levels_.size(); ++l) {
    for (const auto& iv : levels_[l].intervals()) {
      if (!levels_[l - 1].locate(iv)) {
        throw DomainError("stage " + std::to_string(l) + " does not refine stage " + std::to_string(l - 1));
      }
    }
  }
}

FamilyPtr ExplicitFamily::from_lineage(const CantorStage& deepest) {
  std::vector<CantorStage> levels;
  for (const auto& s : deepest.lineage()) levels.push_back(*s);
  return std::make_shared<ExplicitFamily>(std::move(levels));
}

bool ExplicitFamily::degenerate_allowed() const {
  return std::any_of(levels_.begin(), levels_.end(), [](const CantorStage& s) { return s.degenerate_allowed(); });
}

std::vector<FamilyNode> ExplicitFamily::roots() const {
  std::vector<FamilyNode> out;
  for (const auto& iv : levels_.front().intervals()) out.push_back(FamilyNode{iv, 0, 0, {}, {}, nullptr});
  return out;
}

std::vector<FamilyNode> ExplicitFamily::children(const FamilyNode& node) const {
  const std::size_t next = node.level + 1;
  if (next >= levels_.size()) return {};
  const auto& ivs = levels_[next].intervals();
  auto it = std::lower_bound(ivs.begin(), ivs.end(), node.interval.lo,
                             [](const ClosedInterval& iv, const Rational& v) { return iv.lo < v; });
  std::vector<FamilyNode> out;
  for (; it != ivs.end() && it->hi <= node.interval.hi; ++it) out.push_back(FamilyNode{*it, next, 0, {}, {}, nullptr});
  return out;
}

// ---------------------------------------------------------------------------

AffineFamily::AffineFamily(FamilyPtr base, Rational scale, Rational shift)
    : base_(std::move(base)), scale_(std::move(scale)), shift_(std::move(shift)) {
  if (scale_.is_zero()) throw DomainError("affine family with zero scale");
}

std::vector<FamilyNode> AffineFamily::map(std::vector<FamilyNode> nodes) const {
  std::vector<FamilyNode> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) {
    Rational a = scale_ * n.interval.lo + shift_;
    Rational b = scale_ * n.interval.hi + shift_;
    if (scale_.sign() < 0) std::swap(a, b);
    FamilyNode mapped = derive_node(n, {std::move(a), std::move(b)});
    if (scale_.sign() < 0) std::swap(mapped.gap_left, mapped.gap_right);
    if (mapped.gap_left) mapped.gap_left = *mapped.gap_left * scale_.abs();
    if (mapped.gap_right) mapped.gap_right = *mapped.gap_right * scale_.abs();
    out.push_back(std::move(mapped));
  }
  if (scale_.sign() < 0) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<FamilyNode> AffineFamily::roots() const { return map(base_->roots()); }

std::vector<FamilyNode> AffineFamily::children(const FamilyNode& node) const {
  return map(base_->children(*node.source));
}

// ---------------------------------------------------------------------------

RestrictedFamily::RestrictedFamily(FamilyPtr base, ClosedInterval window)
    : base_(std::move(base)), window_(std::move(window)) {}

std::vector<FamilyNode> RestrictedFamily::clip(std::vector<FamilyNode> nodes) const {
  std::vector<FamilyNode> out;
  for (const auto& n : nodes) {
    auto part = n.interval.intersection(window_);
    if (!part || (part->degenerate() && !base_->degenerate_allowed())) continue;
    out.push_back(derive_node(n, std::move(*part)));
  }
  return out;
}

std::vector<FamilyNode> RestrictedFamily::roots() const {
  auto out = clip(base_->roots());
  if (out.empty()) throw DomainError("restriction window misses the family");
  return out;
}

std::vector<FamilyNode> RestrictedFamily::children(const FamilyNode& node) const {
  return clip(base_->children(*node.source));
}

}  // namespace thickset
