#include "thickset/core.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "thickset/errors.hpp"

namespace thickset {

ClosedInterval ClosedInterval::make(Rational lo, Rational hi) {
  if (hi < lo) throw DomainError("interval [" + lo.str() + ", " + hi.str() + "] has lo > hi");
  return {std::move(lo), std::move(hi)};
}

std::optional<ClosedInterval> ClosedInterval::intersection(const ClosedInterval& other) const {
  Rational a = thickset::max(lo, other.lo);
  Rational b = thickset::min(hi, other.hi);
  if (b < a) return std::nullopt;
  return ClosedInterval{std::move(a), std::move(b)};
}

std::ostream& operator<<(std::ostream& os, const ClosedInterval& iv) {
  return os << '[' << iv.lo << ", " << iv.hi << ']';
}

const char* to_string(Side side) { return side == Side::left ? "left" : "right"; }

const char* to_string(GapKind kind) {
  switch (kind) {
    case GapKind::bounded:
      return "bounded";
    case GapKind::left_unbounded:
      return "left-unbounded";
    case GapKind::right_unbounded:
      return "right-unbounded";
  }
  return "?";
}

bool Gap::contains(const ClosedInterval& iv) const {
  switch (kind) {
    case GapKind::bounded:
      return lo < iv.lo && iv.hi < hi;
    case GapKind::left_unbounded:
      return iv.hi < hi;
    case GapKind::right_unbounded:
      return lo < iv.lo;
  }
  return false;
}

CantorStage::CantorStage(std::vector<ClosedInterval> intervals, std::size_t depth,
                         std::shared_ptr<const CantorStage> parent, bool allow_degenerate)
    : intervals_(std::move(intervals)),
      depth_(depth),
      parent_(std::move(parent)),
      allow_degenerate_(allow_degenerate) {
  if (intervals_.empty()) throw DomainError("a stage needs at least one interval");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (iv.hi < iv.lo) throw DomainError("interval " + std::to_string(i) + " has lo > hi");
    if (!allow_degenerate_ && iv.degenerate()) {
      throw DomainError("interval " + std::to_string(i) + " has zero length");
    }
    if (i > 0 && !(intervals_[i - 1].hi < iv.lo)) {
      throw DomainError("intervals " + std::to_string(i - 1) + " and " + std::to_string(i) +
                        " are not disjoint and increasing");
    }
  }
  if (parent_) {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      if (!parent_->locate(intervals_[i])) {
        throw DomainError("interval " + std::to_string(i) + " is not inside any parent interval");
      }
    }
  }
}

CantorStage CantorStage::single(Rational lo, Rational hi) {
  return CantorStage({ClosedInterval::make(std::move(lo), std::move(hi))});
}

std::optional<std::size_t> CantorStage::locate(const Rational& x) const {
  // first interval with hi >= x
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), x,
                             [](const ClosedInterval& iv, const Rational& v) { return iv.hi < v; });
  if (it == intervals_.end() || x < it->lo) return std::nullopt;
  return static_cast<std::size_t>(it - intervals_.begin());
}

std::optional<std::size_t> CantorStage::locate(const ClosedInterval& iv) const {
  auto idx = locate(iv.lo);
  if (idx && iv.hi <= intervals_[*idx].hi) return idx;
  return std::nullopt;
}

std::vector<std::shared_ptr<const CantorStage>> CantorStage::lineage() const {
  std::vector<std::shared_ptr<const CantorStage>> chain;
  chain.push_back(std::make_shared<const CantorStage>(*this));
  for (auto p = parent_; p; p = p->parent()) chain.push_back(p);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<Gap> bounded_gaps(const CantorStage& stage) {
  const auto& ivs = stage.intervals();
  std::vector<Gap> out;
  out.reserve(ivs.size() - 1);
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i) out.push_back({ivs[i].hi, ivs[i + 1].lo, GapKind::bounded});
  return out;
}

std::vector<Gap> gaps(const CantorStage& stage) {
  auto out = bounded_gaps(stage);
  out.push_back({stage.min(), stage.min(), GapKind::left_unbounded});
  out.push_back({stage.max(), stage.max(), GapKind::right_unbounded});
  return out;
}

namespace {

GapBridgeReport make_report(Rational endpoint, Side side, Gap gap, ClosedInterval bridge) {
  Rational ratio = bridge.length() / gap.length();
  return {std::move(endpoint), side, std::move(gap), std::move(bridge), std::move(ratio)};
}

}  // namespace

GapBridgeReport bridge_at(const CantorStage& stage, const Rational& endpoint, Side side) {
  const auto& ivs = stage.intervals();
  const std::size_t n = ivs.size();
  if (side == Side::right) {
    // endpoint is the right end of gap (ivs[k-1].hi, ivs[k].lo)
    auto k = stage.locate(endpoint);
    if (!k || *k == 0 || ivs[*k].lo != endpoint) {
      throw DomainError(endpoint.str() + " is not the right endpoint of a bounded gap");
    }
    const Gap gap{ivs[*k - 1].hi, ivs[*k].lo, GapKind::bounded};
    const Rational gap_len = gap.length();
    std::size_t j = *k;
    while (j + 1 < n && ivs[j + 1].lo - ivs[j].hi <= gap_len) ++j;
    return make_report(endpoint, side, gap, {endpoint, ivs[j].hi});
  }
  auto k = stage.locate(endpoint);
  if (!k || *k + 1 >= n || ivs[*k].hi != endpoint) {
    throw DomainError(endpoint.str() + " is not the left endpoint of a bounded gap");
  }
  const Gap gap{ivs[*k].hi, ivs[*k + 1].lo, GapKind::bounded};
  const Rational gap_len = gap.length();
  std::size_t j = *k;
  while (j > 0 && ivs[j].lo - ivs[j - 1].hi <= gap_len) --j;
  return make_report(endpoint, side, gap, {ivs[j].lo, endpoint});
}

std::vector<GapBridgeReport> all_bridges(const CantorStage& stage) {
  const auto& ivs = stage.intervals();
  const std::size_t m = ivs.size() - 1;  // bounded gaps; gap k sits between ivs[k] and ivs[k+1]
  std::vector<Rational> len(m);
  for (std::size_t k = 0; k < m; ++k) len[k] = ivs[k + 1].lo - ivs[k].hi;

  // nearest strictly longer gap on each side, by monotonic stack
  std::vector<std::size_t> next_longer(m, m);
  std::vector<std::ptrdiff_t> prev_longer(m, -1);
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < m; ++k) {
    while (!stack.empty() && len[stack.back()] < len[k]) {
      next_longer[stack.back()] = k;
      stack.pop_back();
    }
    stack.push_back(k);
  }
  stack.clear();
  for (std::size_t k = m; k-- > 0;) {
    while (!stack.empty() && len[stack.back()] < len[k]) {
      prev_longer[stack.back()] = static_cast<std::ptrdiff_t>(k);
      stack.pop_back();
    }
    stack.push_back(k);
  }

  std::vector<GapBridgeReport> out;
  out.reserve(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    const Gap gap{ivs[k].hi, ivs[k + 1].lo, GapKind::bounded};
    const auto left_stop = static_cast<std::size_t>(prev_longer[k] + 1);
    out.push_back(make_report(gap.lo, Side::left, gap, {ivs[left_stop].lo, gap.lo}));
    out.push_back(make_report(gap.hi, Side::right, gap, {gap.hi, ivs[next_longer[k]].hi}));
  }
  return out;
}

ThicknessResult thickness(const CantorStage& stage) {
  if (stage.size() < 2) throw DomainError("thickness undefined for a single interval");
  auto reports = all_bridges(stage);
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].local_thickness < reports[best].local_thickness) best = i;
  }
  Rational value = reports[best].local_thickness;
  return {std::move(value), std::move(reports[best])};
}

std::optional<Rational> thickness_if_defined(const CantorStage& stage) {
  if (stage.size() < 2) return std::nullopt;
  return thickness(stage).value;
}

namespace {

std::vector<ClosedInterval> clip(const CantorStage& stage, const ClosedInterval& window) {
  std::vector<ClosedInterval> out;
  for (const auto& iv : stage.intervals()) {
    if (iv.hi < window.lo) continue;
    if (window.hi < iv.lo) break;
    auto part = iv.intersection(window);
    if (part && (!part->degenerate() || stage.degenerate_allowed())) out.push_back(std::move(*part));
  }
  return out;
}

std::shared_ptr<const CantorStage> restrict_lineage(const std::shared_ptr<const CantorStage>& stage,
                                                    const ClosedInterval& window) {
  if (!stage) return nullptr;
  auto clipped = clip(*stage, window);
  if (clipped.empty()) return nullptr;
  return std::make_shared<const CantorStage>(std::move(clipped), stage->depth(),
                                             restrict_lineage(stage->parent(), window),
                                             stage->degenerate_allowed());
}

std::shared_ptr<const CantorStage> affine_lineage(const std::shared_ptr<const CantorStage>& stage,
                                                  const Rational& scale, const Rational& shift);

std::vector<ClosedInterval> affine_intervals(const CantorStage& stage, const Rational& scale,
                                             const Rational& shift) {
  std::vector<ClosedInterval> out;
  out.reserve(stage.size());
  for (const auto& iv : stage.intervals()) {
    Rational a = scale * iv.lo + shift;
    Rational b = scale * iv.hi + shift;
    if (scale.sign() < 0) std::swap(a, b);
    out.push_back({std::move(a), std::move(b)});
  }
  if (scale.sign() < 0) std::reverse(out.begin(), out.end());
  return out;
}

std::shared_ptr<const CantorStage> affine_lineage(const std::shared_ptr<const CantorStage>& stage,
                                                  const Rational& scale, const Rational& shift) {
  if (!stage) return nullptr;
  return std::make_shared<const CantorStage>(affine_intervals(*stage, scale, shift), stage->depth(),
                                             affine_lineage(stage->parent(), scale, shift),
                                             stage->degenerate_allowed());
}

}  // namespace

CantorStage restrict(const CantorStage& stage, const ClosedInterval& window) {
  auto clipped = clip(stage, window);
  if (clipped.empty()) {
    throw DomainError("window " + window.lo.str() + ".." + window.hi.str() + " misses the stage");
  }
  return CantorStage(std::move(clipped), stage.depth(), restrict_lineage(stage.parent(), window),
                     stage.degenerate_allowed());
}

CantorStage affine_image(const CantorStage& stage, const Rational& scale, const Rational& shift) {
  if (scale.is_zero()) throw DomainError("affine image with zero scale");
  return CantorStage(affine_intervals(stage, scale, shift), stage.depth(),
                     affine_lineage(stage.parent(), scale, shift), stage.degenerate_allowed());
}

}  // namespace thickset
