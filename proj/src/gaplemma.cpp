#include "thickset/gaplemma.hpp"

#include <algorithm>

#include "thickset/errors.hpp"

namespace thickset {

std::optional<Gap> enclosing_gap(const CantorStage& inner, const CantorStage& outer) {
  const ClosedInterval hull = inner.hull();
  for (const auto& gap : gaps(outer)) {
    if (gap.contains(hull)) return gap;
  }
  return std::nullopt;
}

GapLemmaVerdict check_hypotheses(const CantorStage& k1, const CantorStage& k2) {
  GapLemmaVerdict v;
  v.tau1 = thickness_if_defined(k1);
  v.tau2 = thickness_if_defined(k2);
  if (!v.tau1) v.reasons.emplace_back("K1 has no bounded gap; thickness undefined");
  if (!v.tau2) v.reasons.emplace_back("K2 has no bounded gap; thickness undefined");
  if (v.tau1 && v.tau2) {
    const Rational product = *v.tau1 * *v.tau2;
    v.product_ok = product >= 1;
    if (!v.product_ok) v.reasons.push_back("tau(K1) tau(K2) = " + product.str() + " < 1");
  }
  v.k1_in_gap_of_k2 = enclosing_gap(k1, k2);
  v.k2_in_gap_of_k1 = enclosing_gap(k2, k1);
  if (v.k1_in_gap_of_k2) {
    v.reasons.push_back(std::string("K1 lies in a ") + to_string(v.k1_in_gap_of_k2->kind) + " gap of K2");
  }
  if (v.k2_in_gap_of_k1) {
    v.reasons.push_back(std::string("K2 lies in a ") + to_string(v.k2_in_gap_of_k1->kind) + " gap of K1");
  }
  v.applies = v.product_ok && !v.k1_in_gap_of_k2 && !v.k2_in_gap_of_k1;
  return v;
}

namespace {

std::vector<ClosedInterval> merge_scan(const std::vector<ClosedInterval>& a, const std::vector<ClosedInterval>& b) {
  std::vector<ClosedInterval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (auto common = a[i].intersection(b[j])) out.push_back(std::move(*common));
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

}  // namespace

std::optional<IntersectionWitness> intersect(const CantorStage& k1, const CantorStage& k2) {
  auto common = merge_scan(k1.intervals(), k2.intervals());
  if (common.empty()) return std::nullopt;
  const ClosedInterval first = common.front();
  CantorStage stage(std::move(common), std::max(k1.depth(), k2.depth()), nullptr, true);
  return IntersectionWitness{std::move(stage), midpoint(first.lo, first.hi), {first}, {std::max(k1.depth(), k2.depth())}};
}

PersistenceResult persistent_intersect(const StageFamily& k1_family, const StageFamily& k2_family, std::size_t depth) {
  const std::size_t first = depth == 0 ? 0 : 1;
  const auto s1 = k1_family.stages(depth);
  const auto s2 = k2_family.stages(depth);

  std::vector<CantorStage> common;
  for (std::size_t level = first; level <= depth; ++level) {
    auto c = merge_scan(s1[level].intervals(), s2[level].intervals());
    if (c.empty()) return {std::nullopt, level};
    common.emplace_back(std::move(c), level, nullptr, true);
  }

  // Walk up from one deepest common interval; refinement puts each common
  // interval inside exactly one common interval of the level above.
  std::vector<ClosedInterval> chain{common.back().intervals().front()};
  for (std::size_t k = common.size() - 1; k-- > 0;) {
    const auto idx = common[k].locate(chain.back());
    if (!idx) {
      throw InternalContradiction("common interval at level " + std::to_string(first + k + 1) +
                                  " has no parent among the common intervals above it");
    }
    chain.push_back(common[k].intervals()[*idx]);
  }
  std::reverse(chain.begin(), chain.end());

  std::vector<std::size_t> levels;
  for (std::size_t level = first; level <= depth; ++level) levels.push_back(level);
  const ClosedInterval deepest = chain.back();
  return {IntersectionWitness{common.back(), midpoint(deepest.lo, deepest.hi), std::move(chain), std::move(levels)},
          std::nullopt};
}

}  // namespace thickset
