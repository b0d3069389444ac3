#include "thickset/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "thickset/errors.hpp"

namespace thickset {

LargestGapFrame largest_gap_frame(const CantorStage& stage) {
  const auto bg = bounded_gaps(stage);
  if (bg.empty()) throw DomainError("largest gap undefined for a single interval");
  std::size_t best = 0;
  for (std::size_t i = 1; i < bg.size(); ++i) {
    if (bg[i].length() > bg[best].length()) best = i;
  }
  auto left = bridge_at(stage, bg[best].lo, Side::left);
  auto right = bridge_at(stage, bg[best].hi, Side::right);
  const bool orientation = left.bridge.length() >= right.bridge.length();
  return {bg[best], std::move(left), std::move(right), orientation};
}

std::optional<Rational> family_thickness(const StageFamily& family, std::size_t up_to) {
  if (auto cap = family.max_level()) up_to = std::min(up_to, *cap);
  std::optional<Rational> lowest;
  for (const auto& s : family.stage(up_to).lineage()) {
    if (s->depth() == 0) continue;
    if (auto th = thickness_if_defined(*s); th && (!lowest || *th < *lowest)) lowest = th;
  }
  return lowest;
}

// --- subset extraction ---------------------------------------------------------

namespace {

std::size_t depth_hint(const Rational& first_len, const Rational& prev_len, const Rational& limit, std::size_t level) {
  if (prev_len.is_zero() || first_len >= prev_len || first_len.is_zero()) return level + 1;
  const double ratio = (first_len / prev_len).to_double();
  const double need = (limit / first_len).to_double();
  const double extra = std::ceil(std::log(need) / std::log(ratio));
  return level + static_cast<std::size_t>(std::max(1.0, extra));
}

}  // namespace

SubsetExtraction subset_extract(const FamilyPtr& family, const Rational& delta, std::size_t max_level) {
  if (delta <= 0) throw DomainError("subset extraction needs delta > 0");
  if (auto cap = family->max_level()) max_level = std::min(max_level, *cap);

  // first level with a bounded gap; its largest gap anchors the search
  std::size_t level = 0;
  std::vector<FamilyNode> local = family->roots();
  while (local.size() < 2) {
    if (level >= max_level) {
      throw InsufficientDepth("no bounded gap up to level " + std::to_string(max_level), max_level + 1);
    }
    std::vector<FamilyNode> next;
    for (const auto& n : local) {
      auto kids = family->children(n);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    local = std::move(next);
    ++level;
  }
  Gap anchor{local[0].interval.hi, local[1].interval.lo, GapKind::bounded};
  for (std::size_t i = 1; i + 1 < local.size(); ++i) {
    Gap g{local[i].interval.hi, local[i + 1].interval.lo, GapKind::bounded};
    if (g.length() > anchor.length()) anchor = g;
  }
  const Rational u = anchor.hi;
  const Rational limit = min(anchor.length(), delta);
  const Rational reach = u + limit;

  auto trim = [&](std::vector<FamilyNode> nodes) {
    std::vector<FamilyNode> kept;
    for (auto& n : nodes) {
      if (n.interval.lo < u) continue;
      const bool beyond = n.interval.lo >= reach;
      kept.push_back(std::move(n));
      if (beyond) break;  // one node past the reach closes the last gap
    }
    return kept;
  };
  local = trim(std::move(local));

  Rational prev_first_len = 0;
  while (true) {
    if (local.empty() || local.front().interval.lo != u) {
      throw DomainError("gap endpoint " + u.str() + " does not persist under refinement");
    }
    for (std::size_t k = 0; k + 1 < local.size(); ++k) {
      const Rational& w = local[k].interval.hi;
      if (!(w - u < limit)) break;
      const Gap cut{w, local[k + 1].interval.lo, GapKind::bounded};
      if (!(cut.length() < anchor.length())) continue;
      // left bridge of the cut gap; the anchor gap is longer, so the scan stops
      // at u at the latest
      std::size_t j = k;
      while (j > 0 && local[j].interval.lo - local[j - 1].interval.hi <= cut.length()) --j;
      ClosedInterval bridge{local[j].interval.lo, w};
      auto restricted = std::make_shared<RestrictedFamily>(family, bridge);
      return {std::move(restricted), std::move(bridge), anchor, cut, level};
    }
    const Rational first_len = local.front().interval.length();
    if (level >= max_level) {
      const std::size_t hint = depth_hint(first_len, prev_first_len, limit, level);
      throw InsufficientDepth("no gap within " + limit.str() + " of " + u.str() + " up to level " +
                                  std::to_string(level) + "; retry with depth >= " + std::to_string(hint),
                              hint);
    }
    prev_first_len = first_len;
    std::vector<FamilyNode> next;
    for (const auto& n : local) {
      auto kids = family->children(n);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    local = trim(std::move(next));
    ++level;
  }
}

// --- certified images -------------------------------------------------------------

ImageFamily::ImageFamily(FamilyPtr base, MonotoneMap map) : base_(std::move(base)), map_(std::move(map)) {}

std::vector<FamilyNode> ImageFamily::roots() const {
  std::vector<FamilyNode> out;
  for (const auto& n : base_->roots()) {
    ClosedInterval image{map_.enclose(n.interval.lo).lo, map_.enclose(n.interval.hi).hi};
    out.push_back(derive_node(n, std::move(image)));
  }
  return out;
}

std::vector<FamilyNode> ImageFamily::children(const FamilyNode& node) const {
  const ClosedInterval& source = node.source->interval;
  const ClosedInterval& image = node.interval;
  std::vector<FamilyNode> out;
  for (const auto& child : base_->children(*node.source)) {
    Rational lo = child.interval.lo == source.lo ? image.lo : map_.enclose(child.interval.lo, image).lo;
    Rational hi = child.interval.hi == source.hi ? image.hi : map_.enclose(child.interval.hi, image).hi;
    lo = max(lo, image.lo);
    hi = min(hi, image.hi);
    out.push_back(derive_node(child, {std::move(lo), std::move(hi)}));
  }
  return out;
}

// --- nested chain search ------------------------------------------------------------

namespace {

struct Candidate {
  FamilyNode a;
  FamilyNode b;
  ClosedInterval common;
};

std::vector<Candidate> overlapping_pairs(const std::vector<FamilyNode>& as, const std::vector<FamilyNode>& bs) {
  std::vector<Candidate> out;
  for (const auto& a : as) {
    for (const auto& b : bs) {
      if (b.interval.lo > a.interval.hi) break;
      if (auto common = a.interval.intersection(b.interval)) out.push_back({a, b, std::move(*common)});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& x, const Candidate& y) { return x.common.length() > y.common.length(); });
  return out;
}

}  // namespace

std::vector<ChainStep> nested_chain_search(const StageFamily& fa, const StageFamily& fb,
                                           const ChainSearchOptions& options) {
  std::size_t max_depth = options.max_depth;
  std::size_t min_depth = options.min_depth;
  for (const auto cap : {fa.max_level(), fb.max_level()}) {
    if (cap) max_depth = std::min(max_depth, *cap);
  }
  min_depth = std::min(min_depth, max_depth);

  std::vector<ChainStep> path;
  std::size_t visited = 0;
  bool hit_floor = false;

  std::function<bool(Candidate&&)> dfs = [&](Candidate&& cand) -> bool {
    if (++visited > options.node_budget) {
      throw PrecisionError("nested chain search exceeded its budget of " + std::to_string(options.node_budget) +
                           " node pairs");
    }
    const std::size_t level = cand.a.level;
    const bool wide = options.target_width && cand.common.length() > *options.target_width;
    path.push_back({std::move(cand.a), std::move(cand.b), std::move(cand.common)});
    if (level >= min_depth && !wide) return true;
    if (level >= max_depth) {
      hit_floor = true;
      path.pop_back();
      return false;
    }
    auto next = overlapping_pairs(fa.children(path.back().a), fb.children(path.back().b));
    for (auto& c : next) {
      if (dfs(std::move(c))) return true;
    }
    path.pop_back();
    return false;
  };

  for (auto& c : overlapping_pairs(fa.roots(), fb.roots())) {
    if (dfs(std::move(c))) return path;
  }
  if (hit_floor) {
    throw PrecisionError("common intervals still wider than " +
                         (options.target_width ? options.target_width->str() : std::string("target")) +
                         " at level " + std::to_string(max_depth) + "; retry with a larger max depth");
  }
  return {};
}

// --- mean value bounds -------------------------------------------------------------

std::vector<std::string> MvtReport::failures() const {
  std::vector<std::string> out;
  if (!positive_inputs) out.emplace_back("a, b, c > 0");
  if (!left_bridge_at_least_right) out.emplace_back("b - a >= c");
  if (!right_bridge_ratio) out.emplace_back("tau a <= c");
  if (!left_bridge_ratio) out.emplace_back("tau a <= b - a");
  if (!derivative_lower) out.emplace_back("1/tau < g' on (0, c)");
  if (!derivative_upper) out.emplace_back("g' < 1 + 1/tau on (0, c)");
  if (!g_zero) out.emplace_back("g(0) = 0");
  if (!a_below_gc) out.emplace_back("a < g(c)");
  if (!gc_below_b) out.emplace_back("g(c) < b");
  return out;
}

MvtReport verify_mvt_bounds(const Rational& a, const Rational& b, const Rational& c, const Rational& tau,
                            const MonotoneMap& g) {
  if (tau <= 0) throw DomainError("tau must be positive");
  MvtReport r{a, b, c, tau, CertifiedValue::exact(0)};
  r.positive_inputs = a > 0 && b > 0 && c > 0;
  r.left_bridge_at_least_right = b - a >= c;
  r.right_bridge_ratio = tau * a <= c;
  r.left_bridge_ratio = tau * a <= b - a;
  try {
    const ClosedInterval d = g.derivative_bounds({min(Rational(0), c), max(Rational(0), c)});
    r.derivative_lower = d.lo > tau.reciprocal();
    r.derivative_upper = d.hi < 1 + tau.reciprocal();
  } catch (const Error&) {
    r.derivative_lower = r.derivative_upper = false;
  }
  try {
    r.g_zero = g.enclose(0).contains(0);
    r.g_of_c = g.enclose(c);
    r.a_below_gc = a < r.g_of_c.lo;
    r.gc_below_b = r.g_of_c.hi < b;
  } catch (const Error&) {
    r.a_below_gc = r.gc_below_b = false;
  }
  return r;
}

MvtReport verify_mvt_bounds(const Rational& a, const Rational& b, const Rational& c, const Rational& tau,
                            const FunctionSpec& g) {
  return verify_mvt_bounds(a, b, c, tau, MonotoneMap::forward(g));
}

// --- witnesses -------------------------------------------------------------------------

namespace {

std::vector<ClosedInterval> descend_to(const StageFamily& family, const ClosedInterval& target, std::size_t depth) {
  std::vector<ClosedInterval> chain;
  std::vector<FamilyNode> nodes = family.roots();
  for (std::size_t level = 0; level <= depth; ++level) {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const FamilyNode& n) { return n.interval.contains(target); });
    if (it == nodes.end()) return chain;
    chain.push_back(it->interval);
    if (level < depth) nodes = family.children(*it);
  }
  return chain;
}

std::vector<ClosedInterval> origin_chain(const std::vector<ChainStep>& steps, bool use_a) {
  std::vector<ClosedInterval> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back((use_a ? s.a : s.b).origin().interval);
  return out;
}

ConfigWitness assemble(const FamilyPtr& family, const FunctionSpec& f, const std::vector<ChainStep>& steps,
                       bool reflected, const Rational& x, CertifiedValue t, CertifiedValue fx) {
  ConfigWitness w;
  w.f = f;
  w.x = x;
  w.t = std::move(t);
  w.fx = std::move(fx);
  w.depth = steps.back().a.level;
  // non-reflected: the reflected left piece carries x - t; reflected: it
  // carries x + f(t)
  w.chains[reflected ? 2 : 0] = origin_chain(steps, true);
  w.chains[reflected ? 0 : 2] = origin_chain(steps, false);
  w.chains[1] = descend_to(*family, {x, x}, w.depth);
  if (w.chains[1].size() != w.depth + 1) {
    throw InternalContradiction("gap endpoint " + x.str() + " is not in every stage");
  }
  return w;
}

void require_valid(const ConfigWitness& w, const StageFamily& family) {
  const auto check = verify_witness(w, family);
  if (!check.ok) {
    std::string msg = "witness failed replay:";
    for (const auto& p : check.problems) msg += " " + p + ";";
    throw InternalContradiction(msg);
  }
}

struct Frame {
  bool reflected;
  Rational scale;
  Rational shift;
  Rational a, b, c;
};

Frame frame_from(const LargestGapFrame& lg) {
  Frame fr;
  fr.reflected = !lg.left_at_least_right;
  fr.scale = fr.reflected ? -1 : 1;
  fr.shift = fr.reflected ? lg.gap.lo : -lg.gap.hi;
  fr.a = lg.gap.length();
  const Rational& near = fr.reflected ? lg.right_bridge.bridge.length() : lg.left_bridge.bridge.length();
  const Rational& far = fr.reflected ? lg.left_bridge.bridge.length() : lg.right_bridge.bridge.length();
  fr.b = fr.a + near;
  fr.c = far;
  return fr;
}

}  // namespace

WitnessCheck verify_witness(const ConfigWitness& w, const StageFamily& family) {
  WitnessCheck out;
  auto problem = [&](std::string p) {
    out.ok = false;
    out.problems.push_back(std::move(p));
  };
  if (!(w.t.lo > 0)) problem("t.lo = " + w.t.lo.str() + " is not positive");
  if (w.t.hi < w.t.lo || w.fx.hi < w.fx.lo) problem("empty enclosure");
  const ClosedInterval f_of_t = w.f.polynomial().enclose(w.t.interval());
  if (!f_of_t.intersects(w.fx.interval())) problem("f(t) enclosure misses the fx enclosure");

  const std::array<CertifiedValue, 3> points{w.left_point(), CertifiedValue::exact(w.x), w.right_point()};
  static constexpr std::array<const char*, 3> names{"x - t", "x", "x + f(t)"};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& chain = w.chains[k];
    if (chain.size() != w.depth + 1) {
      problem(std::string(names[k]) + " chain has " + std::to_string(chain.size()) + " levels, expected " +
              std::to_string(w.depth + 1));
      continue;
    }
    std::vector<FamilyNode> nodes = family.roots();
    for (std::size_t level = 0; level <= w.depth; ++level) {
      auto it = std::find_if(nodes.begin(), nodes.end(), [&](const FamilyNode& n) { return n.interval == chain[level]; });
      if (it == nodes.end()) {
        problem(std::string(names[k]) + " chain entry at level " + std::to_string(level) + " is not a stage interval");
        break;
      }
      if (level < w.depth) nodes = family.children(*it);
    }
    if (!chain.back().contains(points[k].interval())) {
      problem(std::string(names[k]) + " enclosure is not inside the deepest chain interval");
    }
  }
  return out;
}

// --- 3-APs -----------------------------------------------------------------------------

ConfigWitness find_3ap(const FamilyPtr& family, const ThreeApOptions& options) {
  std::size_t analysis = options.analysis_depth;
  if (auto cap = family->max_level()) analysis = std::min(analysis, *cap);
  const auto tau = family_thickness(*family, analysis);
  if (!tau) throw HypothesisError("thickness tau >= 1 required, but the set has no bounded gap");
  if (*tau < 1) throw HypothesisError("thickness tau >= 1 required, got tau = " + tau->str());

  const CantorStage stage = family->stage(analysis);
  const Frame fr = frame_from(largest_gap_frame(stage));
  if (!(fr.a <= fr.c && fr.c <= fr.b)) {
    throw InternalContradiction("a <= c <= b fails with a = " + fr.a.str() + ", c = " + fr.c.str() +
                                ", b = " + fr.b.str());
  }

  const auto framed = std::make_shared<AffineFamily>(family, fr.scale, fr.shift);
  const auto k1 = std::make_shared<RestrictedFamily>(framed, ClosedInterval{-fr.b, -fr.a});
  const auto neg_k1 = std::make_shared<AffineFamily>(k1, -1, 0);
  const auto k2 = std::make_shared<RestrictedFamily>(framed, ClosedInterval{0, fr.c});

  if (!persistent_intersect(*neg_k1, *k2, analysis).ok()) {
    throw InternalContradiction("-K1 and K2 stop intersecting by level " + std::to_string(analysis));
  }
  const auto steps = nested_chain_search(
      *neg_k1, *k2, {options.min_depth, options.max_depth, options.target_width, options.node_budget});
  if (steps.empty()) throw InternalContradiction("no nested chain of common intervals for -K1 and K2");

  const ClosedInterval& common = steps.back().common;
  const CertifiedValue t{common.lo, common.hi};
  const Rational x = fr.reflected ? fr.shift : -fr.shift;
  ConfigWitness w = assemble(family, FunctionSpec::identity(), steps, fr.reflected, x, t, t);
  require_valid(w, *family);
  return w;
}

// --- nonlinear configurations ------------------------------------------------------------

namespace {

struct DerivativeCheck {
  bool window = false;   // 1/tau < g' < 1 + 1/tau for g = f and f^{-1}
  bool variation = false;  // |g'(x) - g'(0)| < eps/(2 tau)
  bool ratio = false;      // derivative ratio bound < eps
};

DerivativeCheck check_derivatives(const FunctionSpec& f, const Rational& tau, const Rational& eps,
                                  const Rational& delta) {
  DerivativeCheck out;
  const ClosedInterval box{-tau * delta, tau * delta};
  const Polynomial d = derivative(f);
  if (d.is_zero() || SturmSequence(d).count_closed(box.lo, box.hi) > 0) return out;
  const ClosedInterval range = derivative_range(f, box);
  if (range.lo.sign() <= 0) return out;
  const Rational inv_tau = tau.reciprocal();
  const Rational c1 = f.slope_at_zero();
  const Rational m = range.lo;
  const Rational M = range.hi;
  out.window = inv_tau < m && M < 1 + inv_tau && inv_tau < M.reciprocal() && m.reciprocal() < 1 + inv_tau;
  const Rational bound = eps / (2 * tau);
  out.variation = max(M - c1, c1 - m) < bound &&
                  max(m.reciprocal() - c1.reciprocal(), c1.reciprocal() - M.reciprocal()) < bound;
  out.ratio = derivative_ratio_bound(f, box) < eps;
  return out;
}

}  // namespace

ConfigWitness find_config(const FamilyPtr& family, const FunctionSpec& f, const SearchConfig& cfg) {
  std::size_t analysis = cfg.analysis_depth;
  if (auto cap = family->max_level()) analysis = std::min(analysis, *cap);
  const auto tau_opt = family_thickness(*family, analysis);
  if (!tau_opt) throw HypothesisError("thickness tau > 1 required, but the set has no bounded gap");
  Rational tau = *tau_opt;
  Rational rho;
  Rational eps;
  // validates the hypotheses for the current tau; reruns whenever a deeper
  // level lowers it
  auto settle = [&] {
    if (tau <= 1) throw HypothesisError("thickness tau > 1 required, got tau = " + tau.str());
    const Rational c1 = f.slope_at_zero();
    const DerivativeWindow window = derivative_window(tau);
    if (cfg.enforce_window && !window.contains(c1)) {
      throw HypothesisError("f'(0) = " + c1.str() + " must satisfy max(tau/(tau+1), 1/tau) = " + window.lower.str() +
                            " < f'(0) < " + window.upper.str() + " = min(tau, 1 + 1/tau) for tau = " + tau.str());
    }
    if (c1 <= 0) throw HypothesisError("f'(0) = " + c1.str() + " must be positive");
    rho = cfg.rho.value_or((1 + tau.reciprocal()) / 2);
    if (rho <= 0 || rho >= 1 || rho * tau < 1) {
      throw DomainError("rho must satisfy 0 < rho < 1 and rho tau >= 1, got rho = " + rho.str());
    }
    eps = cfg.epsilon.value_or((rho.reciprocal() - 1) / 2);
    if (eps <= 0) throw DomainError("epsilon must be positive");
  };
  settle();

  Rational delta = cfg.delta.value_or(family->stage(0).hull().length());
  if (delta <= 0) throw DomainError("delta must be positive");

  SearchDiagnostics diag;

  for (std::size_t step = 0; step <= cfg.max_shrink; ++step, delta /= 2) {
    const DerivativeCheck dc = check_derivatives(f, tau, eps, delta);
    if (!(dc.variation && dc.ratio && (dc.window || !cfg.enforce_window))) continue;
    diag.shrink_steps = step;
    diag.delta = delta;
    ++diag.attempts;

    const SubsetExtraction ext = subset_extract(family, delta, cfg.max_depth);
    std::size_t level = ext.discovery_level + cfg.analysis_extra;
    if (auto cap = family->max_level()) level = std::min(level, *cap);
    level = std::min(level, cfg.max_depth);
    // tau must bound every level the frame looks at, not just the first few
    if (const auto deeper = family_thickness(*family, level); deeper && *deeper < tau) {
      tau = *deeper;
      settle();
      delta *= 2;  // retry this delta against the lowered tau
      --step;
      continue;
    }
    const CantorStage subset = ext.family->stage(level);
    const auto subset_tau = thickness_if_defined(subset);
    if (!subset_tau) throw PrecisionError("subset has no bounded gap at level " + std::to_string(level));
    if (*subset_tau < tau) {
      throw InternalContradiction("bridge subset thickness " + subset_tau->str() + " fell below tau = " + tau.str());
    }

    const Frame fr = frame_from(largest_gap_frame(subset));
    const ClosedInterval bracket{-tau * delta, tau * delta};
    const MonotoneMap g = fr.reflected ? MonotoneMap::forward(f) : MonotoneMap::inverse(f, bracket, cfg.inverse_precision);
    const MvtReport mvt = verify_mvt_bounds(fr.a, fr.b, fr.c, tau, g);
    if (!(mvt.preconditions_hold() || !cfg.enforce_window) || !mvt.conclusion_holds()) {
      std::string msg = "mean value check 0 < a < g(c) < b failed:";
      for (const auto& s : mvt.failures()) msg += " " + s + ";";
      throw InternalContradiction(msg);
    }

    const auto framed = std::make_shared<AffineFamily>(ext.family, fr.scale, fr.shift);
    const auto k1 = std::make_shared<RestrictedFamily>(framed, ClosedInterval{-fr.b, -fr.a});
    const auto neg_k1 = std::make_shared<AffineFamily>(k1, -1, 0);
    const auto k2 = std::make_shared<RestrictedFamily>(framed, ClosedInterval{0, fr.c});
    const auto image = std::make_shared<ImageFamily>(k2, g);

    CantorStage neg_k1_stage = neg_k1->stage(level);
    std::optional<CantorStage> image_stage;
    try {
      image_stage = image->stage(level);
    } catch (const DomainError&) {
      throw PrecisionError("certified image intervals overlap at level " + std::to_string(level) +
                           "; retry with a finer inverse precision");
    }
    const auto image_tau = thickness_if_defined(*image_stage);
    if (!image_tau || *image_tau <= rho * tau) continue;  // image not yet thick enough; shrink delta

    const GapLemmaVerdict verdict = check_hypotheses(neg_k1_stage, *image_stage);
    if (!verdict.applies) {
      std::string msg = "gap lemma hypotheses fail for -K1 and g(K2):";
      for (const auto& s : verdict.reasons) msg += " " + s + ";";
      throw InternalContradiction(msg);
    }
    if (!persistent_intersect(*neg_k1, *image, level).ok()) {
      throw InternalContradiction("-K1 and g(K2) stop intersecting by level " + std::to_string(level));
    }

    const auto steps = nested_chain_search(*neg_k1, *image,
                                           {cfg.min_depth, cfg.max_depth, cfg.target_width, cfg.node_budget});
    if (steps.empty()) throw InternalContradiction("no nested chain of common intervals for -K1 and g(K2)");

    const ClosedInterval& common = steps.back().common;
    const ClosedInterval& k2_piece = steps.back().b.source->interval;
    CertifiedValue t;
    CertifiedValue fx;
    if (!fr.reflected) {
      // common encloses t; f(t) lies in the K2 interval it came from
      t = {common.lo, common.hi};
      const auto fx_iv = ClosedInterval{eval(f, common.lo), eval(f, common.hi)}.intersection(k2_piece);
      if (!fx_iv) throw PrecisionError("f(t) enclosure misses its K2 interval; retry with a finer inverse precision");
      fx = {fx_iv->lo, fx_iv->hi};
    } else {
      // common encloses s = f(t); t = f^{-1}(s) lies in the K2 interval
      fx = {common.lo, common.hi};
      const MonotoneMap inv = MonotoneMap::inverse(f, bracket, cfg.inverse_precision);
      const auto t_iv = ClosedInterval{inv.enclose(common.lo).lo, inv.enclose(common.hi).hi}.intersection(k2_piece);
      if (!t_iv) throw PrecisionError("t enclosure misses its K2 interval; retry with a finer inverse precision");
      t = {t_iv->lo, t_iv->hi};
    }
    const Rational x = fr.reflected ? fr.shift : -fr.shift;
    ConfigWitness w = assemble(family, f, steps, fr.reflected, x, t, fx);
    require_valid(w, *family);

    diag.discovery_level = ext.discovery_level;
    diag.analysis_level = level;
    diag.subset_bridge = ext.bridge;
    diag.reflected = fr.reflected;
    diag.a = fr.a;
    diag.b = fr.b;
    diag.c = fr.c;
    diag.subset_thickness = *subset_tau;
    diag.k1_thickness = *verdict.tau1;
    diag.image_thickness = image_tau;
    diag.gap_lemma_applies = verdict.applies;
    diag.mvt = mvt;
    diag.cross_check_level = level;
    diag.tau = tau;
    diag.rho = rho;
    diag.epsilon = eps;
    w.diagnostics = std::move(diag);
    return w;
  }
  if (diag.attempts == 0) {
    throw HypothesisError("no delta makes f' satisfy 1/tau < f' < 1 + 1/tau with the required flatness near 0");
  }
  throw PrecisionError("image thickness stayed at or below rho tau = " + (rho * tau).str() + " after " +
                       std::to_string(cfg.max_shrink) + " halvings of delta");
}

// --- counterexample verification ----------------------------------------------------------

bool AvoidanceReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AvoidanceCheck& c) { return c.passed; });
}

void AvoidanceReport::require_pass() const {
  for (const auto& c : checks) {
    if (!c.passed) throw VerificationFailure("check " + c.name + " failed: " + c.inequality);
  }
}

AvoidanceReport verify_counterexample(const CounterexampleParams& params, const Rational& tol) {
  std::optional<CounterexampleParts> parts;
  std::string construction_error;
  try {
    parts = counterexample_parts(params);
  } catch (const ConstructionError& e) {
    construction_error = e.what();
  }
  if (parts) return verify_counterexample_parts(params, *parts, tol);

  AvoidanceReport r{params, std::nullopt, std::nullopt, {}, {}};
  r.checks.push_back({"construction", "I1 < I2 < I3 < I4 < I5, all nonempty: " + construction_error, false});
  const Rational reach = (1 + params.tau) * params.eps;
  r.checks.push_back({"ii", "sup of t^2 over K = " + (reach * reach).str() + " < eps = " + params.eps.str(),
                      reach * reach < params.eps});
  return r;
}

AvoidanceReport verify_counterexample_parts(const CounterexampleParams& params, const CounterexampleParts& parts,
                                            const Rational& tol) {
  AvoidanceReport r{params, parts, std::nullopt, {}, {}};
  const auto& I = parts.intervals;
  std::optional<CantorStage> stage;
  try {
    stage = parts.stage();
    r.checks.push_back({"construction", "I1 < I2 < I3 < I4 < I5, all nonempty", true});
  } catch (const DomainError& e) {
    r.checks.push_back({"construction", std::string("I1 < I2 < I3 < I4 < I5, all nonempty: ") + e.what(), false});
  }
  const auto G = parts.gaps();

  if (stage) {
    const auto lg = largest_gap_frame(*stage);
    r.checks.push_back({"largest-gap", "largest gap is G2 = (-eps, 0)",
                        lg.gap.lo == -params.eps && lg.gap.hi == 0 && lg.gap == G[1]});
  }

  // t -> t^2 is increasing on t > 0, so the image of [p, q] is [p^2, q^2]
  const Rational i1_lo_sq = I[0].hi * I[0].hi;  // -I1 = [-I1.hi, -I1.lo]
  const Rational i1_hi_sq = I[0].lo * I[0].lo;
  r.checks.push_back({"i.a",
                      "t in -I1 implies t^2 in G4: " + G[3].lo.str() + " < " + i1_lo_sq.str() + " and " +
                          i1_hi_sq.str() + " < " + G[3].hi.str(),
                      I[0].hi < 0 && G[3].lo < i1_lo_sq && i1_hi_sq < G[3].hi});
  const Rational i2_lo_sq = I[1].hi * I[1].hi;
  const Rational i2_hi_sq = I[1].lo * I[1].lo;
  r.checks.push_back({"i.b",
                      "t in -I2 implies t^2 in G3: " + G[2].lo.str() + " < " + i2_lo_sq.str() + " and " +
                          i2_hi_sq.str() + " < " + G[2].hi.str(),
                      I[1].hi < 0 && G[2].lo < i2_lo_sq && i2_hi_sq < G[2].hi});

  const Rational reach = max(I[0].lo.abs(), I[4].hi.abs());
  r.checks.push_back({"ii", "sup of t^2 over K = " + (reach * reach).str() + " < eps = " + params.eps.str(),
                      reach * reach < params.eps});

  if (stage) {
    const Rational th = thickness(*stage).value;
    r.thickness = th;
    r.checks.push_back({"iii", "|tau(K) - tau| = " + (th - params.tau).abs().str() + " <= " + tol.str(),
                        (th - params.tau).abs() <= tol});
    r.bridge_table = all_bridges(*stage);
  } else {
    r.checks.push_back({"iii", "thickness of K within tolerance (set invalid)", false});
  }
  return r;
}

}  // namespace thickset
