#include <doctest.h>

#include <random>

#include "support.hpp"
#include "thickset/errors.hpp"
#include "thickset/search.hpp"

using namespace thickset;
using namespace thickset::testing;

TEST_CASE("largest gap frame") {
  SUBCASE("middle-thirds stage 2: tie goes to the left bridge") {
    const auto fr = largest_gap_frame(middle_alpha(R(1, 3), 2));
    CHECK(fr.gap.lo == R(1, 3));
    CHECK(fr.gap.hi == R(2, 3));
    CHECK(fr.left_bridge.bridge.length() == R(1, 3));
    CHECK(fr.right_bridge.bridge.length() == R(1, 3));
    CHECK(fr.left_at_least_right);
  }
  SUBCASE("two intervals") {
    const auto fr = largest_gap_frame(stage_of({{0, 1}, {3, 4}}));
    CHECK(fr.gap.lo == 1);
    CHECK(fr.gap.hi == 3);
    CHECK(fr.left_bridge.bridge == ClosedInterval{0, 1});
    CHECK(fr.right_bridge.bridge == ClosedInterval{3, 4});
  }
  SUBCASE("equal largest gaps pick the leftmost") {
    const auto fr = largest_gap_frame(stage_of({{0, 1}, {2, 3}, {4, 6}}));
    CHECK(fr.gap.lo == 1);
  }
  SUBCASE("counterexample set: G2 = (-eps, 0)") {
    const auto fr = largest_gap_frame(counterexample_set(CounterexampleParams::make(1, R(1, 1000), R(9, 10))));
    CHECK(fr.gap.lo == R(-1, 1000));
    CHECK(fr.gap.hi == 0);
  }
  CHECK_THROWS_AS(largest_gap_frame(CantorStage::single(0, 1)), DomainError);
}

TEST_CASE("subset extraction") {
  const auto f = middle_alpha_family(R(1, 3));
  SUBCASE("delta 1/10") {
    const auto ext = subset_extract(f, R(1, 10));
    CHECK(ext.bridge.length() < R(1, 10));
    CHECK(ext.discovery_level == 3);
    CHECK(ext.bridge == ClosedInterval{R(2, 3), R(19, 27)});
    for (std::size_t d = 1; d <= 6; ++d) {
      if (auto t = thickness_if_defined(ext.family->stage(ext.discovery_level + d))) CHECK(*t >= 1);
    }
  }
  SUBCASE("delta = hull / 3^k") {
    for (int k = 1; k <= 5; ++k) {
      const Rational delta = pow(R(1, 3), static_cast<unsigned>(k));
      const auto ext = subset_extract(f, delta);
      CHECK(ext.bridge.length() < delta);
    }
  }
  SUBCASE("delta larger than the hull") {
    const auto ext = subset_extract(f, 5);
    CHECK(ext.bridge.length() < R(1, 3));
  }
  SUBCASE("not enough levels") {
    try {
      subset_extract(f, Rational::pow2(-60), 10);
      FAIL("expected InsufficientDepth");
    } catch (const InsufficientDepth& e) {
      CHECK(e.required_depth() > 10);
    }
  }
  CHECK_THROWS_AS(subset_extract(f, 0), DomainError);
}

TEST_CASE("property: extracted subsets keep the thickness") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    RandomThickSpec spec;
    spec.target_tau = std::vector<Rational>{1, R(3, 2), 2}[rng() % 3];
    spec.seed = rng();
    const auto fam = random_thick_family(spec);
    const Rational delta = Rational::pow2(-static_cast<long>(1 + rng() % 8));
    const auto ext = subset_extract(fam, delta);
    CHECK(ext.bridge.length() < delta);
    for (std::size_t level = ext.discovery_level; level <= ext.discovery_level + 4; ++level) {
      const auto sub = ext.family->stage(level);
      const auto full = fam->stage(level);
      if (auto t = thickness_if_defined(sub)) CHECK(*t >= thickness(full).value);
    }
  }
}

TEST_CASE("mean value bounds") {
  SUBCASE("linear g(t) = t") {
    const auto r = verify_mvt_bounds(1, 3, R(3, 2), R(3, 2), FunctionSpec::identity());
    CHECK(r.preconditions_hold());
    CHECK(r.conclusion_holds());
    CHECK(r.g_of_c == CertifiedValue::exact(R(3, 2)));
  }
  SUBCASE("g(t) = t/(2 tau) breaks the lower derivative bound") {
    const Rational tau(3, 2);
    const auto r = verify_mvt_bounds(1, 3, R(3, 2), tau, FunctionSpec({1 / (2 * tau)}));
    CHECK_FALSE(r.derivative_lower);
    CHECK_FALSE(r.a_below_gc);
    CHECK_FALSE(r.failures().empty());
  }
  SUBCASE("hypotheses hold yet g(c) reaches past b") {
    // b - a = c = 2 >= tau a; slope 9/5 < 1 + 1/tau = 21/11
    const auto r = verify_mvt_bounds(1, 3, 2, R(11, 10), FunctionSpec({R(9, 5)}));
    CHECK(r.preconditions_hold());
    CHECK(r.a_below_gc);
    CHECK_FALSE(r.gc_below_b);
    CHECK(r.g_of_c == CertifiedValue::exact(R(18, 5)));
  }
  SUBCASE("bad bridge ratios are reported, not thrown") {
    const auto r = verify_mvt_bounds(1, R(3, 2), 1, 2, FunctionSpec::identity());
    CHECK_FALSE(r.right_bridge_ratio);
    CHECK_FALSE(r.left_bridge_ratio);
  }
}

TEST_CASE("image families stay nested") {
  const auto base = middle_alpha_family(R(1, 5));
  const auto inv = MonotoneMap::inverse(FunctionSpec::parse("1,1/10"), {-2, 2}, Rational::pow2(-64));
  const ImageFamily img(base, inv);
  std::vector<FamilyNode> level = img.roots();
  for (int d = 0; d < 6; ++d) {
    std::vector<FamilyNode> next;
    for (const auto& n : level) {
      for (const auto& c : img.children(n)) {
        CHECK(n.interval.contains(c.interval));
        // the true image of the source endpoints lies inside
        CHECK(c.interval.lo <= inv.enclose(c.source->interval.lo).hi);
        CHECK(c.interval.hi >= inv.enclose(c.source->interval.hi).lo);
        next.push_back(c);
      }
    }
    level = std::move(next);
  }
  CHECK(thickness(img.stage(5)).value > R(3, 2));
}

TEST_CASE("3-AP finder") {
  SUBCASE("middle-thirds gives {1/3, 2/3, 1}") {
    const auto fam = middle_alpha_family(R(1, 3));
    const auto w = find_3ap(fam);
    CHECK(w.x == R(2, 3));
    CHECK(w.t.contains(R(1, 3)));
    for (const Rational& p : {w.x - R(1, 3), w.x, w.x + R(1, 3)}) CHECK(ternary_member(p, 20));
    CHECK(verify_witness(w, *fam).ok);
  }
  SUBCASE("middle-alpha 1/5") {
    const auto fam = middle_alpha_family(R(1, 5));
    const auto w = find_3ap(fam);
    CHECK(verify_witness(w, *fam).ok);
    CHECK(w.t.lo > 0);
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t d = 0; d + 1 < w.chains[k].size(); ++d) CHECK(w.chains[k][d].contains(w.chains[k][d + 1]));
    }
    // x is a gap endpoint
    bool endpoint = false;
    for (const auto& g : bounded_gaps(fam->stage(w.depth))) endpoint = endpoint || g.lo == w.x || g.hi == w.x;
    CHECK(endpoint);
  }
  SUBCASE("thin and trivial sets are rejected") {
    CHECK_THROWS_AS(find_3ap(middle_alpha_family(R(1, 2))), HypothesisError);
    CHECK_THROWS_AS(find_3ap(ExplicitFamily::from_lineage(CantorStage::single(0, 1))), HypothesisError);
  }
  SUBCASE("right bridge longer forces a reflection") {
    const auto fam = ExplicitFamily::from_lineage(random_thick({R(3, 2), 7, 4}));
    ThreeApOptions opts;
    opts.analysis_depth = 6;
    opts.min_depth = 5;
    opts.max_depth = 7;
    const auto w = find_3ap(fam, opts);
    CHECK(verify_witness(w, *fam).ok);
  }
}

TEST_CASE("property: random 3-AP witnesses replay") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    RandomThickSpec spec;
    spec.target_tau = std::vector<Rational>{1, R(3, 2), 2}[rng() % 3];
    spec.seed = rng();
    const auto fam = random_thick_family(spec);
    const auto w = find_3ap(fam);
    CHECK(verify_witness(w, *fam).ok);
    // for f = identity: x is the average of x - t and x + t
    const auto l = w.left_point();
    const auto r = w.right_point();
    CHECK(l.lo + r.lo <= 2 * w.x);
    CHECK(2 * w.x <= l.hi + r.hi);
  }
}

TEST_CASE("configuration finder") {
  const auto fam = middle_alpha_family(R(1, 5));
  SUBCASE("identity reduces to a 3-AP") {
    const auto w = find_config(fam, FunctionSpec::identity());
    CHECK(verify_witness(w, *fam).ok);
    CHECK(w.t.interval().intersects(w.fx.interval()));
  }
  SUBCASE("t + t^2/10") {
    const auto w = find_config(fam, FunctionSpec::parse("1,1/10"));
    CHECK(w.depth >= 10);
    CHECK(verify_witness(w, *fam).ok);
    const auto& d = *w.diagnostics;
    CHECK(*d.image_thickness > d.rho * d.tau);
    CHECK(d.mvt->conclusion_holds());
  }
  SUBCASE("linear slopes obey the weighted mean identity") {
    const Rational m(6, 5);
    const auto w = find_config(fam, FunctionSpec({m}));
    CHECK(verify_witness(w, *fam).ok);
    // x = m/(m+1) (x - t) + 1/(m+1) (x + m t), checked on the enclosures
    const auto l = w.left_point();
    const auto r = w.right_point();
    CHECK(m / (m + 1) * l.lo + r.lo / (m + 1) <= w.x);
    CHECK(w.x <= m / (m + 1) * l.hi + r.hi / (m + 1));
  }
  SUBCASE("window boundary") {
    CHECK_THROWS_AS(find_config(fam, FunctionSpec({R(2, 3)})), HypothesisError);
    CHECK_THROWS_AS(find_config(fam, FunctionSpec({R(3, 2)})), HypothesisError);
    CHECK_NOTHROW(find_config(fam, FunctionSpec({R(2, 3) + R(1, 100)})));
    CHECK_NOTHROW(find_config(fam, FunctionSpec({R(3, 2) - R(1, 100)})));
  }
  SUBCASE("t^2 is rejected") {
    CHECK_THROWS_AS(find_config(fam, FunctionSpec::parse("0,1")), HypothesisError);
  }
  SUBCASE("tau covers every level the frame uses") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const auto rt = random_thick_family({2, 0, seed});
      const auto w = find_config(rt, FunctionSpec::parse("1,1/5"));
      const auto& d = *w.diagnostics;
      CHECK(verify_witness(w, *rt).ok);
      CHECK(d.tau <= *family_thickness(*rt, d.analysis_level));
      CHECK(d.subset_thickness >= d.tau);
    }
  }
  SUBCASE("needs tau > 1") {
    CHECK_THROWS_AS(find_config(middle_alpha_family(R(1, 3)), FunctionSpec::identity()), HypothesisError);
  }
}

TEST_CASE("witness replay catches tampering") {
  const auto fam = middle_alpha_family(R(1, 5));
  auto w = find_config(fam, FunctionSpec::parse("1,1/10"));
  REQUIRE(verify_witness(w, *fam).ok);
  auto bad = w;
  bad.x += R(1, 1000);
  CHECK_FALSE(verify_witness(bad, *fam).ok);
  bad = w;
  bad.chains[2].pop_back();
  CHECK_FALSE(verify_witness(bad, *fam).ok);
  bad = w;
  bad.fx = {bad.fx.lo + 1, bad.fx.hi + 1};
  CHECK_FALSE(verify_witness(bad, *fam).ok);
}

TEST_CASE("counterexample verification") {
  SUBCASE("calibrated tau = 101/100 passes") {
    const auto p = counterexample_calibrate(R(101, 100), R(1, 1000), R(1, 1000000));
    const auto r = verify_counterexample(p);
    CHECK(r.all_passed());
    CHECK_NOTHROW(r.require_pass());
    CHECK(r.bridge_table.size() == 8);
  }
  SUBCASE("eps = 1/2 fails check ii") {
    const auto r = verify_counterexample(CounterexampleParams::make(R(101, 100), R(1, 2), R(9, 10)));
    CHECK_FALSE(r.all_passed());
    const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.name == "ii"; });
    REQUIRE(it != r.checks.end());
    CHECK_FALSE(it->passed);
    CHECK_THROWS_AS(r.require_pass(), VerificationFailure);
  }
  SUBCASE("tampered G3 catches the squared reflection of I2") {
    const auto p = counterexample_calibrate(R(101, 100), R(1, 1000), R(1, 1000000));
    auto parts = counterexample_parts(p);
    // shift I4 left so G3 ends before the squares of -I2 do
    const Rational i2_sq = parts.intervals[1].hi * parts.intervals[1].hi;
    const Rational shift = parts.intervals[3].lo - i2_sq / 2;
    parts.intervals[3] = {parts.intervals[3].lo - shift, parts.intervals[3].hi - shift};
    const auto r = verify_counterexample_parts(p, parts);
    const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.name == "i.b"; });
    REQUIRE(it != r.checks.end());
    CHECK_FALSE(it->passed);
  }
}
