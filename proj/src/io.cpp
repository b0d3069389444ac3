#include "thickset/io.hpp"

#include <fstream>
#include <sstream>

#include "thickset/errors.hpp"

namespace thickset::io {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t size_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    schema_error(where, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::vector<ClosedInterval> intervals_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of intervals");
  std::vector<ClosedInterval> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(interval_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json intervals_to_json(const std::vector<ClosedInterval>& ivs) {
  Json arr = Json::array();
  for (const auto& iv : ivs) arr.push_back(to_json(iv));
  return arr;
}

CantorStage build_stage(std::vector<ClosedInterval> ivs, std::size_t depth, std::shared_ptr<const CantorStage> parent,
                        const std::string& where) {
  try {
    return CantorStage(std::move(ivs), depth, std::move(parent));
  } catch (const DomainError& e) {
    schema_error(where, e.what());
  }
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << text;
  if (!out) throw DomainError("write failed for " + path.string());
}

Json to_json(const Rational& q) { return q.str(); }

Json to_json(const ClosedInterval& iv) { return Json::array({iv.lo.str(), iv.hi.str()}); }

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const Error& e) {
      schema_error(where, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long long>());
  schema_error(where, "expected a rational string \"p/q\" (floats are not accepted)");
}

ClosedInterval interval_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema_error(where, "expected [lo, hi]");
  Rational lo = rational_from_json(j[0], where + "[0]");
  Rational hi = rational_from_json(j[1], where + "[1]");
  if (hi < lo) schema_error(where, "lo > hi");
  return {std::move(lo), std::move(hi)};
}

Json stage_to_json(const CantorStage& stage, bool with_lineage) {
  Json j;
  j["depth"] = stage.depth();
  j["intervals"] = intervals_to_json(stage.intervals());
  if (with_lineage && stage.parent()) {
    Json lineage = Json::array();
    for (const auto& s : stage.lineage()) {
      if (s.get() == &stage || s->depth() == stage.depth()) continue;
      lineage.push_back({{"depth", s->depth()}, {"intervals", intervals_to_json(s->intervals())}});
    }
    j["lineage"] = std::move(lineage);
  }
  return j;
}

CantorStage stage_from_json(const Json& j) {
  const std::size_t depth = size_from_json(field(j, "depth", "stage"), "stage.depth");
  auto ivs = intervals_from_json(field(j, "intervals", "stage"), "stage.intervals");
  std::shared_ptr<const CantorStage> parent;
  if (auto it = j.find("lineage"); it != j.end()) {
    if (!it->is_array()) schema_error("stage.lineage", "expected an array of stages");
    std::size_t prev_depth = 0;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "stage.lineage[" + std::to_string(i) + "]";
      const auto& level = (*it)[i];
      const std::size_t d = size_from_json(field(level, "depth", where), where + ".depth");
      if (parent && d <= prev_depth) schema_error(where, "lineage depths must increase");
      if (d >= depth) schema_error(where, "lineage depth must be below the stage depth");
      parent = std::make_shared<const CantorStage>(
          build_stage(intervals_from_json(field(level, "intervals", where), where + ".intervals"), d, parent, where));
      prev_depth = d;
    }
  }
  return build_stage(std::move(ivs), depth, std::move(parent), "stage");
}

FamilyPtr family_from_json(const Json& j) {
  const CantorStage stage = stage_from_json(j);
  std::vector<CantorStage> levels;
  for (const auto& s : stage.lineage()) levels.emplace_back(s->intervals(), levels.size());
  try {
    return std::make_shared<ExplicitFamily>(std::move(levels));
  } catch (const DomainError& e) {
    schema_error("stage.lineage", e.what());
  }
}

Json to_json(const Gap& gap) {
  Json j;
  j["kind"] = to_string(gap.kind);
  if (gap.kind != GapKind::left_unbounded) j["lo"] = to_json(gap.lo);
  if (gap.kind != GapKind::right_unbounded) j["hi"] = to_json(gap.hi);
  if (gap.bounded()) j["length"] = to_json(gap.length());
  return j;
}

Json to_json(const GapBridgeReport& r) {
  return {{"endpoint", to_json(r.endpoint)},
          {"side", to_string(r.side)},
          {"gap", to_json(r.gap)},
          {"bridge", to_json(r.bridge)},
          {"bridge_length", to_json(r.bridge.length())},
          {"local_thickness", to_json(r.local_thickness)}};
}

Json to_json(const ThicknessResult& r) { return {{"thickness", to_json(r.value)}, {"argmin", to_json(r.argmin)}}; }

Json to_json(const GapLemmaVerdict& v) {
  Json j;
  j["applies"] = v.applies;
  j["tau1"] = v.tau1 ? to_json(*v.tau1) : Json(nullptr);
  j["tau2"] = v.tau2 ? to_json(*v.tau2) : Json(nullptr);
  j["product_ok"] = v.product_ok;
  j["k1_in_gap_of_k2"] = v.k1_in_gap_of_k2 ? to_json(*v.k1_in_gap_of_k2) : Json(nullptr);
  j["k2_in_gap_of_k1"] = v.k2_in_gap_of_k1 ? to_json(*v.k2_in_gap_of_k1) : Json(nullptr);
  j["reasons"] = v.reasons;
  return j;
}

Json to_json(const IntersectionWitness& w) {
  return {{"sample_point", to_json(w.sample_point)},
          {"levels", w.levels},
          {"chain", intervals_to_json(w.chain)},
          {"common", stage_to_json(w.common)}};
}

Json to_json(const PersistenceResult& r) {
  Json j;
  j["nonempty"] = r.ok();
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (r.empty_at_level) j["empty_at_level"] = *r.empty_at_level;
  return j;
}

Json to_json(const MvtReport& r) {
  return {{"a", to_json(r.a)},
          {"b", to_json(r.b)},
          {"c", to_json(r.c)},
          {"tau", to_json(r.tau)},
          {"g_of_c", to_json(r.g_of_c.interval())},
          {"preconditions_hold", r.preconditions_hold()},
          {"conclusion_holds", r.conclusion_holds()},
          {"failures", r.failures()}};
}

Json to_json(const SearchDiagnostics& d) {
  Json j;
  j["tau"] = to_json(d.tau);
  j["rho"] = to_json(d.rho);
  j["epsilon"] = to_json(d.epsilon);
  j["delta"] = to_json(d.delta);
  j["shrink_steps"] = d.shrink_steps;
  j["attempts"] = d.attempts;
  j["discovery_level"] = d.discovery_level;
  j["analysis_level"] = d.analysis_level;
  j["subset_bridge"] = to_json(d.subset_bridge);
  j["reflected"] = d.reflected;
  j["a"] = to_json(d.a);
  j["b"] = to_json(d.b);
  j["c"] = to_json(d.c);
  j["subset_thickness"] = to_json(d.subset_thickness);
  j["k1_thickness"] = to_json(d.k1_thickness);
  j["image_thickness"] = d.image_thickness ? to_json(*d.image_thickness) : Json(nullptr);
  j["gap_lemma_applies"] = d.gap_lemma_applies;
  if (d.mvt) j["mean_value_bounds"] = to_json(*d.mvt);
  j["cross_check_level"] = d.cross_check_level;
  return j;
}

Json to_json(const ConfigWitness& w) {
  Json j;
  j["f"] = w.f.str();
  j["x"] = to_json(w.x);
  j["t"] = to_json(w.t.interval());
  j["ft"] = to_json(w.fx.interval());
  j["depth"] = w.depth;
  Json chains = Json::array();
  for (const auto& c : w.chains) chains.push_back(intervals_to_json(c));
  j["chains"] = std::move(chains);
  if (w.diagnostics) j["diagnostics"] = to_json(*w.diagnostics);
  return j;
}

ConfigWitness witness_from_json(const Json& j) {
  ConfigWitness w;
  if (auto it = j.find("f"); it != j.end()) {
    if (!it->is_string()) schema_error("witness.f", "expected a coefficient list string");
    try {
      w.f = FunctionSpec::parse(it->get<std::string>());
    } catch (const Error& e) {
      schema_error("witness.f", e.what());
    }
  }
  w.x = rational_from_json(field(j, "x", "witness"), "witness.x");
  const auto t = interval_from_json(field(j, "t", "witness"), "witness.t");
  const auto ft = interval_from_json(field(j, "ft", "witness"), "witness.ft");
  w.t = {t.lo, t.hi};
  w.fx = {ft.lo, ft.hi};
  w.depth = size_from_json(field(j, "depth", "witness"), "witness.depth");
  const auto& chains = field(j, "chains", "witness");
  if (!chains.is_array() || chains.size() != 3) schema_error("witness.chains", "expected three chains");
  for (std::size_t k = 0; k < 3; ++k) {
    w.chains[k] = intervals_from_json(chains[k], "witness.chains[" + std::to_string(k) + "]");
  }
  return w;
}

Json to_json(const AvoidanceReport& r) {
  Json j;
  j["tau"] = to_json(r.params.tau);
  j["eps"] = to_json(r.params.eps);
  j["c"] = to_json(r.params.c);
  j["all_passed"] = r.all_passed();
  j["thickness"] = r.thickness ? to_json(*r.thickness) : Json(nullptr);
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"inequality", c.inequality}, {"passed", c.passed}});
  j["checks"] = std::move(checks);
  Json table = Json::array();
  for (const auto& b : r.bridge_table) table.push_back(to_json(b));
  j["bridge_ratios"] = std::move(table);
  if (r.parts) j["parts"] = sidecar_to_json(r.params, *r.parts);
  return j;
}

Json sidecar_to_json(const CounterexampleParams& params, const CounterexampleParts& parts) {
  Json j;
  for (std::size_t k = 0; k < parts.intervals.size(); ++k) {
    j["I" + std::to_string(k + 1)] = to_json(parts.intervals[k]);
  }
  const auto gaps = parts.gaps();
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    j["G" + std::to_string(k + 1)] = Json::array({gaps[k].lo.str(), gaps[k].hi.str()});
  }
  j["alpha"] = to_json(params.alpha);
  j["beta"] = to_json(params.beta);
  j["tau"] = to_json(params.tau);
  j["eps"] = to_json(params.eps);
  j["c"] = to_json(params.c);
  return j;
}

}  // namespace thickset::io
