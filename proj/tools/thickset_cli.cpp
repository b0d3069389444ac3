// thickset: command-line front end for the thickset library.

#include <CLI11.hpp>

#include <atomic>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "thickset/constructions.hpp"
#include "thickset/errors.hpp"
#include "thickset/gaplemma.hpp"
#include "thickset/io.hpp"
#include "thickset/render.hpp"
#include "thickset/search.hpp"

using namespace thickset;
using io::Json;

namespace {

Rational parse_rational(const std::string& text, const std::string& flag) {
  try {
    return Rational::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(flag + ": " + e.what(), e.offset());
  }
}

std::optional<Rational> parse_optional(const std::string& text, const std::string& flag) {
  if (text.empty()) return std::nullopt;
  return parse_rational(text, flag);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

/// middle-alpha:A | random-thick:TAU:SEED[:SPREAD] | file:PATH
FamilyPtr parse_family(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "file") {
    if (rest.empty()) throw ParseError("family spec file:PATH needs a path");
    return io::family_from_json(io::read_json_file(rest));
  }
  const auto parts = split(rest, ':');
  if (kind == "middle-alpha" && parts.size() == 1 && !parts[0].empty()) {
    return middle_alpha_family(parse_rational(parts[0], "middle-alpha"));
  }
  if (kind == "random-thick" && (parts.size() == 2 || parts.size() == 3)) {
    RandomThickSpec rs;
    rs.target_tau = parse_rational(parts[0], "random-thick tau");
    try {
      rs.seed = std::stoull(parts[1]);
    } catch (const std::exception&) {
      throw ParseError("random-thick seed must be a non-negative integer, got \"" + parts[1] + "\"");
    }
    if (parts.size() == 3) rs.gap_spread = parse_rational(parts[2], "random-thick spread");
    return random_thick_family(rs);
  }
  throw ParseError("unknown family spec \"" + spec +
                   "\"; expected middle-alpha:A, random-thick:TAU:SEED[:SPREAD] or file:PATH");
}

CantorStage load_stage(const std::string& path) { return io::stage_from_json(io::read_json_file(path)); }

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    io::write_text_file(out, text);
  }
}

void emit(const Json& j, const std::string& out) { emit(j.dump(2) + "\n", out); }

std::string describe_argmin(const GapBridgeReport& r) {
  std::ostringstream s;
  s << "argmin endpoint " << r.endpoint.str() << " (" << to_string(r.side) << " end of gap (" << r.gap.lo.str()
    << ", " << r.gap.hi.str() << ")), bridge " << r.bridge << ", ratio " << r.local_thickness.str();
  return s.str();
}

struct SearchFlags {
  std::size_t min_depth = 10;
  std::size_t max_depth = 40;
  std::size_t analysis_depth = 6;
  std::size_t node_budget = 200000;
  std::string target_width;
};

void add_search_flags(CLI::App* cmd, SearchFlags& f) {
  cmd->add_option("--min-depth", f.min_depth, "shallowest certified chain depth")->capture_default_str();
  cmd->add_option("--max-depth", f.max_depth, "deepest refinement level explored")->capture_default_str();
  cmd->add_option("--analysis-depth", f.analysis_depth, "levels materialized for thickness checks")
      ->capture_default_str();
  cmd->add_option("--node-budget", f.node_budget, "node pairs the chain search may visit")->capture_default_str();
  cmd->add_option("--target-width", f.target_width, "stop once the enclosure of t is this narrow (p/q or 2^-k)");
}

std::optional<Rational> parse_width(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text.rfind("2^", 0) == 0) {
    try {
      return Rational::pow2(std::stol(text.substr(2)));
    } catch (const std::invalid_argument&) {
      throw ParseError("--target-width: bad exponent in \"" + text + "\"");
    }
  }
  return parse_rational(text, "--target-width");
}

struct SweepPoint {
  Rational c1;
  bool in_window = false;
  std::string outcome;
  std::string message;
  std::optional<std::size_t> depth;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of thick Cantor sets: thickness, gap lemma, configuration finders."};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string out;

  // construct
  auto* construct = app.add_subcommand("construct", "build a stage and write it as JSON");
  std::string c_alpha, c_random, c_spread;
  std::uint64_t c_seed = 0;
  std::size_t c_depth = 0;
  bool c_lineage = false;
  construct->add_option("--middle-alpha", c_alpha, "remove the middle proportion A of every interval");
  construct->add_option("--random-thick", c_random, "random stage with thickness at least TAU");
  construct->add_option("--seed", c_seed, "seed for --random-thick");
  construct->add_option("--spread", c_spread, "gap spread in [0,1) for --random-thick (default 1/2)");
  construct->add_option("--depth", c_depth, "refinement depth")->required();
  construct->add_flag("--lineage", c_lineage, "include the coarser stages");
  construct->add_option("--out", out, "output path (default stdout)");

  // thickness
  auto* thick = app.add_subcommand("thickness", "exact thickness of a stage file");
  std::string t_file;
  bool t_json = false;
  thick->add_option("stage", t_file, "stage JSON")->required();
  thick->add_flag("--json", t_json, "emit a JSON report");
  thick->add_option("--out", out, "output path (default stdout)");

  // bridges
  auto* bridges = app.add_subcommand("bridges", "bridge and local thickness at every gap endpoint");
  std::string b_file;
  bridges->add_option("stage", b_file, "stage JSON")->required();
  bridges->add_option("--out", out, "output path (default stdout)");

  // check-gap-lemma
  auto* gl = app.add_subcommand("check-gap-lemma", "gap lemma hypotheses and a nested intersection certificate");
  std::string g_k1, g_k2;
  std::size_t g_depth = 8;
  gl->add_option("--k1", g_k1, "first set: family spec")->required();
  gl->add_option("--k2", g_k2, "second set: family spec")->required();
  gl->add_option("--depth", g_depth, "deepest level intersected")->capture_default_str();
  gl->add_option("--out", out, "output path (default stdout)");

  // find-3ap
  auto* f3 = app.add_subcommand("find-3ap", "3-term progression around the largest gap (needs thickness >= 1)");
  std::string a_family;
  SearchFlags a_flags;
  f3->add_option("--set-family", a_family, "family spec")->required();
  add_search_flags(f3, a_flags);
  f3->add_option("--out", out, "output path (default stdout)");

  // find-config
  auto* fc = app.add_subcommand("find-config", "configuration {x - t, x, x + f(t)} (needs thickness > 1)");
  std::string f_family, f_f, f_rho, f_eps, f_delta, f_precision;
  SearchFlags f_flags;
  fc->add_option("--set-family", f_family, "family spec")->required();
  fc->add_option("--f", f_f, "coefficients c1,c2,... of f(t) = c1 t + c2 t^2 + ...")->required();
  fc->add_option("--rho", f_rho, "thickness loss factor (default (1 + 1/tau)/2)");
  fc->add_option("--epsilon", f_eps, "derivative flatness target (default (1/rho - 1)/2)");
  fc->add_option("--delta", f_delta, "initial neighbourhood radius");
  fc->add_option("--precision", f_precision, "inverse enclosure width (overrides THICKSET_PRECISION)");
  add_search_flags(fc, f_flags);
  fc->add_option("--out", out, "output path (default stdout)");

  // counterexample
  auto* ce = app.add_subcommand("counterexample", "five-interval set avoiding {x - t, x, x + t^2}");
  std::string ce_tau, ce_eps, ce_c, ce_tol = "1/1000000", ce_sidecar;
  ce->add_option("--tau", ce_tau, "target thickness")->required();
  ce->add_option("--eps", ce_eps, "scale epsilon")->required();
  ce->add_option("--c", ce_c, "shape parameter in (0,1); calibrated when omitted");
  ce->add_option("--tol", ce_tol, "calibration tolerance")->capture_default_str();
  ce->add_option("--sidecar", ce_sidecar, "write the named parts I1..I5, G1..G4 here");
  ce->add_option("--out", out, "output path (default stdout)");

  // verify-counterexample
  auto* vc = app.add_subcommand("verify-counterexample", "exact avoidance and thickness checks");
  std::string vc_tau, vc_eps, vc_c, vc_tol = "1/1000000", vc_parts;
  vc->add_option("--tau", vc_tau, "target thickness")->required();
  vc->add_option("--eps", vc_eps, "scale epsilon")->required();
  vc->add_option("--c", vc_c, "shape parameter; calibrated when omitted");
  vc->add_option("--tol", vc_tol, "thickness tolerance")->capture_default_str();
  vc->add_option("--parts", vc_parts, "verify the parts in this sidecar instead of rebuilding them");
  vc->add_option("--out", out, "output path (default stdout)");

  // render
  auto* rd = app.add_subcommand("render", "SVG of a stage with its bridges");
  std::string r_file, r_sidecar, r_title;
  bool r_log = false, r_lineage = false;
  rd->add_option("stage", r_file, "stage JSON")->required();
  rd->add_option("--sidecar", r_sidecar, "named parts to label");
  rd->add_option("--title", r_title, "caption");
  rd->add_flag("--log", r_log, "symmetric log scale");
  rd->add_flag("--lineage", r_lineage, "draw the coarser stages too");
  rd->add_option("--out", out, "output path (default stdout)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "EXPERIMENTAL: find-config over a grid of slopes f'(0)");
  std::string s_family, s_lo, s_hi, s_tail;
  std::size_t s_steps = 16;
  unsigned s_threads = std::max(1u, std::thread::hardware_concurrency());
  SearchFlags s_flags;
  sw->add_option("--set-family", s_family, "family spec")->required();
  sw->add_option("--c1-min", s_lo, "smallest slope")->required();
  sw->add_option("--c1-max", s_hi, "largest slope")->required();
  sw->add_option("--steps", s_steps, "grid intervals")->capture_default_str();
  sw->add_option("--tail", s_tail, "higher coefficients c2,c3,... appended to each slope");
  sw->add_option("--threads", s_threads, "worker threads");
  add_search_flags(sw, s_flags);
  sw->add_option("--out", out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (construct->parsed()) {
      if (c_alpha.empty() == c_random.empty()) throw ParseError("construct needs exactly one of --middle-alpha, --random-thick");
      CantorStage stage = [&] {
        if (!c_alpha.empty()) return middle_alpha(parse_rational(c_alpha, "--middle-alpha"), c_depth);
        RandomThickSpec rs;
        rs.target_tau = parse_rational(c_random, "--random-thick");
        rs.depth = c_depth;
        rs.seed = c_seed;
        if (!c_spread.empty()) rs.gap_spread = parse_rational(c_spread, "--spread");
        return random_thick(rs);
      }();
      emit(io::stage_to_json(stage, c_lineage), out);
    } else if (thick->parsed()) {
      const auto r = thickness(load_stage(t_file));
      if (t_json) {
        emit(io::to_json(r), out);
      } else {
        emit(r.value.str() + "\n" + describe_argmin(r.argmin) + "\n", out);
      }
    } else if (bridges->parsed()) {
      Json arr = Json::array();
      for (const auto& b : all_bridges(load_stage(b_file))) arr.push_back(io::to_json(b));
      emit(arr, out);
    } else if (gl->parsed()) {
      const auto k1 = parse_family(g_k1);
      const auto k2 = parse_family(g_k2);
      std::size_t depth = g_depth;
      for (const auto& fam : {k1, k2}) {
        if (auto cap = fam->max_level()) depth = std::min(depth, *cap);
      }
      const auto verdict = check_hypotheses(k1->stage(depth), k2->stage(depth));
      const auto persistence = persistent_intersect(*k1, *k2, depth);
      if (verdict.applies && !persistence.ok()) {
        throw InternalContradiction("gap lemma hypotheses hold at level " + std::to_string(depth) +
                                    " but the stages are disjoint at level " +
                                    std::to_string(*persistence.empty_at_level));
      }
      Json j;
      j["depth"] = depth;
      j["verdict"] = io::to_json(verdict);
      j["intersection"] = io::to_json(persistence);
      emit(j, out);
    } else if (f3->parsed()) {
      const auto family = parse_family(a_family);
      ThreeApOptions o;
      o.analysis_depth = a_flags.analysis_depth;
      o.min_depth = a_flags.min_depth;
      o.max_depth = a_flags.max_depth;
      o.node_budget = a_flags.node_budget;
      o.target_width = parse_width(a_flags.target_width);
      emit(io::to_json(find_3ap(family, o)), out);
    } else if (fc->parsed()) {
      const auto family = parse_family(f_family);
      const auto f = FunctionSpec::parse(f_f);
      SearchConfig cfg;
      cfg.rho = parse_optional(f_rho, "--rho");
      cfg.epsilon = parse_optional(f_eps, "--epsilon");
      cfg.delta = parse_optional(f_delta, "--delta");
      if (auto p = parse_width(f_precision)) cfg.inverse_precision = *p;
      cfg.analysis_depth = f_flags.analysis_depth;
      cfg.min_depth = f_flags.min_depth;
      cfg.max_depth = f_flags.max_depth;
      cfg.node_budget = f_flags.node_budget;
      cfg.target_width = parse_width(f_flags.target_width);
      emit(io::to_json(find_config(family, f, cfg)), out);
    } else if (ce->parsed()) {
      const Rational tau = parse_rational(ce_tau, "--tau");
      const Rational eps = parse_rational(ce_eps, "--eps");
      const Rational tol = parse_rational(ce_tol, "--tol");
      const auto params = ce_c.empty() ? counterexample_calibrate(tau, eps, tol)
                                       : CounterexampleParams::make(tau, eps, parse_rational(ce_c, "--c"));
      const auto parts = counterexample_parts(params);
      if (!ce_sidecar.empty()) io::write_text_file(ce_sidecar, io::sidecar_to_json(params, parts).dump(2) + "\n");
      emit(io::stage_to_json(parts.stage()), out);
    } else if (vc->parsed()) {
      const Rational tau = parse_rational(vc_tau, "--tau");
      const Rational eps = parse_rational(vc_eps, "--eps");
      const Rational tol = parse_rational(vc_tol, "--tol");
      std::optional<CounterexampleParams> params;
      std::optional<CounterexampleParts> parts;
      if (!vc_parts.empty()) {
        const Json side = io::read_json_file(vc_parts);
        CounterexampleParts p;
        for (std::size_t k = 0; k < 5; ++k) {
          const std::string key = "I" + std::to_string(k + 1);
          if (!side.contains(key)) throw ParseError("sidecar is missing " + key);
          p.intervals[k] = io::interval_from_json(side[key], key);
        }
        const Rational c = side.contains("c") ? io::rational_from_json(side["c"], "c")
                                              : parse_rational(vc_c.empty() ? "1/2" : vc_c, "--c");
        params = CounterexampleParams::make(tau, eps, c);
        parts = p;
      } else {
        params = vc_c.empty() ? counterexample_calibrate(tau, eps, tol)
                              : CounterexampleParams::make(tau, eps, parse_rational(vc_c, "--c"));
      }
      const auto report = parts ? verify_counterexample_parts(*params, *parts, tol) : verify_counterexample(*params, tol);
      emit(io::to_json(report), out);
      report.require_pass();
    } else if (rd->parsed()) {
      const CantorStage stage = load_stage(r_file);
      RenderOptions ro;
      ro.log_scale = r_log;
      ro.show_lineage = r_lineage;
      ro.title = r_title;
      if (!r_sidecar.empty()) {
        const Json side = io::read_json_file(r_sidecar);
        for (const char* key : {"I1", "G1", "I2", "G2", "I3", "G3", "I4", "G4", "I5"}) {
          if (side.contains(key)) ro.labels.emplace_back(key, io::interval_from_json(side[key], key));
        }
      }
      emit(render_svg(stage, ro), out);
    } else if (sw->parsed()) {
      const auto family = parse_family(s_family);
      const Rational lo = parse_rational(s_lo, "--c1-min");
      const Rational hi = parse_rational(s_hi, "--c1-max");
      if (hi < lo || s_steps == 0) throw DomainError("sweep needs c1-min <= c1-max and steps >= 1");
      std::vector<Rational> tail;
      if (!s_tail.empty()) {
        for (const auto& c : split(s_tail, ',')) tail.push_back(parse_rational(c, "--tail"));
      }
      const auto tau = family_thickness(*family, s_flags.analysis_depth);
      if (!tau || *tau <= 1) throw HypothesisError("sweep needs a family with thickness tau > 1");
      const DerivativeWindow window = derivative_window(*tau);

      std::vector<SweepPoint> points(s_steps + 1);
      for (std::size_t i = 0; i <= s_steps; ++i) {
        points[i].c1 = lo + (hi - lo) * Rational(static_cast<long>(i), static_cast<long>(s_steps));
        points[i].in_window = window.contains(points[i].c1);
      }
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i; (i = next++) < points.size();) {
          auto& p = points[i];
          try {
            std::vector<Rational> coeffs{p.c1};
            coeffs.insert(coeffs.end(), tail.begin(), tail.end());
            SearchConfig cfg;
            cfg.enforce_window = false;
            cfg.analysis_depth = s_flags.analysis_depth;
            cfg.min_depth = s_flags.min_depth;
            cfg.max_depth = s_flags.max_depth;
            cfg.node_budget = s_flags.node_budget;
            cfg.target_width = parse_width(s_flags.target_width);
            const auto w = find_config(family, FunctionSpec(coeffs), cfg);
            p.outcome = "found";
            p.depth = w.depth;
          } catch (const InternalContradiction& e) {
            p.outcome = "lemma-failure";
            p.message = e.what();
          } catch (const HypothesisError& e) {
            p.outcome = "hypothesis";
            p.message = e.what();
          } catch (const InsufficientDepth& e) {
            p.outcome = "insufficient-depth";
            p.message = e.what();
          } catch (const PrecisionError& e) {
            p.outcome = "precision";
            p.message = e.what();
          } catch (const Error& e) {
            p.outcome = "error";
            p.message = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (unsigned k = 0; k < std::max(1u, s_threads); ++k) pool.emplace_back(worker);
      for (auto& t : pool) t.join();

      Json j;
      j["experimental"] = true;
      j["note"] =
          "empirical probe outside the proven derivative window; a miss is not evidence of nonexistence";
      j["tau"] = tau->str();
      j["window"] = {window.lower.str(), window.upper.str()};
      Json rows = Json::array();
      for (const auto& p : points) {
        Json row{{"c1", p.c1.str()}, {"in_window", p.in_window}, {"outcome", p.outcome}};
        if (p.depth) row["depth"] = *p.depth;
        if (!p.message.empty()) row["message"] = p.message;
        rows.push_back(std::move(row));
      }
      j["points"] = std::move(rows);
      emit(j, out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
