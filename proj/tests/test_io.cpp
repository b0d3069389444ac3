#include <doctest.h>

#include <random>
#include <regex>

#include "support.hpp"
#include "thickset/errors.hpp"
#include "thickset/io.hpp"
#include "thickset/render.hpp"

using namespace thickset;
using namespace thickset::testing;

TEST_CASE("stage JSON format") {
  const auto s = middle_alpha(R(1, 3), 1);
  const auto j = io::stage_to_json(s);
  CHECK(j.dump() == R"({"depth":1,"intervals":[["0","1/3"],["2/3","1"]]})");
  CHECK(io::stage_from_json(j) == s);
}

TEST_CASE("property: stage round trip is bit exact") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_stage(rng, {1, R(3, 2), 2}, 6);
    const auto text = io::stage_to_json(s, true).dump();
    const auto back = io::stage_from_json(io::parse_json(text));
    CHECK(back == s);
    CHECK(back.lineage().size() == s.lineage().size());
    CHECK(io::stage_to_json(back, true).dump() == text);
  }
}

TEST_CASE("families from stage files") {
  const auto s = middle_alpha(R(1, 5), 4);
  const auto fam = io::family_from_json(io::stage_to_json(s, true));
  CHECK(fam->max_level() == std::optional<std::size_t>(4));
  CHECK(fam->stage(4).intervals() == s.intervals());
  const auto flat = io::family_from_json(io::stage_to_json(s));
  CHECK(flat->max_level() == std::optional<std::size_t>(0));
}

TEST_CASE("malformed input") {
  SUBCASE("syntax errors carry the byte offset") {
    const std::string text = R"({"depth": 1, "intervals": [["0", "1/3"] ["2/3","1"]]})";
    try {
      io::parse_json(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 41);
      CHECK(std::string(e.what()).find("byte 41") != std::string::npos);
    }
  }
  SUBCASE("schema errors") {
    CHECK_THROWS_AS(io::stage_from_json(io::parse_json(R"({"intervals": []})")), ParseError);
    CHECK_THROWS_AS(io::stage_from_json(io::parse_json(R"({"depth": 0, "intervals": [[0.5, 1]]})")), ParseError);
    CHECK_THROWS_AS(io::stage_from_json(io::parse_json(R"({"depth": 0, "intervals": [["1", "0"]]})")), ParseError);
    CHECK_THROWS_AS(io::stage_from_json(io::parse_json(R"({"depth": 0, "intervals": [["0","2"],["1","3"]]})")),
                    ParseError);
    CHECK_THROWS_AS(io::stage_from_json(io::parse_json(R"({"depth": -1, "intervals": [["0","1"]]})")), ParseError);
    CHECK_THROWS_AS(io::stage_from_json(io::parse_json(R"({"depth": 0, "intervals": [["a","1"]]})")), ParseError);
  }
  SUBCASE("integers are accepted as rationals") {
    CHECK(io::stage_from_json(io::parse_json(R"({"depth": 0, "intervals": [[0, 1]]})")) ==
          CantorStage::single(0, 1));
  }
}

TEST_CASE("witness JSON round trip") {
  const auto fam = middle_alpha_family(R(1, 5));
  const auto w = find_config(fam, FunctionSpec::parse("1,1/10"));
  const auto j = io::to_json(w);
  CHECK(j.contains("x"));
  CHECK(j["t"].size() == 2);
  CHECK(j["ft"].size() == 2);
  CHECK(j["chains"].size() == 3);
  CHECK(j["chains"][0].size() == w.depth + 1);
  const auto back = io::witness_from_json(io::parse_json(j.dump()));
  CHECK(back.x == w.x);
  CHECK(back.t == w.t);
  CHECK(back.fx == w.fx);
  CHECK(back.f == w.f);
  CHECK(back.chains == w.chains);
  CHECK(verify_witness(back, *fam).ok);
}

TEST_CASE("reports serialise") {
  const auto s = middle_alpha(R(1, 3), 2);
  const auto t = io::to_json(thickness(s));
  CHECK(t["thickness"] == "1");
  CHECK(t["argmin"]["endpoint"] == "1/9");
  const auto v = io::to_json(check_hypotheses(s, s));
  CHECK(v["applies"] == true);
  const auto p = counterexample_calibrate(R(101, 100), R(1, 1000), R(1, 1000000));
  const auto r = io::to_json(verify_counterexample(p));
  CHECK(r["all_passed"] == true);
  CHECK(r["parts"].contains("I5"));
  CHECK(r["parts"].contains("G4"));
  CHECK(r["parts"]["alpha"] == (1 / (2 * R(101, 100) + 1)).str());
}

TEST_CASE("SVG rendering") {
  const auto s = middle_alpha(R(1, 3), 3);
  const std::string svg = render_svg(s);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = svg.find(needle); pos != std::string::npos; pos = svg.find(needle, pos + 1)) ++n;
    return n;
  };
  CHECK(count("class=\"interval\"") == s.size());
  CHECK(count("class=\"bridge\"") == all_bridges(s).size());
  // every opened element is closed
  CHECK(count("<line") == count("/>") - count("<path") - count("<rect"));

  SUBCASE("log scale with labels") {
    const auto p = CounterexampleParams::make(1, R(1, 1000), R(9, 10));
    const auto parts = counterexample_parts(p);
    RenderOptions o;
    o.log_scale = true;
    o.title = "five parts & gaps";
    for (std::size_t k = 0; k < 5; ++k) o.labels.emplace_back("I" + std::to_string(k + 1), parts.intervals[k]);
    const std::string out = render_svg(parts.stage(), o);
    CHECK(out.find("five parts &amp; gaps") != std::string::npos);
    CHECK(out.find(">I5<") != std::string::npos);
    CHECK(out.find("nan") == std::string::npos);
  }
}
