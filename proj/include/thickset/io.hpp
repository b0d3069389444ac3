#pragma once

// JSON interchange. Rationals always travel as lowest-terms "p/q" strings.
//
// Stage:   {"depth": n, "intervals": [["p/q", "r/s"], ...],
//           "lineage": [{"depth": 0, "intervals": ...}, ...]}   (lineage optional)
// Witness: {"f": "c1,c2,...", "x": "p/q", "t": [lo, hi], "ft": [lo, hi],
//           "depth": n, "chains": [[[lo, hi], ...], [...], [...]]}

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "thickset/constructions.hpp"
#include "thickset/core.hpp"
#include "thickset/family.hpp"
#include "thickset/gaplemma.hpp"
#include "thickset/search.hpp"

namespace thickset::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text; malformed input raises ParseError carrying the byte offset.
Json parse_json(std::string_view text);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json to_json(const Rational& q);
Json to_json(const ClosedInterval& iv);
Rational rational_from_json(const Json& j, const std::string& where);
ClosedInterval interval_from_json(const Json& j, const std::string& where);

Json stage_to_json(const CantorStage& stage, bool with_lineage = false);
/// Validates the stage; a "lineage" array becomes the parent chain.
CantorStage stage_from_json(const Json& j);
/// A stage file as a family: its lineage levels when present, else one level.
FamilyPtr family_from_json(const Json& j);

Json to_json(const Gap& gap);
Json to_json(const GapBridgeReport& report);
Json to_json(const ThicknessResult& result);
Json to_json(const GapLemmaVerdict& verdict);
Json to_json(const IntersectionWitness& witness);
Json to_json(const PersistenceResult& result);
Json to_json(const MvtReport& report);
Json to_json(const SearchDiagnostics& diagnostics);
Json to_json(const ConfigWitness& witness);
ConfigWitness witness_from_json(const Json& j);
Json to_json(const AvoidanceReport& report);

/// Named parts I1..I5, G1..G4 with alpha and beta.
Json sidecar_to_json(const CounterexampleParams& params, const CounterexampleParts& parts);

}  // namespace thickset::io
