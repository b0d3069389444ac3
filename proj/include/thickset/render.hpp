#pragma once

// SVG drawings of stages: one segment per interval and one brace per bridge,
// braces stacked in tiers so overlapping bridges stay readable.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thickset/core.hpp"

namespace thickset {

struct RenderOptions {
  double width = 1200;
  double margin = 40;
  /// Symmetric log scale: x -> sign(x) log10(1 + |x|/linear_threshold). Useful
  /// when parts span several orders of magnitude.
  bool log_scale = false;
  /// Defaults to the shortest interval of the stage.
  std::optional<Rational> linear_threshold;
  /// Draw the coarser stages of the lineage above the stage.
  bool show_lineage = false;
  /// Named intervals drawn as captions (for example I1..I5, G1..G4).
  std::vector<std::pair<std::string, ClosedInterval>> labels;
  std::string title;
};

/// Standalone SVG document. Elements carry the classes "interval", "ancestor",
/// "bridge" and "label" so tests and stylesheets can find them.
std::string render_svg(const CantorStage& stage, const RenderOptions& options = {});

}  // namespace thickset
