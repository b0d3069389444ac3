#include "thickset/render.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace thickset {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const CantorStage& stage, const RenderOptions& opt) {
  // coordinates are only drawn, never compared, so doubles are fine here
  const auto lineage = opt.show_lineage ? stage.lineage() : std::vector<std::shared_ptr<const CantorStage>>{};
  ClosedInterval span = stage.hull();
  for (const auto& [name, iv] : opt.labels) span = {min(span.lo, iv.lo), max(span.hi, iv.hi)};

  Rational shortest = stage.intervals().front().length();
  for (const auto& iv : stage.intervals()) {
    if (!iv.degenerate() && (shortest.is_zero() || iv.length() < shortest)) shortest = iv.length();
  }
  const double threshold = opt.linear_threshold ? opt.linear_threshold->to_double()
                                                : (shortest.is_zero() ? 1.0 : shortest.to_double());
  std::function<double(double)> warp = [&](double x) {
    if (!opt.log_scale) return x;
    return std::copysign(std::log10(1.0 + std::abs(x) / threshold), x);
  };
  const double w0 = warp(span.lo.to_double());
  const double w1 = warp(span.hi.to_double());
  const double plot = opt.width - 2 * opt.margin;
  auto px = [&](const Rational& x) {
    if (w1 == w0) return opt.margin + plot / 2;
    return opt.margin + (warp(x.to_double()) - w0) / (w1 - w0) * plot;
  };

  const auto bridges = all_bridges(stage);
  // greedy tiers: a brace goes on the first tier whose last brace ends before it
  std::vector<double> tier_end;
  std::vector<std::size_t> tier_of(bridges.size());
  for (std::size_t i = 0; i < bridges.size(); ++i) {
    const double a = px(bridges[i].bridge.lo);
    const double b = px(bridges[i].bridge.hi);
    std::size_t t = 0;
    while (t < tier_end.size() && tier_end[t] > a - 1) ++t;
    if (t == tier_end.size()) tier_end.push_back(0);
    tier_end[t] = b;
    tier_of[i] = t;
  }

  const double row = 22;
  const double title_h = opt.title.empty() ? 0 : 24;
  const double lineage_h = lineage.size() > 1 ? row * static_cast<double>(lineage.size() - 1) : 0;
  const double axis_y = opt.margin + title_h + lineage_h;
  const double braces_y = axis_y + 18;
  const double labels_y = braces_y + row * static_cast<double>(tier_end.size()) + 10;
  const double height = labels_y + (opt.labels.empty() ? 0 : 2 * row) + opt.margin;

  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << opt.width << ' ' << height << "\">\n"
    << "<style>.interval{stroke:#1f3b73;stroke-width:6}.ancestor{stroke:#9aa7c0;stroke-width:4}"
       ".bridge{fill:none;stroke:#b5472b;stroke-width:1.2}.label{font:11px sans-serif}</style>\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    s << "<text class=\"label\" x=\"" << opt.margin << "\" y=\"" << opt.margin << "\">" << escape(opt.title)
      << "</text>\n";
  }
  for (std::size_t k = 0; k + 1 < lineage.size(); ++k) {
    const double y = opt.margin + title_h + row * static_cast<double>(k);
    for (const auto& iv : lineage[k]->intervals()) {
      s << "<line class=\"ancestor\" x1=\"" << px(iv.lo) << "\" y1=\"" << y << "\" x2=\"" << px(iv.hi)
        << "\" y2=\"" << y << "\"/>\n";
    }
  }
  for (const auto& iv : stage.intervals()) {
    // degenerate intervals get a visible dot-length segment
    const double a = px(iv.lo);
    const double b = std::max(px(iv.hi), a + 1.0);
    s << "<line class=\"interval\" x1=\"" << a << "\" y1=\"" << axis_y << "\" x2=\"" << b << "\" y2=\"" << axis_y
      << "\" data-lo=\"" << iv.lo.str() << "\" data-hi=\"" << iv.hi.str() << "\"/>\n";
  }
  for (std::size_t i = 0; i < bridges.size(); ++i) {
    const auto& br = bridges[i];
    const double a = px(br.bridge.lo);
    const double b = px(br.bridge.hi);
    const double y = braces_y + row * static_cast<double>(tier_of[i]);
    const double mid = (a + b) / 2;
    s << "<path class=\"bridge\" d=\"M " << a << ' ' << y - 6 << " Q " << a << ' ' << y << ' ' << a + 4 << ' ' << y
      << " L " << mid - 4 << ' ' << y << " Q " << mid << ' ' << y << ' ' << mid << ' ' << y + 5 << " Q " << mid
      << ' ' << y << ' ' << mid + 4 << ' ' << y << " L " << b - 4 << ' ' << y << " Q " << b << ' ' << y << ' ' << b
      << ' ' << y - 6 << "\" data-endpoint=\"" << br.endpoint.str() << "\" data-side=\"" << to_string(br.side)
      << "\" data-ratio=\"" << br.local_thickness.str() << "\"/>\n";
  }
  double label_row = 0;
  for (const auto& [name, iv] : opt.labels) {
    const double mid = (px(iv.lo) + px(iv.hi)) / 2;
    s << "<text class=\"label\" text-anchor=\"middle\" x=\"" << mid << "\" y=\"" << labels_y + row * label_row
      << "\">" << escape(name) << "</text>\n";
    label_row = label_row == 0 ? 1 : 0;  // alternate rows so neighbours do not collide
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace thickset
