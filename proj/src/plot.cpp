#include "aitsde/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "aitsde/error.hpp"
#include "aitsde/report.hpp"

namespace aitsde {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;  // room for the legend
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

const char* color_for(SchemeId id) {
  switch (id) {
    case SchemeId::TSM: return "#1f77b4";
    case SchemeId::Splitting: return "#ff7f0e";
    case SchemeId::BEM_Y: return "#2ca02c";
    case SchemeId::TEM_Y: return "#d62728";
    case SchemeId::RefBEM_X: return "#9467bd";
    case SchemeId::TamedMilstein_X: return "#8c564b";
  }
  return "#000000";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using Series = std::vector<std::pair<double, double>>;

}  // namespace

std::string render_loglog_svg(std::span<const ErrorRow> rows, PlotAxis axis) {
  // Scheme order follows first appearance in `rows`.
  std::vector<SchemeId> order;
  std::map<SchemeId, Series> series;
  for (const auto& r : rows) {
    const double xv = axis == PlotAxis::StepSize ? r.tau : r.wall_time_s;
    if (!(xv > 0.0) || !(r.rms_error_x > 0.0)) continue;
    if (!series.count(r.scheme)) order.push_back(r.scheme);
    series[r.scheme].emplace_back(std::log2(xv), std::log2(r.rms_error_x));
  }
  if (order.empty()) throw Error(Errc::ConfigInvalid, "nothing to plot");
  for (SchemeId id : order) {
    if (series[id].size() < 2) {
      throw Error(Errc::ConfigInvalid, std::string(to_string(id)) + " has fewer than two plottable rows");
    }
  }

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  double xsum = 0.0;
  double ysum = 0.0;
  std::size_t count = 0;
  for (SchemeId id : order) {
    for (const auto& [x, y] : series[id]) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      xsum += x;
      ysum += y;
      ++count;
    }
  }
  const double xpad = std::max(0.05 * (xmax - xmin), 0.25);
  const double ypad = std::max(0.05 * (ymax - ymin), 0.25);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double sx = plot_w / (xmax - xmin);
  const double sy = plot_h / (ymax - ymin);
  const double tx = kLeft - sx * xmin;
  const double ty = kTop + sy * ymax;
  auto px = [&](double x) { return sx * x + tx; };
  auto py = [&](double y) { return -sy * y + ty; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<defs><clipPath id=\"plot-area\"><rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) +
         "\" width=\"" + fmt(plot_w) + "\" height=\"" + fmt(plot_h) + "\"/></clipPath></defs>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(plot_w) +
         "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // Integer log2 ticks.
  for (int k = static_cast<int>(std::ceil(xmin)); k <= static_cast<int>(std::floor(xmax)); ++k) {
    svg += "<line x1=\"" + fmt(px(k)) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" + fmt(px(k)) +
           "\" y2=\"" + fmt(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(px(k)) + "\" y=\"" + fmt(kTop + plot_h + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">2^" + std::to_string(k) + "</text>\n";
  }
  for (int k = static_cast<int>(std::ceil(ymin)); k <= static_cast<int>(std::floor(ymax)); ++k) {
    svg += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(py(k)) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(py(k)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py(k) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">2^" + std::to_string(k) + "</text>\n";
  }
  const char* xlabel = axis == PlotAxis::StepSize ? "step size tau" : "wall time [s]";
  svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 10) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(kTop + plot_h / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt(kTop + plot_h / 2) + ")\">RMS error in X at T</text>\n";

  // Everything below is in data units: u = log2(x), v = log2(error).
  svg += "<g clip-path=\"url(#plot-area)\"><g id=\"data\" transform=\"matrix(" + fmt(sx) + " 0 0 " +
         fmt(-sy) + " " + fmt(tx) + " " + fmt(ty) + ")\">\n";
  const double xc = xsum / static_cast<double>(count);
  const double yc = ysum / static_cast<double>(count);
  for (const auto& [slope, id, dash] : {std::tuple{1.0, "guide-slope-1", "6 4"},
                                        std::tuple{0.5, "guide-slope-half", "2 3"}}) {
    svg += "<polyline id=\"" + std::string(id) + "\" points=\"" + fmt(xmin) + "," +
           fmt(yc + slope * (xmin - xc)) + " " + fmt(xmax) + "," + fmt(yc + slope * (xmax - xc)) +
           "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"" + dash +
           "\" vector-effect=\"non-scaling-stroke\"/>\n";
  }
  for (SchemeId id : order) {
    std::string pts;
    for (const auto& [x, y] : series[id]) {
      if (!pts.empty()) pts += ' ';
      pts += fmt(x) + "," + fmt(y);
    }
    svg += "<polyline id=\"series-" + std::string(to_string(id)) + "\" points=\"" + pts +
           "\" fill=\"none\" stroke=\"" + color_for(id) +
           "\" stroke-width=\"2\" vector-effect=\"non-scaling-stroke\"/>\n";
  }
  svg += "</g></g>\n";

  // Legend.
  double ly = kTop + 12;
  const double lx = kWidth - kRight + 15;
  for (SchemeId id : order) {
    svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 24) + "\" y2=\"" +
           fmt(ly) + "\" stroke=\"" + color_for(id) + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"12\">" +
           std::string(to_string(id)) + "</text>\n";
    ly += 18;
  }
  svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 24) + "\" y2=\"" +
         fmt(ly) + "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  svg += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"12\">slope 1</text>\n";
  ly += 18;
  svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 24) + "\" y2=\"" +
         fmt(ly) + "\" stroke=\"gray\" stroke-dasharray=\"2 3\"/>\n";
  svg += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"12\">slope 1/2</text>\n";
  svg += "</svg>\n";
  return svg;
}

void emit_loglog_svg(std::span<const ErrorRow> rows, const std::filesystem::path& out, PlotAxis axis) {
  write_text_file(out, render_loglog_svg(rows, axis));
}

}  // namespace aitsde
