#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "aitsde/harness.hpp"

namespace aitsde {

enum class PlotAxis {
  StepSize,  // x = log2(tau): convergence plot
  WallTime,  // x = log2(wall_time_s): efficiency plot
};

// Standalone SVG: log2 axes, one polyline per scheme (y = log2 rms_error_x),
// slope-1 and slope-1/2 guide lines and a legend. Polylines and guides are
// drawn in data units inside a single affine group, so their point lists can
// be read back directly. Requires at least two usable rows per scheme.
std::string render_loglog_svg(std::span<const ErrorRow> rows, PlotAxis axis = PlotAxis::StepSize);

void emit_loglog_svg(std::span<const ErrorRow> rows, const std::filesystem::path& out,
                     PlotAxis axis = PlotAxis::StepSize);

}  // namespace aitsde
