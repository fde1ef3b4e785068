#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ddsm/sweeps.hpp"

namespace ddsm {

enum class ChartKind { kLogXLine, kLinearLine, kHeatmap };

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Heatmap ramp endpoints: blue for the low anchor, yellow for the high one.
inline constexpr Rgb kRampBlue{62, 38, 168};
inline constexpr Rgb kRampYellow{249, 251, 21};

struct ChartStyle {
  ChartKind kind = ChartKind::kLinearLine;
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Logarithmic value axis (line charts only).
  bool log_y = false;
  int width = 800;
  int height = 600;
  Rgb ramp_low = kRampBlue;
  Rgb ramp_high = kRampYellow;
};

enum class ChartMetric {
  kMaxError,
  kMaxErrorPercent,
  kThdRatio,
  kThdDb,
  kPaperBound,
  kStrictBound,
};

std::string_view to_string(ChartMetric metric);
std::optional<ChartMetric> parse_chart_metric(std::string_view text);

/// "#rrggbb", lowercase.
std::string color_hex(Rgb color);

/// Linear blend between the ramp anchors; t is clamped to [0, 1].
Rgb ramp_color(const ChartStyle& style, double t);

/// Axis labels and scales matching the sweep kind: bits on a linear x axis,
/// multipliers on a log x axis, grids as heatmaps.
ChartStyle default_chart_style(SweepKind kind, ChartMetric metric);

/// One polyline per selected series over the bits or multiplier axis. Rows
/// without a value for a series (absent THD, nonpositive on a log axis) are
/// skipped. Throws std::invalid_argument on an empty selection, a grid
/// result, or a series with no drawable point.
std::string render_line_chart(const SweepResult& result, const ChartStyle& style,
                              std::span<const ChartMetric> series);

/// One cell per (bits, multiplier) row. Max error is anchored at 0 (low) and
/// 1 (high); other metrics at the grid's observed range. Anchors are written
/// into the SVG metadata. Throws std::invalid_argument for a ragged grid.
std::string render_heatmap(const SweepResult& result, const ChartStyle& style,
                           ChartMetric metric);

}  // namespace ddsm
