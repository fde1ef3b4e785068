#include "ddsm/charts.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ddsm/report.hpp"

namespace ddsm {

namespace {

constexpr std::array<Rgb, 6> kSeriesColors{{
    {0, 114, 189},
    {217, 83, 25},
    {237, 177, 32},
    {126, 47, 142},
    {119, 172, 48},
    {77, 190, 238},
}};

constexpr Rgb kMissingCell{191, 191, 191};

struct Margins {
  double left = 90.0;
  double right = 30.0;
  double top = 50.0;
  double bottom = 70.0;
};

std::string coord(double v) {
  char buffer[32];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, v, std::chars_format::fixed, 2);
  return std::string(buffer, end);
}

std::string tick_label(double v) {
  if (std::fabs(v) < 1e-12) return "0";
  char buffer[32];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, v, std::chars_format::general, 6);
  return std::string(buffer, end);
}

std::string escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::optional<double> metric_value(const SweepRow& row, ChartMetric metric) {
  const MetricsReport& r = row.report;
  switch (metric) {
    case ChartMetric::kMaxError:
      return r.max_abs_error;
    case ChartMetric::kMaxErrorPercent:
      return r.max_abs_error_percent();
    case ChartMetric::kThdRatio:
      return r.thd_ratio;
    case ChartMetric::kThdDb:
      return r.thd_db;
    case ChartMetric::kPaperBound:
      return r.paper_bound;
    case ChartMetric::kStrictBound:
      return r.strict_bound;
  }
  return std::nullopt;
}

std::string metric_title(ChartMetric metric) {
  switch (metric) {
    case ChartMetric::kMaxError:
      return "maximum absolute error";
    case ChartMetric::kMaxErrorPercent:
      return "maximum absolute error (%)";
    case ChartMetric::kThdRatio:
      return "THD (ratio)";
    case ChartMetric::kThdDb:
      return "THD (dB)";
    case ChartMetric::kPaperBound:
      return "closed-form bound";
    case ChartMetric::kStrictBound:
      return "strict bound";
  }
  return {};
}

// Maps data values onto one pixel axis, linear or log10.
class Axis {
 public:
  Axis(double lo, double hi, bool log, double pixel_lo, double pixel_hi)
      : log_(log), pixel_lo_(pixel_lo), pixel_hi_(pixel_hi) {
    if (log_) {
      lo_ = std::floor(std::log10(lo));
      hi_ = std::ceil(std::log10(hi));
      if (hi_ <= lo_) hi_ = lo_ + 1.0;
      for (double d = lo_; d <= hi_; d += 1.0) ticks_.push_back(std::pow(10.0, d));
    } else {
      if (hi <= lo) {
        lo -= 0.5;
        hi += 0.5;
      }
      const double raw = (hi - lo) / 5.0;
      const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
      const double norm = raw / magnitude;
      const double step =
          (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * magnitude;
      const double first = std::floor(lo / step);
      const double last = std::ceil(hi / step);
      lo_ = first * step;
      hi_ = last * step;
      for (double i = first; i <= last; i += 1.0) ticks_.push_back(i * step);
    }
  }

  double map(double v) const {
    const double s = log_ ? std::log10(v) : v;
    return pixel_lo_ + (s - lo_) / (hi_ - lo_) * (pixel_hi_ - pixel_lo_);
  }
  const std::vector<double>& ticks() const { return ticks_; }

 private:
  bool log_;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double pixel_lo_;
  double pixel_hi_;
  std::vector<double> ticks_;
};

void open_svg(std::ostringstream& out, const ChartStyle& style) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width
      << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width
      << ' ' << style.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\""
      << style.height << "\" fill=\"#ffffff\"/>\n";
  if (!style.title.empty()) {
    out << "<text x=\"" << coord(style.width / 2.0)
        << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
        << escape(style.title) << "</text>\n";
  }
}

void axis_labels(std::ostringstream& out, const ChartStyle& style,
                 const Margins& m) {
  const double plot_mid_x = (m.left + style.width - m.right) / 2.0;
  const double plot_mid_y = (m.top + style.height - m.bottom) / 2.0;
  out << "<text x=\"" << coord(plot_mid_x) << "\" y=\""
      << coord(style.height - 20.0) << "\" text-anchor=\"middle\">"
      << escape(style.x_label) << "</text>\n"
      << "<text x=\"20\" y=\"" << coord(plot_mid_y)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << coord(plot_mid_y) << ")\">" << escape(style.y_label) << "</text>\n";
}

double row_x(const SweepResult& result, const SweepRow& row) {
  if (result.kind == SweepKind::kBits) return static_cast<double>(*row.bits);
  return row.timing->multiplier();
}

}  // namespace

std::string_view to_string(ChartMetric metric) {
  switch (metric) {
    case ChartMetric::kMaxError:
      return "max_err";
    case ChartMetric::kMaxErrorPercent:
      return "max_err_pct";
    case ChartMetric::kThdRatio:
      return "thd_ratio";
    case ChartMetric::kThdDb:
      return "thd_db";
    case ChartMetric::kPaperBound:
      return "paper_bound";
    case ChartMetric::kStrictBound:
      return "strict_bound";
  }
  return "max_err";
}

std::optional<ChartMetric> parse_chart_metric(std::string_view text) {
  for (const auto m : {ChartMetric::kMaxError, ChartMetric::kMaxErrorPercent,
                       ChartMetric::kThdRatio, ChartMetric::kThdDb,
                       ChartMetric::kPaperBound, ChartMetric::kStrictBound}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::string color_hex(Rgb color) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "#";
  for (const std::uint8_t c : {color.r, color.g, color.b}) {
    out += kDigits[c >> 4];
    out += kDigits[c & 0xF];
  }
  return out;
}

Rgb ramp_color(const ChartStyle& style, double t) {
  t = std::clamp(std::isnan(t) ? 0.0 : t, 0.0, 1.0);
  auto blend = [t](std::uint8_t lo, std::uint8_t hi) {
    return static_cast<std::uint8_t>(
        std::lround(lo + t * (static_cast<double>(hi) - lo)));
  };
  return {blend(style.ramp_low.r, style.ramp_high.r),
          blend(style.ramp_low.g, style.ramp_high.g),
          blend(style.ramp_low.b, style.ramp_high.b)};
}

ChartStyle default_chart_style(SweepKind kind, ChartMetric metric) {
  ChartStyle style;
  style.y_label = metric_title(metric);
  switch (kind) {
    case SweepKind::kBits:
      style.kind = ChartKind::kLinearLine;
      style.x_label = "number of bits";
      style.log_y = metric != ChartMetric::kThdDb;
      style.title = metric_title(metric) + " vs. number of bits";
      break;
    case SweepKind::kMultiplier:
      style.kind = ChartKind::kLogXLine;
      style.x_label = "frequency multiplier";
      style.title = metric_title(metric) + " vs. frequency multiplier";
      break;
    case SweepKind::kGrid:
      style.kind = ChartKind::kHeatmap;
      style.x_label = "frequency multiplier";
      style.y_label = "number of bits";
      style.title = metric_title(metric);
      break;
  }
  return style;
}

std::string render_line_chart(const SweepResult& result, const ChartStyle& style,
                              std::span<const ChartMetric> series) {
  if (series.empty()) throw std::invalid_argument("no series selected");
  if (result.kind == SweepKind::kGrid) {
    throw std::invalid_argument("grid sweeps render as heatmaps");
  }
  if (result.rows.empty()) throw std::invalid_argument("empty sweep result");

  const bool log_x = style.kind == ChartKind::kLogXLine;
  std::vector<std::vector<std::pair<double, double>>> points(series.size());
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (const SweepRow& row : result.rows) {
      const double x = row_x(result, row);
      const auto y = metric_value(row, series[s]);
      if (!y || !std::isfinite(*y)) continue;
      if (style.log_y && *y <= 0.0) continue;
      if (log_x && x <= 0.0) continue;
      points[s].emplace_back(x, *y);
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, *y);
      y_hi = std::max(y_hi, *y);
    }
    if (points[s].empty()) {
      throw std::invalid_argument("series '" + std::string(to_string(series[s])) +
                                  "' has no drawable points");
    }
  }

  const Margins m;
  const double px_lo = m.left, px_hi = style.width - m.right;
  const double py_lo = style.height - m.bottom, py_hi = m.top;
  const Axis x_axis(x_lo, x_hi, log_x, px_lo, px_hi);
  const Axis y_axis(y_lo, y_hi, style.log_y, py_lo, py_hi);

  std::ostringstream out;
  open_svg(out, style);
  out << "<g class=\"grid\" stroke=\"#e0e0e0\" stroke-width=\"1\">\n";
  for (const double t : x_axis.ticks()) {
    const double x = x_axis.map(t);
    out << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(py_hi) << "\" x2=\""
        << coord(x) << "\" y2=\"" << coord(py_lo) << "\"/>\n";
  }
  for (const double t : y_axis.ticks()) {
    const double y = y_axis.map(t);
    out << "<line x1=\"" << coord(px_lo) << "\" y1=\"" << coord(y) << "\" x2=\""
        << coord(px_hi) << "\" y2=\"" << coord(y) << "\"/>\n";
  }
  out << "</g>\n<g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n"
      << "<line x1=\"" << coord(px_lo) << "\" y1=\"" << coord(py_lo) << "\" x2=\""
      << coord(px_hi) << "\" y2=\"" << coord(py_lo) << "\"/>\n"
      << "<line x1=\"" << coord(px_lo) << "\" y1=\"" << coord(py_lo) << "\" x2=\""
      << coord(px_lo) << "\" y2=\"" << coord(py_hi) << "\"/>\n</g>\n";
  out << "<g class=\"ticks\">\n";
  for (const double t : x_axis.ticks()) {
    out << "<text x=\"" << coord(x_axis.map(t)) << "\" y=\"" << coord(py_lo + 18.0)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (const double t : y_axis.ticks()) {
    out << "<text x=\"" << coord(px_lo - 6.0) << "\" y=\""
        << coord(y_axis.map(t) + 4.0) << "\" text-anchor=\"end\">"
        << tick_label(t) << "</text>\n";
  }
  out << "</g>\n";
  axis_labels(out, style, m);

  for (std::size_t s = 0; s < series.size(); ++s) {
    const Rgb color = kSeriesColors[s % kSeriesColors.size()];
    out << "<polyline class=\"series\" data-series=\"" << to_string(series[s])
        << "\" fill=\"none\" stroke=\"" << color_hex(color)
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < points[s].size(); ++i) {
      if (i > 0) out << ' ';
      out << coord(x_axis.map(points[s][i].first)) << ','
          << coord(y_axis.map(points[s][i].second));
    }
    out << "\"/>\n";
    out << "<text x=\"" << coord(px_hi - 4.0) << "\" y=\""
        << coord(m.top + 16.0 * static_cast<double>(s + 1))
        << "\" text-anchor=\"end\" fill=\"" << color_hex(color) << "\">"
        << escape(metric_title(series[s])) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_heatmap(const SweepResult& result, const ChartStyle& style,
                           ChartMetric metric) {
  if (result.rows.empty()) throw std::invalid_argument("empty sweep result");
  std::vector<int> bits;
  std::map<int, std::vector<const SweepRow*>> by_bits;
  for (const SweepRow& row : result.rows) {
    if (!row.bits || !row.m_requested) {
      throw std::invalid_argument("heatmap needs rows with bits and multiplier");
    }
    if (by_bits.find(*row.bits) == by_bits.end()) bits.push_back(*row.bits);
    by_bits[*row.bits].push_back(&row);
  }
  std::sort(bits.begin(), bits.end());
  const auto& first = by_bits.at(bits.front());
  for (const int b : bits) {
    const auto& cells = by_bits.at(b);
    bool same = cells.size() == first.size();
    for (std::size_t i = 0; same && i < cells.size(); ++i) {
      same = *cells[i]->m_requested == *first[i]->m_requested;
    }
    if (!same) throw std::invalid_argument("ragged grid: bit rows differ in multipliers");
  }

  double anchor_low = 0.0;
  double anchor_high = 1.0;
  if (metric != ChartMetric::kMaxError) {
    anchor_low = INFINITY;
    anchor_high = -INFINITY;
    for (const SweepRow& row : result.rows) {
      const auto v = metric_value(row, metric);
      if (!v || !std::isfinite(*v)) continue;
      anchor_low = std::min(anchor_low, *v);
      anchor_high = std::max(anchor_high, *v);
    }
    if (!std::isfinite(anchor_low)) {
      throw std::invalid_argument("metric has no values on this grid");
    }
  }

  const Margins m;
  const std::size_t cols = first.size();
  const std::size_t rows = bits.size();
  const double plot_w = style.width - m.left - m.right - 70.0;
  const double plot_h = style.height - m.top - m.bottom;
  const double cell_w = plot_w / static_cast<double>(cols);
  const double cell_h = plot_h / static_cast<double>(rows);

  std::ostringstream out;
  open_svg(out, style);
  out << "<metadata>{\"metric\":\"" << to_string(metric) << "\",\"anchor_low\":"
      << format_number(anchor_low) << ",\"anchor_high\":" << format_number(anchor_high)
      << ",\"color_low\":\"" << color_hex(style.ramp_low) << "\",\"color_high\":\""
      << color_hex(style.ramp_high) << "\"}</metadata>\n";
  out << "<g class=\"cells\">\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& cells = by_bits.at(bits[r]);
    const double y = m.top + plot_h - static_cast<double>(r + 1) * cell_h;
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = metric_value(*cells[c], metric);
      Rgb fill = kMissingCell;
      if (v && std::isfinite(*v)) {
        const double span = anchor_high - anchor_low;
        fill = ramp_color(style, span > 0.0 ? (*v - anchor_low) / span : 0.0);
      }
      out << "<rect class=\"cell\" x=\"" << coord(m.left + static_cast<double>(c) * cell_w)
          << "\" y=\"" << coord(y) << "\" width=\"" << coord(cell_w)
          << "\" height=\"" << coord(cell_h) << "\" fill=\"" << color_hex(fill)
          << "\" data-bits=\"" << bits[r] << "\" data-m=\""
          << format_number(*cells[c]->m_requested) << "\"/>\n";
    }
  }
  out << "</g>\n<g class=\"ticks\">\n";
  const std::size_t row_stride = std::max<std::size_t>(1, (rows + 11) / 12);
  for (std::size_t r = 0; r < rows; r += row_stride) {
    out << "<text x=\"" << coord(m.left - 6.0) << "\" y=\""
        << coord(m.top + plot_h - (static_cast<double>(r) + 0.5) * cell_h + 4.0)
        << "\" text-anchor=\"end\">" << bits[r] << "</text>\n";
  }
  const std::size_t col_stride = std::max<std::size_t>(1, (cols + 9) / 10);
  for (std::size_t c = 0; c < cols; c += col_stride) {
    out << "<text x=\"" << coord(m.left + (static_cast<double>(c) + 0.5) * cell_w)
        << "\" y=\"" << coord(m.top + plot_h + 18.0) << "\" text-anchor=\"middle\">"
        << tick_label(first[c]->timing->multiplier()) << "</text>\n";
  }
  out << "</g>\n";
  axis_labels(out, style, m);

  const double bar_x = style.width - m.right - 40.0;
  out << "<g class=\"colorbar\">\n"
      << "<rect x=\"" << coord(bar_x) << "\" y=\"" << coord(m.top) << "\" width=\"20\" height=\"20\" fill=\""
      << color_hex(style.ramp_high) << "\"/>\n"
      << "<text x=\"" << coord(bar_x + 10.0) << "\" y=\"" << coord(m.top + 34.0)
      << "\" text-anchor=\"middle\">" << tick_label(anchor_high) << "</text>\n"
      << "<rect x=\"" << coord(bar_x) << "\" y=\"" << coord(m.top + plot_h - 20.0)
      << "\" width=\"20\" height=\"20\" fill=\"" << color_hex(style.ramp_low) << "\"/>\n"
      << "<text x=\"" << coord(bar_x + 10.0) << "\" y=\"" << coord(m.top + plot_h - 26.0)
      << "\" text-anchor=\"middle\">" << tick_label(anchor_low) << "</text>\n"
      << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace ddsm
