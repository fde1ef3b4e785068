#include "ddsm/report.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace ddsm {

namespace {

std::string optional_number(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

std::string multiplier_echo(const SweepSpec& spec) {
  if (!spec.multipliers.empty()) {
    std::string out;
    for (const double m : multiplier_values(spec)) {
      if (!out.empty()) out += ' ';
      out += format_number(m);
    }
    return out;
  }
  return "10^" + format_number(spec.multiplier.decades_from) + "..10^" +
         format_number(spec.multiplier.decades_to) + ", " +
         std::to_string(spec.multiplier.points_per_decade) + " per decade";
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  const double magnitude = std::fabs(value);
  const auto format = (magnitude >= 1e-4 && magnitude < 1e6)
                          ? std::chars_format::fixed
                          : std::chars_format::scientific;
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, format);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buffer, end);
}

std::string flags_field(const RowFlags& flags) {
  std::string out;
  if (flags.subnyquist) out = "subnyquist";
  if (flags.dft_cap_exceeded) {
    if (!out.empty()) out += '|';
    out += "dft_cap_exceeded";
  }
  return out.empty() ? "-" : out;
}

std::string sweep_csv_header(SweepKind kind) {
  switch (kind) {
    case SweepKind::kBits:
      return "bits,mode,max_err,max_err_pct,eq5_bound,thd_ratio,thd_db";
    case SweepKind::kMultiplier:
      return "m_requested,m_num,m_den,max_err,eq14_bound,strict_bound,"
             "thd_ratio,thd_db,flags";
    case SweepKind::kGrid:
      return "bits,m_requested,m_num,m_den,max_err,eq16_bound,strict_bound,"
             "thd_ratio,thd_db,flags";
  }
  return {};
}

std::string sweep_to_csv(const SweepResult& result) {
  const SweepSpec& spec = result.spec;
  std::ostringstream out;
  out << "# ddsmetrics sweep " << to_string(result.kind) << '\n'
      << "# schema_version: " << result.schema_version << '\n';
  if (result.kind != SweepKind::kMultiplier) {
    out << "# bits: " << spec.bits.from << ".." << spec.bits.to << " step "
        << spec.bits.stride << '\n'
        << "# mode: " << to_string(spec.mode) << '\n';
  }
  if (result.kind != SweepKind::kBits) {
    out << "# multipliers: " << multiplier_echo(spec) << '\n'
        << "# qmax: " << spec.q_max << '\n';
  }
  out << "# samples_per_period: " << spec.plan.samples_per_period << '\n'
      << "# epsilon_fraction: " << format_number(spec.plan.epsilon_fraction)
      << '\n'
      << "# probe_discontinuities: "
      << (spec.plan.probe_discontinuities ? "true" : "false") << '\n'
      << "# samples_per_step: " << spec.samples_per_step << '\n'
      << "# dft_cap: " << spec.dft_cap << '\n';
  out << sweep_csv_header(result.kind) << '\n';

  for (const SweepRow& row : result.rows) {
    const MetricsReport& r = row.report;
    const std::string thd_ratio = optional_number(r.thd_ratio);
    const std::string thd_db = optional_number(r.thd_db);
    switch (result.kind) {
      case SweepKind::kBits:
        out << *row.bits << ',' << to_string(spec.mode) << ','
            << format_number(r.max_abs_error) << ','
            << format_number(r.max_abs_error_percent()) << ','
            << format_number(r.paper_bound) << ',' << thd_ratio << ','
            << thd_db << '\n';
        break;
      case SweepKind::kMultiplier:
        out << format_number(*row.m_requested) << ','
            << row.timing->multiplier_num() << ','
            << row.timing->multiplier_den() << ','
            << format_number(r.max_abs_error) << ','
            << format_number(r.paper_bound) << ','
            << format_number(r.strict_bound) << ',' << thd_ratio << ','
            << thd_db << ',' << flags_field(row.flags) << '\n';
        break;
      case SweepKind::kGrid:
        out << *row.bits << ',' << format_number(*row.m_requested) << ','
            << row.timing->multiplier_num() << ','
            << row.timing->multiplier_den() << ','
            << format_number(r.max_abs_error) << ','
            << format_number(r.paper_bound) << ','
            << format_number(r.strict_bound) << ',' << thd_ratio << ','
            << thd_db << ',' << flags_field(row.flags) << '\n';
        break;
    }
  }
  return out.str();
}

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
  const auto quantizer = report.model.quantizer();
  const auto timing = report.model.timing();
  nlohmann::ordered_json j;
  j["model"] = std::string(report.model.name());
  j["freq_hz"] = report.model.spec().frequency_hz();
  j["bits"] = quantizer ? nlohmann::ordered_json(quantizer->bits()) : nullptr;
  j["mode"] = quantizer ? nlohmann::ordered_json(std::string(to_string(quantizer->mode())))
                        : nullptr;
  j["m_num"] = timing ? nlohmann::ordered_json(timing->multiplier_num()) : nullptr;
  j["m_den"] = timing ? nlohmann::ordered_json(timing->multiplier_den()) : nullptr;
  j["max_abs_error"] = report.max_abs_error;
  j["argmax_time_s"] = report.argmax_time_s;
  j["thd_ratio"] = report.thd_ratio ? nlohmann::ordered_json(*report.thd_ratio) : nullptr;
  j["thd_db"] = report.thd_db ? nlohmann::ordered_json(*report.thd_db) : nullptr;
  j["paper_bound"] = report.paper_bound;
  j["strict_bound"] = report.strict_bound;
  j["schema_version"] = kReportSchemaVersion;
  return j;
}

std::string report_to_csv(const MetricsReport& report) {
  const auto j = report_to_json(report);
  std::string header;
  std::string row;
  for (const auto& [key, value] : j.items()) {
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    if (value.is_null()) continue;
    if (value.is_string()) {
      row += value.get<std::string>();
    } else if (value.is_number_float()) {
      row += format_number(value.get<double>());
    } else {
      row += value.dump();
    }
  }
  return header + '\n' + row + '\n';
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool have_header = false;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace ddsm
