#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ddsm/metrics.hpp"
#include "ddsm/sweeps.hpp"

namespace ddsm {

inline constexpr int kReportSchemaVersion = 1;

/// Locale-independent shortest round-trip text. Plain decimal for
/// |x| in [1e-4, 1e6) and zero, scientific with a lowercase 'e' otherwise.
std::string format_number(double value);

/// "-" when no flag is set, else flag names joined by '|'.
std::string flags_field(const RowFlags& flags);

std::string sweep_csv_header(SweepKind kind);

/// Comment lines echoing the sweep settings, the header row, then one line per row.
/// Absent THD values are empty fields.
std::string sweep_to_csv(const SweepResult& result);

/// Flat object; inapplicable or absent fields are null.
nlohmann::ordered_json report_to_json(const MetricsReport& report);

/// Header plus one data row with the JSON keys as columns.
std::string report_to_csv(const MetricsReport& report);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads the comma-separated output of this module; '#' lines are skipped.
CsvTable parse_csv(std::string_view text);

}  // namespace ddsm
