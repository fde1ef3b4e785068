#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ddsm/metrics.hpp"
#include "ddsm/signal_models.hpp"

namespace ddsm {

inline constexpr int kSweepSchemaVersion = 1;

struct BitsAxis {
  int from = 1;
  int to = 16;
  int stride = 1;
};

/// Log-spaced multipliers 10^(decades_from + k / points_per_decade), both
/// endpoints included.
struct MultiplierAxis {
  double decades_from = 0.5;
  double decades_to = 4.0;
  int points_per_decade = 30;
};

struct SweepSpec {
  BitsAxis bits;
  MultiplierAxis multiplier;
  /// Explicit multipliers; when nonempty they replace the log-spaced axis.
  std::vector<double> multipliers;
  QuantizationMode mode = QuantizationMode::kFloor;
  /// Largest denominator allowed when snapping a multiplier to p/q.
  std::int64_t q_max = 16;
  SamplingPlan plan;
  int samples_per_step = kDefaultSamplesPerStep;
  std::int64_t dft_cap = kDefaultDftCap;
  /// Worker threads; 0 picks the hardware concurrency, 1 runs inline.
  /// Has no effect on the result.
  unsigned threads = 0;

  void validate() const;
};

enum class SweepKind { kBits, kMultiplier, kGrid };

std::string_view to_string(SweepKind kind);
std::optional<SweepKind> parse_sweep_kind(std::string_view text);

struct RowFlags {
  /// Snapped multiplier below 2 updates per period.
  bool subnyquist = false;
  /// DFT length would pass the cap; THD left absent.
  bool dft_cap_exceeded = false;
};

struct SweepRow {
  std::optional<int> bits;
  std::optional<double> m_requested;
  std::optional<TimingConfig> timing;
  MetricsReport report;
  RowFlags flags;
};

struct SweepResult {
  SweepKind kind = SweepKind::kBits;
  SweepSpec spec;
  /// Sorted by (bits, multiplier) ascending.
  std::vector<SweepRow> rows;
  int schema_version = kSweepSchemaVersion;
};

/// Closest p/q to `requested` with q <= q_max; ties go to the smaller q, then
/// the smaller p. p is at least 1.
TimingConfig snap_multiplier(double requested, std::int64_t q_max);

std::vector<double> multiplier_values(const MultiplierAxis& axis);
/// The explicit list (sorted ascending) if given, else the log-spaced axis.
std::vector<double> multiplier_values(const SweepSpec& spec);
std::vector<int> bit_values(const BitsAxis& axis);

/// Quantized model (no hold), one row per bit count.
SweepResult sweep_bits(const SweepSpec& spec);
/// Held model (unlimited resolution), one row per multiplier.
SweepResult sweep_multiplier(const SweepSpec& spec);
/// Digitized model, rows (bits outer, multiplier inner).
SweepResult sweep_grid(const SweepSpec& spec);

SweepResult run_sweep(SweepKind kind, const SweepSpec& spec);

}  // namespace ddsm
