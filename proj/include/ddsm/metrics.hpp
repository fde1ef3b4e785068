#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ddsm/signal_models.hpp"

namespace ddsm {

/// How the supremum of |model - target| is probed over one combined period.
struct SamplingPlan {
  /// Uniform probes per combined period.
  std::int64_t samples_per_period = 100000;
  /// Offset placed before step edges and around level crossings, as a
  /// fraction of the combined period.
  double epsilon_fraction = 1e-9;
  bool probe_discontinuities = true;

  /// Throws std::invalid_argument unless N >= 64 and epsilon in (0, 1e-6].
  void validate() const;
};

inline constexpr int kDefaultSamplesPerStep = 64;
inline constexpr int kMinSamplesPerStep = 16;
inline constexpr std::int64_t kDefaultDftCap = std::int64_t{1} << 24;

enum class SpectrumMethod { kDft, kExactStaircase };

std::string_view to_string(SpectrumMethod method);

/// One-sided spectrum on the combined-period grid. Bin n sits at
/// n * base_frequency_hz; the target frequency is bin fundamental_index.
struct Spectrum {
  double base_frequency_hz = 0.0;
  std::int64_t fundamental_index = 1;
  double dc = 0.0;
  /// Peak amplitudes of bins 1, 2, ..., amplitudes.size().
  std::vector<double> amplitudes;
  /// Mean-square power not carried by dc or the listed bins (the Nyquist bin
  /// of a DFT, the truncated tail of a Fourier series). Counted as distortion.
  double residual_power = 0.0;
  SpectrumMethod method = SpectrumMethod::kDft;

  /// Peak amplitude of bin n >= 1; zero past the listed range.
  double amplitude(std::int64_t bin) const;
  /// dc^2 + sum A_n^2 / 2 over the listed bins.
  double captured_power() const;
};

struct ThdResult {
  double ratio = 0.0;
  /// 20 log10(ratio); absent when ratio is exactly zero.
  std::optional<double> db;
};

struct MaxAbsError {
  double value = 0.0;
  double argmax_time_s = 0.0;
};

struct MetricsReport {
  WaveformModel model;
  double max_abs_error = 0.0;
  double argmax_time_s = 0.0;
  std::optional<double> thd_ratio;
  std::optional<double> thd_db;
  double paper_bound = 0.0;
  double strict_bound = 0.0;

  double max_abs_error_percent() const { return 100.0 * max_abs_error; }
};

/// Sorted, deduplicated probe times over [0, q*T).
std::vector<double> probe_times(const WaveformModel& model,
                                const SamplingPlan& plan);

/// Largest |model(t) - target(t)| over the probe set and the first probe
/// attaining it.
MaxAbsError max_abs_error(const WaveformModel& model, const SamplingPlan& plan);

/// Coherent, unwindowed DFT over exactly one combined period. Stepped models
/// are sampled samples_per_step times per step; the others at
/// max(2^18, 4096 q) points. Throws ResourceError past `cap` points.
Spectrum spectrum_dft(const WaveformModel& model,
                      int samples_per_step = kDefaultSamplesPerStep,
                      std::int64_t cap = kDefaultDftCap);

/// Closed-form Fourier series of a held or digitized staircase.
/// Throws UnsupportedModelError for the target and quantized models.
Spectrum spectrum_exact_staircase(const WaveformModel& model);

/// Total distortion relative to the fundamental; every non-DC, non-fundamental
/// bin counts. Throws DegenerateSignalError without a fundamental.
ThdResult thd(const Spectrum& spectrum);

/// Bounds matching the model kind: the closed-form estimate and a sound bound.
struct BoundPair {
  double paper = 0.0;
  double strict = 0.0;
};
BoundPair bounds_for(const WaveformModel& model);

/// Assembles a report from already computed parts.
MetricsReport make_report(const WaveformModel& model, const MaxAbsError& error,
                          const std::optional<ThdResult>& distortion);

/// Max error, DFT THD and bounds in one call. A zero fundamental leaves THD
/// absent; resource errors propagate.
MetricsReport evaluate(const WaveformModel& model, const SamplingPlan& plan,
                       int samples_per_step = kDefaultSamplesPerStep,
                       std::int64_t cap = kDefaultDftCap);

}  // namespace ddsm
