#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

namespace ddsm {

/// Ideal target sine: unit amplitude, zero phase, frequency f.
class SignalSpec {
 public:
  explicit SignalSpec(double frequency_hz);

  double frequency_hz() const { return frequency_hz_; }
  double period_s() const { return 1.0 / frequency_hz_; }

 private:
  double frequency_hz_;
};

enum class QuantizationMode { kFloor, kRound, kCeiling };

std::string_view to_string(QuantizationMode mode);
/// Parses "floor", "round" or "ceiling"; std::nullopt otherwise.
std::optional<QuantizationMode> parse_quantization_mode(std::string_view text);

/// DAC resolution. Levels are integer multiples of 2^-(B-1); B is capped at 52
/// so every level and the scale factor are exact doubles.
class QuantizerConfig {
 public:
  static constexpr int kMinBits = 1;
  static constexpr int kMaxBits = 52;

  explicit QuantizerConfig(int bits,
                           QuantizationMode mode = QuantizationMode::kFloor);

  int bits() const { return bits_; }
  QuantizationMode mode() const { return mode_; }
  /// 2^(B-1)
  double scale() const;
  /// 2^-(B-1), one level step on the unit-amplitude scale.
  double lsb() const;

 private:
  int bits_;
  QuantizationMode mode_;
};

/// Update interval expressed as the exact frequency multiplier M = T/dt = p/q.
/// Stored in lowest terms; the combined period of target and step grid is q*T
/// and holds exactly p steps.
class TimingConfig {
 public:
  TimingConfig(std::int64_t multiplier_num, std::int64_t multiplier_den = 1);

  std::int64_t multiplier_num() const { return num_; }
  std::int64_t multiplier_den() const { return den_; }
  double multiplier() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  /// dt = q / (p f)
  double time_gap(const SignalSpec& spec) const;

  friend bool operator==(const TimingConfig&, const TimingConfig&) = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

struct TargetModel {};
struct QuantizedModel {
  QuantizerConfig quantizer;
};
struct HeldModel {
  TimingConfig timing;
};
struct DigitizedModel {
  TimingConfig timing;
  QuantizerConfig quantizer;
};

class WaveformModel {
 public:
  using Kind = std::variant<TargetModel, QuantizedModel, HeldModel, DigitizedModel>;

  static WaveformModel target(SignalSpec spec);
  static WaveformModel quantized(SignalSpec spec, QuantizerConfig quantizer);
  static WaveformModel held(SignalSpec spec, TimingConfig timing);
  static WaveformModel digitized(SignalSpec spec, TimingConfig timing,
                                 QuantizerConfig quantizer);

  const SignalSpec& spec() const { return spec_; }
  const Kind& kind() const { return kind_; }
  std::string_view name() const;

  /// True for the held and digitized (piecewise constant) models.
  bool is_stepped() const;
  std::optional<TimingConfig> timing() const;
  std::optional<QuantizerConfig> quantizer() const;

  /// Number of target periods in one combined period (q, or 1 without timing).
  std::int64_t combined_periods() const;

 private:
  WaveformModel(SignalSpec spec, Kind kind) : spec_(spec), kind_(kind) {}

  SignalSpec spec_;
  Kind kind_;
};

double target_sample(const SignalSpec& spec, double t);
double quantize_sample(double x, const QuantizerConfig& quantizer);
double held_sample(const SignalSpec& spec, const TimingConfig& timing, double t);
double digitized_sample(const SignalSpec& spec, const TimingConfig& timing,
                        const QuantizerConfig& quantizer, double t);
/// Dispatches to the evaluator matching model.kind().
double sample(const WaveformModel& model, double t);

// Phase-domain evaluators. `cycles` is f*t carried in extended precision, so
// probe grids generated as exact ratios keep their digits near step edges and
// level crossings.

/// f*t in extended precision; rejects negative or non-finite t.
long double cycles_at(const SignalSpec& spec, double t);

/// sin(2*pi*cycles). Reduced to a quarter period first; exact at multiples of
/// a quarter cycle (0, +-1).
double unit_sine(long double cycles);

/// sin(2*pi*num/den) with the reduction done in integers.
double unit_sine_ratio(std::int64_t num, std::int64_t den);

/// floor(t/dt) computed from cycles via the exact ratio p/q. Values within
/// double resolution of an integer step boundary snap onto that boundary.
std::int64_t step_index(long double cycles, const TimingConfig& timing);

/// Output level of a stepped model during step k.
double step_value(const WaveformModel& model, std::int64_t step);

double sample_at_cycles(const WaveformModel& model, long double cycles);

}  // namespace ddsm
