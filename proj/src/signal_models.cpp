#include "ddsm/signal_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ddsm {

namespace {

constexpr long double kHalfPi = 1.5707963267948966192313216916397514L;

// Largest step index we accept; keeps k*q reductions and the long double
// step arithmetic well inside exact range.
constexpr long double kMaxStepIndex = 0x1p62L;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// sin((pi/2) * (quadrant + fraction)) with fraction in [0, 1).
double quarter_sine(std::int64_t quadrant, long double fraction) {
  const long double angle = kHalfPi * fraction;
  switch (quadrant & 3) {
    case 0:
      return static_cast<double>(std::sin(angle));
    case 1:
      return static_cast<double>(std::cos(angle));
    case 2:
      return static_cast<double>(-std::sin(angle));
    default:
      return static_cast<double>(-std::cos(angle));
  }
}

double held_at_step(const TimingConfig& timing, std::int64_t step) {
  const std::int64_t p = timing.multiplier_num();
  const std::int64_t q = timing.multiplier_den();
  // Phase of the step start, in cycles: step * q / p.
  const auto residue = static_cast<std::int64_t>(
      (static_cast<__int128>(step % p) * q) % p);
  return unit_sine_ratio(residue, p);
}

}  // namespace

SignalSpec::SignalSpec(double frequency_hz) : frequency_hz_(frequency_hz) {
  if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0) {
    throw std::invalid_argument("frequency must be positive and finite, got " +
                                std::to_string(frequency_hz));
  }
}

std::string_view to_string(QuantizationMode mode) {
  switch (mode) {
    case QuantizationMode::kFloor:
      return "floor";
    case QuantizationMode::kRound:
      return "round";
    case QuantizationMode::kCeiling:
      return "ceiling";
  }
  return "floor";
}

std::optional<QuantizationMode> parse_quantization_mode(std::string_view text) {
  if (text == "floor") return QuantizationMode::kFloor;
  if (text == "round") return QuantizationMode::kRound;
  if (text == "ceiling") return QuantizationMode::kCeiling;
  return std::nullopt;
}

QuantizerConfig::QuantizerConfig(int bits, QuantizationMode mode)
    : bits_(bits), mode_(mode) {
  if (bits < kMinBits || bits > kMaxBits) {
    throw std::invalid_argument("bit count must be in [1, 52], got " +
                                std::to_string(bits));
  }
}

double QuantizerConfig::scale() const { return std::ldexp(1.0, bits_ - 1); }

double QuantizerConfig::lsb() const { return std::ldexp(1.0, 1 - bits_); }

TimingConfig::TimingConfig(std::int64_t multiplier_num,
                           std::int64_t multiplier_den)
    : num_(multiplier_num), den_(multiplier_den) {
  if (num_ < 1 || den_ < 1) {
    throw std::invalid_argument(
        "frequency multiplier must be a ratio of positive integers, got " +
        std::to_string(num_) + "/" + std::to_string(den_));
  }
  const std::int64_t g = std::gcd(num_, den_);
  num_ /= g;
  den_ /= g;
}

double TimingConfig::time_gap(const SignalSpec& spec) const {
  return static_cast<double>(den_) /
         (static_cast<double>(num_) * spec.frequency_hz());
}

WaveformModel WaveformModel::target(SignalSpec spec) {
  return {spec, TargetModel{}};
}

WaveformModel WaveformModel::quantized(SignalSpec spec,
                                       QuantizerConfig quantizer) {
  return {spec, QuantizedModel{quantizer}};
}

WaveformModel WaveformModel::held(SignalSpec spec, TimingConfig timing) {
  return {spec, HeldModel{timing}};
}

WaveformModel WaveformModel::digitized(SignalSpec spec, TimingConfig timing,
                                       QuantizerConfig quantizer) {
  return {spec, DigitizedModel{timing, quantizer}};
}

std::string_view WaveformModel::name() const {
  return std::visit(Overloaded{
                        [](const TargetModel&) { return "target"; },
                        [](const QuantizedModel&) { return "quantized"; },
                        [](const HeldModel&) { return "held"; },
                        [](const DigitizedModel&) { return "digitized"; },
                    },
                    kind_);
}

bool WaveformModel::is_stepped() const {
  return std::holds_alternative<HeldModel>(kind_) ||
         std::holds_alternative<DigitizedModel>(kind_);
}

std::optional<TimingConfig> WaveformModel::timing() const {
  if (const auto* held = std::get_if<HeldModel>(&kind_)) return held->timing;
  if (const auto* dig = std::get_if<DigitizedModel>(&kind_)) return dig->timing;
  return std::nullopt;
}

std::optional<QuantizerConfig> WaveformModel::quantizer() const {
  if (const auto* q = std::get_if<QuantizedModel>(&kind_)) return q->quantizer;
  if (const auto* dig = std::get_if<DigitizedModel>(&kind_))
    return dig->quantizer;
  return std::nullopt;
}

std::int64_t WaveformModel::combined_periods() const {
  const auto t = timing();
  return t ? t->multiplier_den() : 1;
}

long double cycles_at(const SignalSpec& spec, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("time must be finite and nonnegative, got " +
                                std::to_string(t));
  }
  return static_cast<long double>(spec.frequency_hz()) *
         static_cast<long double>(t);
}

double unit_sine(long double cycles) {
  const long double turn = cycles - std::floor(cycles);
  const long double quarters = 4.0L * turn;
  const long double whole = std::floor(quarters);
  return quarter_sine(static_cast<std::int64_t>(whole), quarters - whole);
}

double unit_sine_ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("denominator must be positive");
  std::int64_t r = num % den;
  if (r < 0) r += den;
  const __int128 quarters = static_cast<__int128>(r) * 4;
  const auto quadrant = static_cast<std::int64_t>(quarters / den);
  const auto rest = static_cast<std::int64_t>(quarters % den);
  return quarter_sine(quadrant, static_cast<long double>(rest) /
                                    static_cast<long double>(den));
}

std::int64_t step_index(long double cycles, const TimingConfig& timing) {
  const long double x = cycles *
                        static_cast<long double>(timing.multiplier_num()) /
                        static_cast<long double>(timing.multiplier_den());
  if (!(x >= 0.0L) || x > kMaxStepIndex) {
    throw std::invalid_argument("time outside the representable step range");
  }
  const long double nearest = std::nearbyint(x);
  const long double tolerance =
      4.0L * std::numeric_limits<double>::epsilon() * std::max(1.0L, x);
  if (std::fabs(x - nearest) <= tolerance) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::floor(x));
}

double quantize_sample(double x, const QuantizerConfig& quantizer) {
  if (!(std::fabs(x) <= 1.0)) {
    throw std::domain_error("quantizer input must lie in [-1, 1], got " +
                            std::to_string(x));
  }
  // x * 2^(B-1) is exact; so are the floor/ceil and the final division.
  const double scaled = x * quantizer.scale();
  double level = 0.0;
  switch (quantizer.mode()) {
    case QuantizationMode::kFloor:
      level = std::floor(scaled);
      break;
    case QuantizationMode::kRound: {
      // floor(y + 1/2) without the rounding of the addition itself.
      const double below = std::floor(scaled);
      level = (scaled - below >= 0.5) ? below + 1.0 : below;
      break;
    }
    case QuantizationMode::kCeiling:
      level = std::ceil(scaled);
      break;
  }
  return level / quantizer.scale();
}

double target_sample(const SignalSpec& spec, double t) {
  return unit_sine(cycles_at(spec, t));
}

double held_sample(const SignalSpec& spec, const TimingConfig& timing,
                   double t) {
  return held_at_step(timing, step_index(cycles_at(spec, t), timing));
}

double digitized_sample(const SignalSpec& spec, const TimingConfig& timing,
                        const QuantizerConfig& quantizer, double t) {
  return quantize_sample(held_sample(spec, timing, t), quantizer);
}

double sample(const WaveformModel& model, double t) {
  return sample_at_cycles(model, cycles_at(model.spec(), t));
}

double step_value(const WaveformModel& model, std::int64_t step) {
  if (step < 0) throw std::invalid_argument("step index must be nonnegative");
  return std::visit(
      Overloaded{
          [&](const HeldModel& m) { return held_at_step(m.timing, step); },
          [&](const DigitizedModel& m) {
            return quantize_sample(held_at_step(m.timing, step), m.quantizer);
          },
          [](const auto&) -> double {
            throw std::invalid_argument("model is not piecewise constant");
          },
      },
      model.kind());
}

double sample_at_cycles(const WaveformModel& model, long double cycles) {
  return std::visit(
      Overloaded{
          [&](const TargetModel&) { return unit_sine(cycles); },
          [&](const QuantizedModel& m) {
            return quantize_sample(unit_sine(cycles), m.quantizer);
          },
          [&](const HeldModel& m) {
            return held_at_step(m.timing, step_index(cycles, m.timing));
          },
          [&](const DigitizedModel& m) {
            return quantize_sample(
                held_at_step(m.timing, step_index(cycles, m.timing)),
                m.quantizer);
          },
      },
      model.kind());
}

}  // namespace ddsm
