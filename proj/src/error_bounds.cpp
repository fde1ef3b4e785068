#include "ddsm/error_bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ddsm/signal_models.hpp"

namespace ddsm {

namespace {

constexpr double kCap = 2.0;

void require_positive(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument(std::string(what) +
                                " must be positive and finite, got " +
                                std::to_string(value));
  }
}

}  // namespace

double quantization_error_bound(int bits) {
  if (bits < QuantizerConfig::kMinBits || bits > QuantizerConfig::kMaxBits) {
    throw std::invalid_argument("bit count must be in [1, 52], got " +
                                std::to_string(bits));
  }
  return std::ldexp(1.0, 1 - bits);
}

double full_scale_range() { return 2.0; }

double min_clock_frequency(double dt) {
  require_positive(dt, "time gap");
  return 1.0 / dt;
}

double max_phase_shift(double frequency_hz, double dt) {
  require_positive(frequency_hz, "frequency");
  if (!std::isfinite(dt) || dt < 0.0) {
    throw std::invalid_argument("time gap must be nonnegative, got " +
                                std::to_string(dt));
  }
  return 2.0 * std::numbers::pi * frequency_hz * dt;
}

double held_error_bound(double frequency_hz, double dt, BoundVariant variant) {
  require_positive(frequency_hz, "frequency");
  require_positive(dt, "time gap");
  const double cycles_per_step = frequency_hz * dt;
  if (variant == BoundVariant::kPaper) {
    return cycles_per_step <= 0.25 ? unit_sine(cycles_per_step) : kCap;
  }
  // max over theta of |sin(theta + d) - sin(theta)| is 2 sin(d / 2)
  return cycles_per_step <= 0.5 ? 2.0 * unit_sine(cycles_per_step / 2.0)
                                : kCap;
}

double digitized_error_bound(double frequency_hz, double dt, int bits,
                             BoundVariant variant) {
  const double lsb = quantization_error_bound(bits);
  if (variant == BoundVariant::kStrict) {
    return lsb + held_error_bound(frequency_hz, dt, BoundVariant::kStrict);
  }
  require_positive(frequency_hz, "frequency");
  require_positive(dt, "time gap");
  const double scale = std::ldexp(1.0, bits - 1);
  return (1.0 + std::fabs(scale * unit_sine(frequency_hz * dt))) / scale;
}

}  // namespace ddsm
