#include "ddsm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ddsm/error_bounds.hpp"
#include "ddsm/errors.hpp"
#include "real_dft.hpp"

namespace ddsm {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

// Quantized models get crossing probes for every level while the level count
// stays below this; finer quantizers rely on the uniform grid alone.
constexpr std::int64_t kMaxCrossingLevels = std::int64_t{1} << 21;

constexpr std::int64_t kMaxProbes = std::int64_t{1} << 27;

constexpr std::int64_t kExactMinHarmonicsPerPeriod = 1024;
constexpr std::int64_t kExactMaxHarmonics = std::int64_t{1} << 22;
constexpr double kExactEarlyStop = 1e-10;
constexpr double kExactTailTolerance = 1e-5;

// A fundamental weaker than this is treated as absent.
constexpr double kMinFundamental = 1e-12;

long double wrap_unit(long double u) { return u - std::floor(u); }

std::vector<long double> probe_cycles(const WaveformModel& model,
                                      const SamplingPlan& plan) {
  plan.validate();
  const std::int64_t periods = model.combined_periods();
  const auto span = static_cast<long double>(periods);
  const long double eps = static_cast<long double>(plan.epsilon_fraction) * span;
  const std::int64_t n = plan.samples_per_period;

  std::vector<long double> probes;
  probes.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    probes.push_back(static_cast<long double>(j) * span /
                     static_cast<long double>(n));
  }

  if (plan.probe_discontinuities) {
    if (const auto timing = model.timing()) {
      const std::int64_t p = timing->multiplier_num();
      const std::int64_t q = timing->multiplier_den();
      if (p > kMaxProbes / 2) {
        throw ResourceError("too many step edges to probe for multiplier " +
                                std::to_string(p) + "/" + std::to_string(q),
                            p, q);
      }
      const auto steps = static_cast<long double>(p);
      for (std::int64_t k = 0; k < p; ++k) {
        probes.push_back(static_cast<long double>(k * q) / steps);
        probes.push_back(static_cast<long double>((k + 1) * q) / steps - eps);
      }
    } else if (const auto quantizer = model.quantizer()) {
      const auto half = static_cast<std::int64_t>(quantizer->scale());
      if (2 * half + 1 <= kMaxCrossingLevels) {
        const double scale = quantizer->scale();
        for (std::int64_t j = -half; j <= half; ++j) {
          const long double level = static_cast<double>(j) / scale;
          const long double rising = std::asin(level) / kTwoPi;
          for (const long double crossing : {rising, 0.5L - rising}) {
            probes.push_back(wrap_unit(crossing - eps));
            probes.push_back(wrap_unit(crossing + eps));
          }
        }
      }
    }
  }

  std::erase_if(probes, [span](long double u) { return !(u >= 0.0L && u < span); });
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

}  // namespace

void SamplingPlan::validate() const {
  if (samples_per_period < 64) {
    throw std::invalid_argument("samples per period must be at least 64, got " +
                                std::to_string(samples_per_period));
  }
  if (!(epsilon_fraction > 0.0 && epsilon_fraction <= 1e-6)) {
    throw std::invalid_argument("epsilon fraction must lie in (0, 1e-6], got " +
                                std::to_string(epsilon_fraction));
  }
}

std::string_view to_string(SpectrumMethod method) {
  return method == SpectrumMethod::kDft ? "dft" : "exact_staircase";
}

double Spectrum::amplitude(std::int64_t bin) const {
  if (bin < 1 || bin > static_cast<std::int64_t>(amplitudes.size())) return 0.0;
  return amplitudes[static_cast<std::size_t>(bin - 1)];
}

double Spectrum::captured_power() const {
  double power = dc * dc;
  for (const double a : amplitudes) power += 0.5 * a * a;
  return power;
}

std::vector<double> probe_times(const WaveformModel& model,
                                const SamplingPlan& plan) {
  const auto cycles = probe_cycles(model, plan);
  const auto f = static_cast<long double>(model.spec().frequency_hz());
  std::vector<double> times;
  times.reserve(cycles.size());
  for (const long double u : cycles) times.push_back(static_cast<double>(u / f));
  return times;
}

MaxAbsError max_abs_error(const WaveformModel& model, const SamplingPlan& plan) {
  const auto cycles = probe_cycles(model, plan);
  double best = -1.0;
  long double best_at = 0.0L;
  for (const long double u : cycles) {
    const double err = std::fabs(sample_at_cycles(model, u) - unit_sine(u));
    if (err > best) {
      best = err;
      best_at = u;
    }
  }
  const auto f = static_cast<long double>(model.spec().frequency_hz());
  return {std::max(best, 0.0), static_cast<double>(best_at / f)};
}

Spectrum spectrum_dft(const WaveformModel& model, int samples_per_step,
                      std::int64_t cap) {
  if (samples_per_step < kMinSamplesPerStep) {
    throw std::invalid_argument("samples per step must be at least 16, got " +
                                std::to_string(samples_per_step));
  }
  const std::int64_t periods = model.combined_periods();
  std::int64_t n = 0;
  if (const auto timing = model.timing()) {
    const std::int64_t p = timing->multiplier_num();
    if (p > cap / samples_per_step) {
      throw ResourceError(
          "DFT length exceeds cap of " + std::to_string(cap) +
              " points for multiplier " + std::to_string(p) + "/" +
              std::to_string(timing->multiplier_den()),
          p, timing->multiplier_den());
    }
    n = p * samples_per_step;
  } else {
    n = std::max<std::int64_t>(std::int64_t{1} << 18, 4096 * periods);
    if (n > cap) {
      throw ResourceError("DFT length exceeds cap of " + std::to_string(cap),
                          1, periods);
    }
  }

  const auto span = static_cast<long double>(periods);
  std::vector<double> samples(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    samples[static_cast<std::size_t>(j)] = sample_at_cycles(
        model, static_cast<long double>(j) * span / static_cast<long double>(n));
  }
  const auto bins = detail::real_dft(samples);

  Spectrum spectrum;
  spectrum.method = SpectrumMethod::kDft;
  spectrum.base_frequency_hz =
      model.spec().frequency_hz() / static_cast<double>(periods);
  spectrum.fundamental_index = periods;
  const auto scale = static_cast<double>(n);
  spectrum.dc = bins[0].real() / scale;
  const std::int64_t last_full_bin = (n - 1) / 2;
  spectrum.amplitudes.resize(static_cast<std::size_t>(last_full_bin));
  for (std::int64_t k = 1; k <= last_full_bin; ++k) {
    spectrum.amplitudes[static_cast<std::size_t>(k - 1)] =
        2.0 * std::abs(bins[static_cast<std::size_t>(k)]) / scale;
  }
  if (n % 2 == 0) {
    spectrum.residual_power =
        std::norm(bins[static_cast<std::size_t>(n / 2)]) / (scale * scale);
  }
  return spectrum;
}

Spectrum spectrum_exact_staircase(const WaveformModel& model) {
  if (!model.is_stepped()) {
    throw UnsupportedModelError(
        "exact staircase spectrum needs a held or digitized model, got '" +
        std::string(model.name()) + "'");
  }
  const TimingConfig timing = *model.timing();
  const std::int64_t p = timing.multiplier_num();
  const std::int64_t periods = timing.multiplier_den();

  std::vector<double> steps(static_cast<std::size_t>(p));
  double mean = 0.0;
  double mean_square = 0.0;
  for (std::int64_t k = 0; k < p; ++k) {
    const double v = step_value(model, k);
    steps[static_cast<std::size_t>(k)] = v;
    mean += v;
    mean_square += v * v;
  }
  mean /= static_cast<double>(p);
  mean_square /= static_cast<double>(p);

  // twiddle[r] = exp(-2 pi i r / p)
  std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(p));
  for (std::int64_t r = 0; r < p; ++r) {
    twiddle[static_cast<std::size_t>(r)] = {unit_sine_ratio(4 * r + p, 4 * p),
                                            -unit_sine_ratio(r, p)};
  }
  // Step-value transform V_r = sum_k v_k exp(-2 pi i r k / p), by residue.
  std::vector<std::complex<double>> transform(static_cast<std::size_t>(p));
  std::vector<bool> known(static_cast<std::size_t>(p), false);
  auto step_transform = [&](std::int64_t r) {
    const auto slot = static_cast<std::size_t>(r);
    if (!known[slot]) {
      std::complex<double> sum = 0.0;
      std::int64_t index = 0;
      for (std::int64_t k = 0; k < p; ++k) {
        sum += steps[static_cast<std::size_t>(k)] *
               twiddle[static_cast<std::size_t>(index)];
        index += r;
        if (index >= p) index -= p;
      }
      transform[slot] = sum;
      known[slot] = true;
    }
    return transform[slot];
  };

  Spectrum spectrum;
  spectrum.method = SpectrumMethod::kExactStaircase;
  spectrum.base_frequency_hz =
      model.spec().frequency_hz() / static_cast<double>(periods);
  spectrum.fundamental_index = periods;
  spectrum.dc = mean;

  const std::int64_t min_harmonics = kExactMinHarmonicsPerPeriod * periods;
  double captured = mean * mean;
  for (std::int64_t n = 1;; ++n) {
    const std::int64_t r = n % p;
    // c_n = V_n (exp(-2 pi i n / p) - 1) / (-2 pi i n)
    const double edge = std::abs(twiddle[static_cast<std::size_t>(r)] - 1.0);
    const double amplitude = 2.0 * std::abs(step_transform(r)) * edge /
                             (2.0 * std::numbers::pi * static_cast<double>(n));
    spectrum.amplitudes.push_back(amplitude);
    captured += 0.5 * amplitude * amplitude;

    if (n >= kExactMaxHarmonics) break;
    if (n >= periods && captured >= (1.0 - kExactEarlyStop) * mean_square) break;
    if (n >= min_harmonics &&
        captured >= (1.0 - kExactTailTolerance) * mean_square) {
      break;
    }
  }
  spectrum.residual_power = std::max(0.0, mean_square - captured);
  return spectrum;
}

ThdResult thd(const Spectrum& spectrum) {
  const double fundamental = spectrum.amplitude(spectrum.fundamental_index);
  if (!(fundamental > kMinFundamental)) {
    throw DegenerateSignalError(
        "no energy at the fundamental bin " +
        std::to_string(spectrum.fundamental_index) + "; THD undefined");
  }
  double distortion = 2.0 * spectrum.residual_power;
  const auto bins = static_cast<std::int64_t>(spectrum.amplitudes.size());
  for (std::int64_t n = 1; n <= bins; ++n) {
    if (n == spectrum.fundamental_index) continue;
    const double a = spectrum.amplitudes[static_cast<std::size_t>(n - 1)];
    distortion += a * a;
  }
  ThdResult result;
  result.ratio = std::sqrt(distortion) / fundamental;
  if (result.ratio > 0.0) result.db = 20.0 * std::log10(result.ratio);
  return result;
}

BoundPair bounds_for(const WaveformModel& model) {
  const double f = model.spec().frequency_hz();
  const auto timing = model.timing();
  const auto quantizer = model.quantizer();
  if (timing && quantizer) {
    const double dt = timing->time_gap(model.spec());
    return {digitized_error_bound(f, dt, quantizer->bits(), BoundVariant::kPaper),
            digitized_error_bound(f, dt, quantizer->bits(), BoundVariant::kStrict)};
  }
  if (timing) {
    const double dt = timing->time_gap(model.spec());
    return {held_error_bound(f, dt, BoundVariant::kPaper),
            held_error_bound(f, dt, BoundVariant::kStrict)};
  }
  if (quantizer) {
    const double bound = quantization_error_bound(quantizer->bits());
    return {bound, bound};
  }
  return {0.0, 0.0};
}

MetricsReport make_report(const WaveformModel& model, const MaxAbsError& error,
                          const std::optional<ThdResult>& distortion) {
  const BoundPair bounds = bounds_for(model);
  MetricsReport report{.model = model,
                       .max_abs_error = error.value,
                       .argmax_time_s = error.argmax_time_s,
                       .thd_ratio = std::nullopt,
                       .thd_db = std::nullopt,
                       .paper_bound = bounds.paper,
                       .strict_bound = bounds.strict};
  if (distortion) {
    report.thd_ratio = distortion->ratio;
    report.thd_db = distortion->db;
  }
  return report;
}

MetricsReport evaluate(const WaveformModel& model, const SamplingPlan& plan,
                       int samples_per_step, std::int64_t cap) {
  const MaxAbsError error = max_abs_error(model, plan);
  const Spectrum spectrum = spectrum_dft(model, samples_per_step, cap);
  std::optional<ThdResult> distortion;
  try {
    distortion = thd(spectrum);
  } catch (const DegenerateSignalError&) {
    distortion.reset();
  }
  return make_report(model, error, distortion);
}

}  // namespace ddsm
