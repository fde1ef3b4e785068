#include "ddsm/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ddsm/error_bounds.hpp"
#include "ddsm/errors.hpp"
#include "test_support.hpp"

namespace ddsm {
namespace {

using std::numbers::pi;
using testing::db;
using testing::held_thd_closed_form;
using testing::sinc;

const SignalSpec kOneHz{1.0};

WaveformModel held(std::int64_t p, std::int64_t q = 1) {
  return WaveformModel::held(kOneHz, TimingConfig(p, q));
}

WaveformModel quantized(int bits, QuantizationMode mode = QuantizationMode::kFloor) {
  return WaveformModel::quantized(kOneHz, QuantizerConfig(bits, mode));
}

WaveformModel digitized(std::int64_t p, int bits, std::int64_t q = 1) {
  return WaveformModel::digitized(kOneHz, TimingConfig(p, q), QuantizerConfig(bits));
}

double mean_square(const WaveformModel& model) {
  const std::int64_t p = model.timing()->multiplier_num();
  double sum = 0.0;
  for (std::int64_t k = 0; k < p; ++k) sum += std::pow(step_value(model, k), 2);
  return sum / static_cast<double>(p);
}

bool contains_near(const std::vector<double>& values, double x, double tol) {
  return std::any_of(values.begin(), values.end(),
                     [&](double v) { return std::fabs(v - x) <= tol; });
}

TEST(SamplingPlanTest, Validation) {
  SamplingPlan plan;
  EXPECT_NO_THROW(plan.validate());
  plan.samples_per_period = 63;
  EXPECT_THROW(plan.validate(), std::invalid_argument);
  plan = {};
  plan.epsilon_fraction = 0.0;
  EXPECT_THROW(plan.validate(), std::invalid_argument);
  plan.epsilon_fraction = 2e-6;
  EXPECT_THROW(plan.validate(), std::invalid_argument);
}

TEST(ProbeTimesTest, TargetIsUniformGridOnly) {
  SamplingPlan plan;
  plan.samples_per_period = 64;
  const auto probes = probe_times(WaveformModel::target(kOneHz), plan);
  ASSERT_EQ(probes.size(), 64u);
  EXPECT_EQ(probes[16], 0.25);
}

TEST(ProbeTimesTest, HeldIncludesBothSidesOfEachStepEdge) {
  SamplingPlan plan;
  plan.samples_per_period = 64;
  const auto probes = probe_times(held(4), plan);
  EXPECT_TRUE(contains_near(probes, 0.25, 0.0));
  EXPECT_TRUE(contains_near(probes, 0.25 - 1e-9, 1e-15));
  EXPECT_TRUE(std::is_sorted(probes.begin(), probes.end()));
  EXPECT_EQ(std::adjacent_find(probes.begin(), probes.end()), probes.end());
  EXPECT_GE(probes.front(), 0.0);
  EXPECT_LT(probes.back(), 1.0);
}

TEST(ProbeTimesTest, QuantizedIncludesLevelCrossings) {
  SamplingPlan plan;
  plan.samples_per_period = 64;
  const auto probes = probe_times(quantized(2), plan);
  // sin(2 pi t) crosses 1/2 at t = 1/12; the oracle confirms the sign change.
  const double crossing = std::asin(0.5) / (2.0 * pi);
  EXPECT_LT(std::sin(2 * pi * (crossing - 1e-9)) - 0.5, 0.0);
  EXPECT_GT(std::sin(2 * pi * (crossing + 1e-9)) - 0.5, 0.0);
  EXPECT_TRUE(contains_near(probes, 0.0833333333333 - 1e-9, 1e-12));
  EXPECT_TRUE(contains_near(probes, crossing + 1e-9, 1e-15));
  // other quarter-period branches of the same level
  EXPECT_TRUE(contains_near(probes, 0.5 - crossing - 1e-9, 1e-15));
  EXPECT_TRUE(contains_near(probes, 0.5 + crossing + 1e-9, 1e-15));
  EXPECT_TRUE(contains_near(probes, 1.0 - crossing - 1e-9, 1e-15));
}

TEST(ProbeTimesTest, CombinedPeriodSpansQ) {
  SamplingPlan plan;
  plan.samples_per_period = 100;
  const auto probes = probe_times(held(19, 6), plan);
  EXPECT_LT(probes.back(), 6.0);
  EXPECT_GT(probes.back(), 5.9);
  EXPECT_TRUE(contains_near(probes, 6.0 / 19.0, 1e-15));
}

TEST(MaxAbsErrorTest, TargetIsExactlyZero) {
  const auto e = max_abs_error(WaveformModel::target(kOneHz), SamplingPlan{});
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.argmax_time_s, 0.0);
}

TEST(MaxAbsErrorTest, HeldTwoIsZeroOutput) {
  const auto e = max_abs_error(held(2), SamplingPlan{});
  EXPECT_EQ(e.value, 1.0);
  EXPECT_EQ(e.argmax_time_s, 0.25);
}

TEST(MaxAbsErrorTest, FloorQuantizerApproachesOneLevel) {
  const double lsb = 1.0 / 128.0;
  const auto e = max_abs_error(quantized(8), SamplingPlan{});
  EXPECT_GE(e.value, 0.99 * lsb);
  EXPECT_LE(e.value, lsb);
}

TEST(MaxAbsErrorTest, HeldEightApproachesSinQuarterPiFromBelow) {
  const double bound = std::sin(2 * pi / 8);
  const auto e = max_abs_error(held(8), SamplingPlan{});
  EXPECT_LT(e.value, bound);
  EXPECT_GE(e.value, 0.999 * bound);
  const testing::NaiveDigitizer naive{.freq = 1.0, .dt = 0.125, .bits = 0};
  EXPECT_NEAR(e.value, testing::brute_force_max_error(naive, 1.0, 1'000'000), 1e-5);
}

TEST(MaxAbsErrorTest, FrequencyScaleInvariance) {
  const auto slow = max_abs_error(digitized(12, 5), SamplingPlan{});
  const auto fast = max_abs_error(
      WaveformModel::digitized(SignalSpec(50.0), TimingConfig(12), QuantizerConfig(5)),
      SamplingPlan{});
  EXPECT_NEAR(slow.value, fast.value, 1e-12);
  EXPECT_NEAR(slow.argmax_time_s / 50.0, fast.argmax_time_s, 1e-12);
}

TEST(SpectrumDftTest, PureSine) {
  const Spectrum s = spectrum_dft(WaveformModel::target(kOneHz));
  EXPECT_EQ(s.method, SpectrumMethod::kDft);
  EXPECT_EQ(s.fundamental_index, 1);
  EXPECT_NEAR(s.amplitude(1), 1.0, 1e-12);
  EXPECT_LT(std::fabs(s.dc), 1e-10);
  for (std::int64_t n = 2; n <= static_cast<std::int64_t>(s.amplitudes.size()); ++n) {
    ASSERT_LT(s.amplitude(n), 1e-10) << n;
  }
}

TEST(SpectrumDftTest, HeldFourHarmonics) {
  const Spectrum s = spectrum_dft(held(4), 64);
  ASSERT_EQ(s.amplitudes.size(), 127u);
  // Continuous-time values sinc(1/4) = 0.9003163 and sinc(3/4) = 0.3001054.
  // Sampling m = 64 points per step scales bin n by (pi n / N) / sin(pi n / N).
  const double n_total = 256.0;
  const auto dirichlet = [&](int n) { return (pi * n / n_total) / std::sin(pi * n / n_total); };
  EXPECT_NEAR(s.amplitude(1), 0.9003163162 * dirichlet(1), 1e-9);
  EXPECT_NEAR(s.amplitude(3), 0.3001054387 * dirichlet(3), 1e-9);
  EXPECT_NEAR(s.amplitude(1), 0.9003163, 3e-5);
  EXPECT_NEAR(s.amplitude(3), 0.3001054, 1e-4);
  EXPECT_LT(s.amplitude(2), 1e-12);
}

TEST(SpectrumDftTest, ParsevalMatchesSampleMeanSquare) {
  for (const auto& model : {held(4), held(19, 6), digitized(37, 5), quantized(6)}) {
    const Spectrum s = spectrum_dft(model, 32);
    // Mean square of the captured samples, recomputed directly.
    const std::int64_t periods = model.combined_periods();
    const std::int64_t n = model.is_stepped()
                               ? model.timing()->multiplier_num() * 32
                               : std::int64_t{1} << 18;
    double ms = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      ms += std::pow(sample_at_cycles(model, static_cast<long double>(j) * periods / n), 2);
    }
    ms /= static_cast<double>(n);
    EXPECT_NEAR((s.captured_power() + s.residual_power) / ms, 1.0, 1e-9) << model.name();
  }
}

TEST(SpectrumDftTest, CapAndArgumentErrors) {
  try {
    spectrum_dft(held(1'000'003, 7), 64);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_EQ(e.multiplier_num(), 1'000'003);
    EXPECT_EQ(e.multiplier_den(), 7);
    EXPECT_NE(std::string(e.what()).find("1000003/7"), std::string::npos);
  }
  EXPECT_THROW(spectrum_dft(held(4), 15), std::invalid_argument);
  EXPECT_THROW(spectrum_dft(held(4), 64, 128), ResourceError);
}

TEST(SpectrumExactTest, HeldFourClosedForm) {
  const Spectrum s = spectrum_exact_staircase(held(4));
  EXPECT_EQ(s.method, SpectrumMethod::kExactStaircase);
  EXPECT_NEAR(s.amplitude(1), std::sin(pi / 4) / (pi / 4), 1e-14);
  EXPECT_NEAR(s.amplitude(3), sinc(0.75), 1e-14);
  EXPECT_EQ(s.dc, 0.0);
  // Cross-check the fundamental against midpoint-rule quadrature.
  const auto staircase = [](double s01) {
    return std::sin(2 * pi * std::floor(s01 * 4.0) / 4.0);
  };
  EXPECT_NEAR(s.amplitude(1), testing::quadrature_amplitude(staircase, 1, 400000), 1e-9);

  double sum_sq = 0.0;
  for (const double a : s.amplitudes) sum_sq += a * a;
  EXPECT_NEAR(sum_sq + 2.0 * s.residual_power, 1.0, 1e-9);
  EXPECT_GE(sum_sq, 1.0 - 1e-4);
}

TEST(SpectrumExactTest, HeldTwoIsSilent) {
  const Spectrum s = spectrum_exact_staircase(held(2));
  EXPECT_EQ(s.dc, 0.0);
  for (const double a : s.amplitudes) ASSERT_EQ(a, 0.0);
  EXPECT_THROW(thd(s), DegenerateSignalError);
}

TEST(SpectrumExactTest, RejectsUnsteppedModels) {
  EXPECT_THROW(spectrum_exact_staircase(WaveformModel::target(kOneHz)),
               UnsupportedModelError);
  EXPECT_THROW(spectrum_exact_staircase(quantized(4)), UnsupportedModelError);
}

TEST(SpectrumExactTest, CapturesAlmostAllPower) {
  for (const auto& model : {held(3), held(4), held(5), held(19, 6), held(7, 16),
                            digitized(16, 3), digitized(129, 9, 4), held(1000)}) {
    const Spectrum s = spectrum_exact_staircase(model);
    EXPECT_GE(s.captured_power(), (1.0 - 1e-4) * mean_square(model)) << model.name();
  }
}

TEST(ThdTest, PureSineHasNoDistortion) {
  const ThdResult r = thd(spectrum_dft(WaveformModel::target(kOneHz)));
  EXPECT_LT(r.ratio, 1e-9);
  if (r.db) EXPECT_LT(*r.db, -180.0);
}

TEST(ThdTest, ZeroRatioHasNoDecibels) {
  Spectrum s;
  s.amplitudes = {1.0, 0.0, 0.0};
  const ThdResult r = thd(s);
  EXPECT_EQ(r.ratio, 0.0);
  EXPECT_FALSE(r.db.has_value());
}

TEST(ThdTest, HeldClosedForms) {
  const ThdResult four = thd(spectrum_exact_staircase(held(4)));
  EXPECT_NEAR(four.ratio, held_thd_closed_form(4), 1e-9);
  EXPECT_NEAR(four.ratio, 0.4834258, 1e-7);
  EXPECT_NEAR(*four.db, -6.3134, 5e-5);
  const ThdResult thirty_two = thd(spectrum_exact_staircase(held(32)));
  EXPECT_NEAR(thirty_two.ratio, 0.0567, 0.0002);
  EXPECT_NEAR(*thirty_two.db, -24.92, 0.05);
}

TEST(ThdTest, CountsInterharmonicBins) {
  // M = 7/2: combined period holds two target periods, fundamental at bin 2.
  const Spectrum s = spectrum_exact_staircase(held(7, 2));
  EXPECT_EQ(s.fundamental_index, 2);
  EXPECT_DOUBLE_EQ(s.base_frequency_hz, 0.5);
  const ThdResult r = thd(s);
  const double fundamental = s.amplitude(2);
  const double distortion_power = mean_square(held(7, 2)) - s.dc * s.dc -
                                  fundamental * fundamental / 2.0;
  EXPECT_NEAR(r.ratio, std::sqrt(2.0 * distortion_power) / fundamental, 1e-9);
}

TEST(EvaluateTest, Anchors) {
  const MetricsReport target = evaluate(WaveformModel::target(kOneHz), SamplingPlan{});
  EXPECT_EQ(target.max_abs_error, 0.0);
  EXPECT_LT(*target.thd_ratio, 1e-9);
  EXPECT_EQ(target.strict_bound, 0.0);

  const MetricsReport dig = evaluate(digitized(64, 8), SamplingPlan{});
  EXPECT_NEAR(dig.paper_bound, 0.1058296, 1e-7);
  EXPECT_LE(dig.max_abs_error, 0.1058295);
  EXPECT_LE(dig.max_abs_error, dig.strict_bound);

  const MetricsReport five = evaluate(held(5), SamplingPlan{});
  EXPECT_LE(five.max_abs_error, 1.1755705);
  EXPECT_GT(five.max_abs_error, 0.9511);
  EXPECT_GT(five.max_abs_error, five.paper_bound);

  const MetricsReport silent = evaluate(held(2), SamplingPlan{});
  EXPECT_EQ(silent.max_abs_error, 1.0);
  EXPECT_FALSE(silent.thd_ratio.has_value());
  EXPECT_FALSE(silent.thd_db.has_value());
}

TEST(EvaluateTest, PercentDividesByOne) {
  const MetricsReport r = evaluate(quantized(4), SamplingPlan{});
  EXPECT_EQ(r.max_abs_error_percent(), 100.0 * r.max_abs_error);
}

// Property suites.

TEST(MetricsProperties, DftAgreesWithExactStaircase) {
  std::mt19937_64 rng(314);
  for (int i = 0; i < 24; ++i) {
    const auto p = static_cast<std::int64_t>(3 + rng() % 254);
    const auto q = static_cast<std::int64_t>(1 + rng() % 4);
    const auto model = rng() % 2 == 0 ? held(p, q) : digitized(p, 2 + static_cast<int>(rng() % 11), q);
    if (model.timing()->multiplier() < 3.0) continue;
    const double exact = *thd(spectrum_exact_staircase(model)).db;
    const double dft = *thd(spectrum_dft(model, 256)).db;
    ASSERT_NEAR(dft, exact, 0.05) << model.name() << ' ' << p << '/' << q;
  }
}

TEST(MetricsProperties, ObservedErrorWithinBounds) {
  std::mt19937_64 rng(2718);
  for (int i = 0; i < 40; ++i) {
    const auto p = static_cast<std::int64_t>(1 + rng() % 300);
    const auto q = static_cast<std::int64_t>(1 + rng() % 16);
    const int bits = 1 + static_cast<int>(rng() % 16);
    for (const auto& model : {held(p, q), digitized(p, bits, q), quantized(bits)}) {
      SamplingPlan plan;
      plan.samples_per_period = 20000;
      const MaxAbsError e = max_abs_error(model, plan);
      const BoundPair b = bounds_for(model);
      ASSERT_LE(e.value, b.strict) << model.name() << ' ' << p << '/' << q;
      const TimingConfig t(p, q);
      const bool even_integer = t.multiplier_den() == 1 && t.multiplier_num() % 2 == 0;
      if (model.name() == "quantized" || (model.name() == "held" && even_integer)) {
        ASSERT_LE(e.value, b.paper) << model.name() << ' ' << p << '/' << q;
      }
    }
  }
}

TEST(MetricsProperties, TightAgainstClosedForms) {
  for (int b = 2; b <= 16; b += 2) {
    const double lsb = quantization_error_bound(b);
    EXPECT_GE(max_abs_error(quantized(b), SamplingPlan{}).value, 0.99 * lsb) << b;
  }
  for (int m = 4; m <= 1024; m *= 2) {
    const double bound = std::sin(2 * pi / m);
    EXPECT_GE(max_abs_error(held(m), SamplingPlan{}).value, 0.999 * bound) << m;
  }
  EXPECT_GE(max_abs_error(held(6), SamplingPlan{}).value, 0.999 * std::sin(2 * pi / 6));
}

TEST(MetricsProperties, ThdFallsWithMultiplierAndBits) {
  double previous = INFINITY;
  for (int m = 4; m <= 1024; m *= 2) {
    const double r = thd(spectrum_dft(held(m), 64)).ratio;
    ASSERT_LT(r, previous) << m;
    previous = r;
  }
  previous = INFINITY;
  for (int b = 2; b <= 16; ++b) {
    const double r = thd(spectrum_dft(quantized(b, QuantizationMode::kRound))).ratio;
    ASSERT_LT(r, previous) << b;
    previous = r;
  }
}

TEST(MetricsProperties, RefinementStability) {
  SamplingPlan coarse;
  SamplingPlan fine;
  fine.samples_per_period = 2 * coarse.samples_per_period;
  for (const auto& model : {quantized(8), held(64), digitized(100, 6), held(19, 6)}) {
    EXPECT_NEAR(max_abs_error(model, coarse).value, max_abs_error(model, fine).value, 1e-6)
        << model.name();
    const double base = *thd(spectrum_dft(model, kDefaultSamplesPerStep)).db;
    const double doubled = *thd(spectrum_dft(model, 2 * kDefaultSamplesPerStep)).db;
    EXPECT_NEAR(base, doubled, 0.01) << model.name();
  }
}

}  // namespace
}  // namespace ddsm
