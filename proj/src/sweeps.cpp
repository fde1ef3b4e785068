#include "ddsm/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "ddsm/errors.hpp"

namespace ddsm {

namespace {

// Sweeps run at 1 Hz; every metric depends on f only through f*dt = 1/M.
const SignalSpec kSweepSignal{1.0};

// Runs task(i) for i in [0, count). Each index writes only its own slot, and
// the first failing index (in index order) is rethrown after all workers join.
void for_each_index(std::size_t count, unsigned threads,
                    const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::exception_ptr> failures(count);
  auto run = [&](std::size_t i) {
    try {
      task(i);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run(i);
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

SweepRow evaluate_row(const WaveformModel& model, const SweepSpec& spec) {
  const MaxAbsError error = max_abs_error(model, spec.plan);
  RowFlags flags;
  std::optional<ThdResult> distortion;
  try {
    distortion = thd(spectrum_dft(model, spec.samples_per_step, spec.dft_cap));
  } catch (const ResourceError&) {
    flags.dft_cap_exceeded = true;
  } catch (const DegenerateSignalError&) {
    distortion.reset();
  }
  const auto timing = model.timing();
  if (timing) {
    flags.subnyquist = timing->multiplier_num() < 2 * timing->multiplier_den();
  }
  return SweepRow{.bits = std::nullopt,
                  .m_requested = std::nullopt,
                  .timing = timing,
                  .report = make_report(model, error, distortion),
                  .flags = flags};
}

struct RowPlan {
  std::optional<int> bits;
  std::optional<double> m_requested;
  WaveformModel model;
};

SweepResult run_rows(SweepKind kind, const SweepSpec& spec,
                     const std::vector<RowPlan>& plans) {
  std::vector<std::optional<SweepRow>> slots(plans.size());
  for_each_index(plans.size(), spec.threads, [&](std::size_t i) {
    SweepRow row = evaluate_row(plans[i].model, spec);
    row.bits = plans[i].bits;
    row.m_requested = plans[i].m_requested;
    slots[i] = std::move(row);
  });
  SweepResult result{.kind = kind, .spec = spec, .rows = {},
                     .schema_version = kSweepSchemaVersion};
  result.rows.reserve(slots.size());
  for (auto& slot : slots) result.rows.push_back(std::move(*slot));
  return result;
}

}  // namespace

void SweepSpec::validate() const {
  if (bits.from < QuantizerConfig::kMinBits || bits.to > QuantizerConfig::kMaxBits ||
      bits.from > bits.to || bits.stride < 1) {
    throw std::invalid_argument("bit range must satisfy 1 <= from <= to <= 52 "
                                "with stride >= 1");
  }
  if (!std::isfinite(multiplier.decades_from) ||
      !std::isfinite(multiplier.decades_to) ||
      multiplier.decades_from > multiplier.decades_to) {
    throw std::invalid_argument("decade range must be finite and ordered");
  }
  if (multiplier.points_per_decade < 1) {
    throw std::invalid_argument("points per decade must be at least 1");
  }
  for (const double m : multipliers) {
    if (!std::isfinite(m) || m <= 0.0) {
      throw std::invalid_argument("multipliers must be positive and finite");
    }
  }
  if (q_max < 1) throw std::invalid_argument("qmax must be at least 1");
  if (samples_per_step < kMinSamplesPerStep) {
    throw std::invalid_argument("samples per step must be at least 16");
  }
  plan.validate();
}

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::kBits:
      return "bits";
    case SweepKind::kMultiplier:
      return "multiplier";
    case SweepKind::kGrid:
      return "grid";
  }
  return "bits";
}

std::optional<SweepKind> parse_sweep_kind(std::string_view text) {
  if (text == "bits") return SweepKind::kBits;
  if (text == "multiplier") return SweepKind::kMultiplier;
  if (text == "grid") return SweepKind::kGrid;
  return std::nullopt;
}

TimingConfig snap_multiplier(double requested, std::int64_t q_max) {
  if (!std::isfinite(requested) || requested <= 0.0) {
    throw std::invalid_argument("multiplier must be positive and finite, got " +
                                std::to_string(requested));
  }
  if (q_max < 1) throw std::invalid_argument("qmax must be at least 1");
  const auto target = static_cast<long double>(requested);
  std::int64_t best_p = 0;
  std::int64_t best_q = 0;
  long double best_distance = 0.0L;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const long double scaled = target * static_cast<long double>(q);
    const auto lo = static_cast<std::int64_t>(std::floor(scaled));
    for (const std::int64_t p : {lo, lo + 1}) {
      if (p < 1) continue;
      const long double distance =
          std::fabs(static_cast<long double>(p) / static_cast<long double>(q) -
                    target);
      if (best_q == 0 || distance < best_distance) {
        best_p = p;
        best_q = q;
        best_distance = distance;
      }
    }
  }
  return TimingConfig(best_p, best_q);
}

std::vector<double> multiplier_values(const MultiplierAxis& axis) {
  const double span = (axis.decades_to - axis.decades_from) *
                      static_cast<double>(axis.points_per_decade);
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double exponent =
        axis.decades_from +
        static_cast<double>(k) / static_cast<double>(axis.points_per_decade);
    values.push_back(std::pow(10.0, exponent));
  }
  return values;
}

std::vector<double> multiplier_values(const SweepSpec& spec) {
  if (spec.multipliers.empty()) return multiplier_values(spec.multiplier);
  std::vector<double> values = spec.multipliers;
  std::sort(values.begin(), values.end());
  return values;
}

std::vector<int> bit_values(const BitsAxis& axis) {
  std::vector<int> values;
  for (int b = axis.from; b <= axis.to; b += axis.stride) values.push_back(b);
  return values;
}

SweepResult sweep_bits(const SweepSpec& spec) {
  spec.validate();
  std::vector<RowPlan> plans;
  for (const int b : bit_values(spec.bits)) {
    plans.push_back({b, std::nullopt,
                     WaveformModel::quantized(kSweepSignal,
                                              QuantizerConfig(b, spec.mode))});
  }
  return run_rows(SweepKind::kBits, spec, plans);
}

SweepResult sweep_multiplier(const SweepSpec& spec) {
  spec.validate();
  std::vector<RowPlan> plans;
  for (const double m : multiplier_values(spec)) {
    plans.push_back({std::nullopt, m,
                     WaveformModel::held(kSweepSignal,
                                         snap_multiplier(m, spec.q_max))});
  }
  return run_rows(SweepKind::kMultiplier, spec, plans);
}

SweepResult sweep_grid(const SweepSpec& spec) {
  spec.validate();
  const auto multipliers = multiplier_values(spec);
  std::vector<RowPlan> plans;
  for (const int b : bit_values(spec.bits)) {
    for (const double m : multipliers) {
      plans.push_back({b, m,
                       WaveformModel::digitized(kSweepSignal,
                                                snap_multiplier(m, spec.q_max),
                                                QuantizerConfig(b, spec.mode))});
    }
  }
  return run_rows(SweepKind::kGrid, spec, plans);
}

SweepResult run_sweep(SweepKind kind, const SweepSpec& spec) {
  switch (kind) {
    case SweepKind::kBits:
      return sweep_bits(spec);
    case SweepKind::kMultiplier:
      return sweep_multiplier(spec);
    case SweepKind::kGrid:
      return sweep_grid(spec);
  }
  throw std::invalid_argument("unknown sweep kind");
}

}  // namespace ddsm
