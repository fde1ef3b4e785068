#include "ddsm/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ddsm/charts.hpp"
#include "ddsm/error_bounds.hpp"
#include "ddsm/errors.hpp"
#include "ddsm/metrics.hpp"
#include "ddsm/report.hpp"
#include "ddsm/sweeps.hpp"

namespace ddsm {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw OutputError("cannot open '" + path + "' for writing");
  file << text;
  file.flush();
  if (!file) throw OutputError("failed writing '" + path + "'");
}

QuantizationMode mode_from(const std::string& text) {
  const auto mode = parse_quantization_mode(text);
  if (!mode) throw UsageError("--mode must be floor, round or ceiling");
  return *mode;
}

struct EvalOptions {
  std::string model;
  double freq = 1.0;
  int bits = 0;
  std::string mode = "floor";
  double multiplier = 0.0;
  double dt = 0.0;
  std::int64_t q_max = 16;
  std::int64_t samples = SamplingPlan{}.samples_per_period;
  int samples_per_step = kDefaultSamplesPerStep;
  std::string format = "json";
  std::string out = "-";
};

struct EvalFlags {
  CLI::Option* bits = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* multiplier = nullptr;
  CLI::Option* dt = nullptr;
};

WaveformModel build_model(const EvalOptions& o, const EvalFlags& flags) {
  const bool wants_bits = o.model == "quantized" || o.model == "digitized";
  const bool wants_timing = o.model == "held" || o.model == "digitized";
  const std::string model_tag = " for model '" + o.model + "'";

  if (!wants_bits) {
    if (flags.bits->count() > 0) throw UsageError("--bits not valid" + model_tag);
    if (flags.mode->count() > 0) throw UsageError("--mode not valid" + model_tag);
  } else if (flags.bits->count() == 0) {
    throw UsageError("--bits is required" + model_tag);
  }
  if (!wants_timing) {
    if (flags.multiplier->count() > 0) {
      throw UsageError("--multiplier not valid" + model_tag);
    }
    if (flags.dt->count() > 0) throw UsageError("--dt not valid" + model_tag);
  } else if (flags.multiplier->count() == 0 && flags.dt->count() == 0) {
    throw UsageError("--multiplier or --dt is required" + model_tag);
  }

  const SignalSpec spec(o.freq);
  std::optional<TimingConfig> timing;
  if (wants_timing) {
    const double m = flags.multiplier->count() > 0 ? o.multiplier
                                                   : 1.0 / (o.freq * o.dt);
    timing = snap_multiplier(m, o.q_max);
  }
  if (o.model == "target") return WaveformModel::target(spec);
  const QuantizerConfig quantizer(wants_bits ? o.bits : 1, mode_from(o.mode));
  if (o.model == "quantized") return WaveformModel::quantized(spec, quantizer);
  if (o.model == "held") return WaveformModel::held(spec, *timing);
  return WaveformModel::digitized(spec, *timing, quantizer);
}

struct SweepOptions {
  std::string kind;
  int bits_from = BitsAxis{}.from;
  int bits_to = BitsAxis{}.to;
  int bits_stride = BitsAxis{}.stride;
  double decades_from = MultiplierAxis{}.decades_from;
  double decades_to = MultiplierAxis{}.decades_to;
  int points_per_decade = MultiplierAxis{}.points_per_decade;
  std::vector<double> multipliers;
  std::int64_t q_max = 16;
  std::string mode = "floor";
  std::int64_t samples = SamplingPlan{}.samples_per_period;
  int samples_per_step = kDefaultSamplesPerStep;
  unsigned threads = 0;
  std::string out = "-";
  std::string svg;
  std::string svg_metric;
};

struct BoundsOptions {
  double freq = 1.0;
  double dt = 0.0;
  double multiplier = 0.0;
  int bits = 0;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Sine synthesizer error and distortion metrics", "ddsmetrics"};
  app.require_subcommand(1);

  EvalOptions eval;
  EvalFlags eval_flags;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate one waveform model");
  eval_cmd->add_option("--model", eval.model, "target|quantized|held|digitized")
      ->required()
      ->check(CLI::IsMember({"target", "quantized", "held", "digitized"}));
  eval_cmd->add_option("--freq", eval.freq, "Target frequency in Hz")
      ->capture_default_str();
  eval_flags.bits = eval_cmd->add_option("--bits", eval.bits, "DAC bit count");
  eval_flags.mode = eval_cmd->add_option("--mode", eval.mode, "floor|round|ceiling")
                        ->capture_default_str();
  eval_flags.multiplier =
      eval_cmd->add_option("--multiplier", eval.multiplier,
                           "Frequency multiplier T/dt");
  eval_flags.dt = eval_cmd->add_option("--dt", eval.dt, "Update interval in seconds")
                      ->excludes(eval_flags.multiplier);
  eval_cmd->add_option("--qmax", eval.q_max,
                       "Largest denominator when snapping the multiplier")
      ->capture_default_str();
  eval_cmd->add_option("--samples", eval.samples, "Uniform probes per combined period")
      ->capture_default_str();
  eval_cmd->add_option("--samples-per-step", eval.samples_per_step,
                       "DFT samples per hold step")
      ->capture_default_str();
  eval_cmd->add_option("--format", eval.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Output path, - for stdout")
      ->capture_default_str();

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep to CSV");
  sweep_cmd->add_option("kind", sweep.kind, "bits|multiplier|grid")
      ->required()
      ->check(CLI::IsMember({"bits", "multiplier", "grid"}));
  auto* bits_from = sweep_cmd->add_option("--bits-from", sweep.bits_from)->capture_default_str();
  auto* bits_to = sweep_cmd->add_option("--bits-to", sweep.bits_to)->capture_default_str();
  auto* bits_stride = sweep_cmd->add_option("--bits-stride", sweep.bits_stride)->capture_default_str();
  auto* decades_from =
      sweep_cmd->add_option("--decades-from", sweep.decades_from)->capture_default_str();
  auto* decades_to =
      sweep_cmd->add_option("--decades-to", sweep.decades_to)->capture_default_str();
  auto* ppd = sweep_cmd->add_option("--points-per-decade", sweep.points_per_decade)
                  ->capture_default_str();
  auto* multipliers =
      sweep_cmd->add_option("--multipliers", sweep.multipliers,
                            "Explicit multiplier list, replaces the decade axis")
          ->delimiter(',');
  auto* qmax = sweep_cmd->add_option("--qmax", sweep.q_max)->capture_default_str();
  auto* sweep_mode = sweep_cmd->add_option("--mode", sweep.mode)->capture_default_str();
  sweep_cmd->add_option("--samples", sweep.samples)->capture_default_str();
  sweep_cmd->add_option("--samples-per-step", sweep.samples_per_step)
      ->capture_default_str();
  sweep_cmd->add_option("--threads", sweep.threads, "0 = all cores")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "CSV path, - for stdout")
      ->capture_default_str();
  sweep_cmd->add_option("--svg", sweep.svg, "Also write a chart to this path");
  sweep_cmd->add_option("--svg-metric", sweep.svg_metric,
                        "max_err|max_err_pct|thd_ratio|thd_db|paper_bound|strict_bound");

  BoundsOptions bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Print closed-form error bounds");
  bounds_cmd->add_option("--freq", bounds.freq)->capture_default_str();
  auto* bounds_dt = bounds_cmd->add_option("--dt", bounds.dt, "Update interval in seconds");
  auto* bounds_m = bounds_cmd->add_option("--multiplier", bounds.multiplier)
                       ->excludes(bounds_dt);
  auto* bounds_bits = bounds_cmd->add_option("--bits", bounds.bits);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    err << "ddsmetrics: " << e.what() << '\n';
    return kExitUsage;
  }

  // Stage 1: turn flags into validated configuration (usage errors).
  // Stage 2: compute and write (runtime errors).
  try {
    if (eval_cmd->parsed()) {
      std::optional<WaveformModel> model;
      SamplingPlan plan;
      try {
        model = build_model(eval, eval_flags);
        plan.samples_per_period = eval.samples;
        plan.validate();
        if (eval.samples_per_step < kMinSamplesPerStep) {
          throw UsageError("--samples-per-step must be at least 16");
        }
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      } catch (const std::domain_error& e) {
        throw UsageError(e.what());
      }
      const MetricsReport report = evaluate(*model, plan, eval.samples_per_step);
      const std::string text = eval.format == "json"
                                   ? report_to_json(report).dump(2) + "\n"
                                   : report_to_csv(report);
      write_output(eval.out, text, out);
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      const SweepKind kind = *parse_sweep_kind(sweep.kind);
      const std::string tag = " not valid for sweep '" + sweep.kind + "'";
      if (kind == SweepKind::kBits) {
        for (const auto* opt : {decades_from, decades_to, ppd, multipliers, qmax}) {
          if (opt->count() > 0) throw UsageError(opt->get_name() + tag);
        }
      }
      if (kind == SweepKind::kMultiplier) {
        for (const auto* opt : {bits_from, bits_to, bits_stride, sweep_mode}) {
          if (opt->count() > 0) throw UsageError(opt->get_name() + tag);
        }
      }
      SweepSpec spec;
      std::optional<ChartMetric> metric;
      try {
        spec.bits = {sweep.bits_from, sweep.bits_to, sweep.bits_stride};
        spec.multiplier = {sweep.decades_from, sweep.decades_to,
                           sweep.points_per_decade};
        spec.multipliers = sweep.multipliers;
        spec.mode = mode_from(sweep.mode);
        spec.q_max = sweep.q_max;
        spec.plan.samples_per_period = sweep.samples;
        spec.samples_per_step = sweep.samples_per_step;
        spec.threads = sweep.threads;
        spec.validate();
        if (!sweep.svg_metric.empty()) {
          metric = parse_chart_metric(sweep.svg_metric);
          if (!metric) throw UsageError("unknown --svg-metric '" + sweep.svg_metric + "'");
        }
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!metric) {
        metric = kind == SweepKind::kBits ? ChartMetric::kMaxErrorPercent
                                          : ChartMetric::kMaxError;
      }

      const SweepResult result = run_sweep(kind, spec);
      const std::string csv = sweep_to_csv(result);
      std::string svg;
      if (!sweep.svg.empty()) {
        const ChartStyle style = default_chart_style(kind, *metric);
        if (kind == SweepKind::kGrid) {
          svg = render_heatmap(result, style, *metric);
        } else {
          const ChartMetric series[] = {*metric};
          svg = render_line_chart(result, style, series);
        }
      }
      write_output(sweep.out, csv, out);
      if (!sweep.svg.empty()) write_output(sweep.svg, svg, out);
      return kExitOk;
    }

    if (bounds_cmd->parsed()) {
      nlohmann::ordered_json j;
      try {
        const SignalSpec spec(bounds.freq);
        j["freq_hz"] = spec.frequency_hz();
        j["full_scale_range"] = full_scale_range();
        std::optional<double> dt;
        if (bounds_dt->count() > 0) dt = bounds.dt;
        if (bounds_m->count() > 0) {
          if (!(bounds.multiplier > 0.0)) throw UsageError("--multiplier must be positive");
          dt = 1.0 / (spec.frequency_hz() * bounds.multiplier);
        }
        if (bounds_bits->count() > 0) {
          j["bits"] = bounds.bits;
          j["quantization_error_bound"] = quantization_error_bound(bounds.bits);
        }
        if (dt) {
          const double f = spec.frequency_hz();
          j["dt_s"] = *dt;
          j["multiplier"] = 1.0 / (f * *dt);
          j["min_clock_hz"] = min_clock_frequency(*dt);
          j["max_phase_shift_rad"] = max_phase_shift(f, *dt);
          j["held_bound_paper"] = held_error_bound(f, *dt, BoundVariant::kPaper);
          j["held_bound_strict"] = held_error_bound(f, *dt, BoundVariant::kStrict);
          if (bounds_bits->count() > 0) {
            j["digitized_bound_paper"] =
                digitized_error_bound(f, *dt, bounds.bits, BoundVariant::kPaper);
            j["digitized_bound_strict"] =
                digitized_error_bound(f, *dt, bounds.bits, BoundVariant::kStrict);
          }
        }
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      out << j.dump(2) << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "ddsmetrics: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ddsmetrics: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace ddsm
