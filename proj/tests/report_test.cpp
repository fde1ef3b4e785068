#include "ddsm/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <charconv>
#include <random>

namespace ddsm {
namespace {

double reparse(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  EXPECT_EQ(ec, std::errc()) << text;
  EXPECT_EQ(ptr, text.data() + text.size()) << text;
  return value;
}

SweepSpec quick_spec() {
  SweepSpec spec;
  spec.plan.samples_per_period = 2048;
  spec.threads = 1;
  return spec;
}

TEST(FormatNumberTest, FixedAndScientificRanges) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.0078125), "0.0078125");
  EXPECT_EQ(format_number(1e-4), "0.0001");
  EXPECT_EQ(format_number(9.5e-5), "9.5e-05");
  EXPECT_EQ(format_number(123456.5), "123456.5");
  EXPECT_EQ(format_number(1e6), "1e+06");
  EXPECT_EQ(format_number(-6.3134), "-6.3134");
  EXPECT_EQ(format_number(64.0), "64");
}

TEST(FormatNumberTest, RoundTripsExactly) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> exponent(-12.0, 9.0);
  for (int i = 0; i < 50000; ++i) {
    const double x = (rng() % 2 ? -1.0 : 1.0) * std::pow(10.0, exponent(rng));
    const std::string text = format_number(x);
    ASSERT_EQ(text.find(','), std::string::npos);
    ASSERT_EQ(reparse(text), x) << text;
  }
}

TEST(FlagsFieldTest, Joins) {
  EXPECT_EQ(flags_field({}), "-");
  EXPECT_EQ(flags_field({.subnyquist = true}), "subnyquist");
  EXPECT_EQ(flags_field({.subnyquist = true, .dft_cap_exceeded = true}),
            "subnyquist|dft_cap_exceeded");
}

TEST(SweepCsvTest, Headers) {
  EXPECT_EQ(sweep_csv_header(SweepKind::kBits),
            "bits,mode,max_err,max_err_pct,eq5_bound,thd_ratio,thd_db");
  EXPECT_EQ(sweep_csv_header(SweepKind::kMultiplier),
            "m_requested,m_num,m_den,max_err,eq14_bound,strict_bound,thd_ratio,thd_db,flags");
  EXPECT_EQ(sweep_csv_header(SweepKind::kGrid),
            "bits,m_requested,m_num,m_den,max_err,eq16_bound,strict_bound,thd_ratio,"
            "thd_db,flags");
}

TEST(SweepCsvTest, BitsSweepRoundTrip) {
  SweepSpec spec = quick_spec();
  spec.bits = {1, 6, 1};
  const SweepResult result = sweep_bits(spec);
  const std::string csv = sweep_to_csv(result);
  EXPECT_EQ(csv.rfind("# ddsmetrics sweep bits\n", 0), 0u);
  const CsvTable table = parse_csv(csv);
  EXPECT_EQ(table.header.size(), 7u);
  ASSERT_EQ(table.rows.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& fields = table.rows[i];
    const MetricsReport& r = result.rows[i].report;
    ASSERT_EQ(fields.size(), 7u);
    EXPECT_EQ(fields[0], std::to_string(i + 1));
    EXPECT_EQ(fields[1], "floor");
    EXPECT_EQ(reparse(fields[2]), r.max_abs_error);
    EXPECT_EQ(reparse(fields[3]), r.max_abs_error_percent());
    EXPECT_EQ(reparse(fields[4]), r.paper_bound);
    EXPECT_EQ(reparse(fields[5]), *r.thd_ratio);
    EXPECT_EQ(reparse(fields[6]), *r.thd_db);
  }
}

TEST(SweepCsvTest, MultiplierSweepRoundTripWithFlagsAndEmptyThd) {
  SweepSpec spec = quick_spec();
  spec.multipliers = {1.5, 2.0, 3.1623};
  const SweepResult result = sweep_multiplier(spec);
  const CsvTable table = parse_csv(sweep_to_csv(result));
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[0][8], "subnyquist");
  // M = 2 holds zero everywhere: no fundamental, THD fields empty.
  EXPECT_EQ(table.rows[1][6], "");
  EXPECT_EQ(table.rows[1][7], "");
  EXPECT_EQ(table.rows[1][8], "-");
  EXPECT_EQ(table.rows[2][0], "3.1623");
  EXPECT_EQ(table.rows[2][1], "19");
  EXPECT_EQ(table.rows[2][2], "6");
  for (std::size_t i = 0; i < 3; ++i) {
    const MetricsReport& r = result.rows[i].report;
    EXPECT_EQ(reparse(table.rows[i][3]), r.max_abs_error);
    EXPECT_EQ(reparse(table.rows[i][4]), r.paper_bound);
    EXPECT_EQ(reparse(table.rows[i][5]), r.strict_bound);
  }
}

TEST(SweepCsvTest, CommentsEchoSpec) {
  SweepSpec spec = quick_spec();
  spec.bits = {2, 3, 1};
  spec.multipliers = {8.0};
  spec.q_max = 4;
  const std::string csv = sweep_to_csv(sweep_grid(spec));
  EXPECT_NE(csv.find("# bits: 2..3 step 1\n"), std::string::npos);
  EXPECT_NE(csv.find("# multipliers: 8\n"), std::string::npos);
  EXPECT_NE(csv.find("# qmax: 4\n"), std::string::npos);
  EXPECT_NE(csv.find("# samples_per_period: 2048\n"), std::string::npos);
  EXPECT_EQ(csv.find("threads"), std::string::npos);
  EXPECT_EQ(parse_csv(csv).rows.size(), 2u);
}

TEST(ReportJsonTest, KeysInOrderWithNulls) {
  const auto held = WaveformModel::held(SignalSpec(1.0), TimingConfig(4));
  const MetricsReport report = evaluate(held, SamplingPlan{});
  const auto j = report_to_json(report);
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"model", "freq_hz", "bits", "mode", "m_num",
                                            "m_den", "max_abs_error", "argmax_time_s",
                                            "thd_ratio", "thd_db", "paper_bound",
                                            "strict_bound", "schema_version"}));
  EXPECT_EQ(j["model"], "held");
  EXPECT_TRUE(j["bits"].is_null());
  EXPECT_TRUE(j["mode"].is_null());
  EXPECT_EQ(j["m_num"], 4);
  EXPECT_EQ(j["max_abs_error"].get<double>(), report.max_abs_error);
  EXPECT_EQ(j["schema_version"], 1);
}

TEST(ReportJsonTest, DigitizedPaperBound) {
  const auto model = WaveformModel::digitized(SignalSpec(1.0), TimingConfig(64),
                                              QuantizerConfig(8));
  const auto j = report_to_json(evaluate(model, SamplingPlan{}));
  const double expected = 1.0 / 128.0 + std::sin(std::numbers::pi / 32.0);
  EXPECT_NEAR(j["paper_bound"].get<double>(), expected, 1e-15);
  EXPECT_NEAR(j["paper_bound"].get<double>(), 0.1058295, 2e-7);
  EXPECT_EQ(j["bits"], 8);
  EXPECT_EQ(j["mode"], "floor");
}

TEST(ReportCsvTest, OneRowWithEmptyNulls) {
  const MetricsReport report =
      evaluate(WaveformModel::target(SignalSpec(2.0)), SamplingPlan{});
  const CsvTable table = parse_csv(report_to_csv(report));
  ASSERT_EQ(table.header.size(), 13u);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0][0], "target");
  EXPECT_EQ(table.rows[0][1], "2");
  EXPECT_EQ(table.rows[0][2], "");
  EXPECT_EQ(table.rows[0][6], "0");
  EXPECT_EQ(table.rows[0][12], "1");
}

TEST(ParseCsvTest, SkipsCommentsAndCarriageReturns) {
  const CsvTable table = parse_csv("# note\r\na,b\r\n1,\r\n\n# tail\n");
  EXPECT_EQ(table.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0], (std::vector<std::string>{"1", ""}));
}

}  // namespace
}  // namespace ddsm
