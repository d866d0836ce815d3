#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bathy/error.hpp"
#include "bathy/pipeline.hpp"
#include "bathy/synth.hpp"

namespace bathy {
namespace {

SyntheticSurvey flat_pond(std::size_t pings, double spacing) {
  SynthOptions o;
  o.ppd = 25.0;
  return generate_log(ConstantField{4.0}, straight_path({0, 0}, 0.3, spacing, pings), o);
}

TEST(Pipeline, FlatPondKeepsEverything) {
  const auto s = flat_pond(400, 0.05);
  PipelineConfig cfg;
  cfg.ppd = 25.0;
  const PipelineResult r = run_pipeline(s.log, cfg);
  EXPECT_TRUE(r.calibration_overridden);
  EXPECT_EQ(r.raw_cloud.size(), 3 * 400U);
  EXPECT_EQ(r.removed, 0U);
  EXPECT_EQ(r.cloud.size(), r.raw_cloud.size());
  const double alpha = std::numbers::pi / 6.0;
  for (const auto& p : r.cloud) {
    if (p.source == PointSource::Nadir) {
      EXPECT_NEAR(p.z, -4.0, 1e-6);
    } else {
      EXPECT_NEAR(p.z, -4.0, std::cos(alpha) / 50.0 + 1e-6);
    }
  }
}

TEST(Pipeline, CalibratedRunUsesFlattestPing) {
  const auto s = flat_pond(100, 0.1);
  const PipelineResult r = run_pipeline(s.log, PipelineConfig{});
  EXPECT_FALSE(r.calibration_overridden);
  EXPECT_EQ(r.calibration.ref_ping, 0U);  // all pings tie; lowest index wins
  EXPECT_DOUBLE_EQ(r.calibration.ppd, 115.0 / 4.0);
}

TEST(Pipeline, RepeatedFixYieldsNoSidePoints) {
  auto s = flat_pond(10, 0.1);
  s.log.pings[4].lat = s.log.pings[3].lat;
  s.log.pings[4].lon = s.log.pings[3].lon;
  s.log.pings[4].t = s.log.pings[3].t + 0.05;
  PipelineConfig cfg;
  cfg.ppd = 25.0;
  const PipelineResult r = run_pipeline(s.log, cfg);
  EXPECT_FALSE(r.frames[3].valid);
  std::size_t ping3 = 0;
  for (const auto& p : r.raw_cloud) ping3 += p.ping == 3 ? 1 : 0;
  EXPECT_EQ(ping3, 1U);  // nadir only
  EXPECT_EQ(r.raw_cloud.size(), 3 * 10U - 2);
}

TEST(Pipeline, ThreadCountDoesNotChangeOutput) {
  SynthOptions o;
  o.speckle = {0.3, 11};
  o.stray_fraction = 0.1;
  const auto s = generate_log(BowlField{10, 3, 6, 2, 30},
                              jitter_path(lawnmower_path({0, 0}, 20, 3, 3, 0.05), 0.01, 4), o);
  PipelineConfig cfg;
  const PipelineResult one = run_pipeline(s.log, cfg);
  cfg.threads = 4;
  const PipelineResult four = run_pipeline(s.log, cfg);
  EXPECT_EQ(export_ply(one.cloud), export_ply(four.cloud));
  EXPECT_EQ(export_xyz(one.cloud), export_xyz(four.cloud));
  EXPECT_EQ(format_summary(s.log, PipelineConfig{}, one), format_summary(s.log, PipelineConfig{}, four));
}

TEST(Pipeline, EmptyLogHasNoCalibration) {
  SurveyLog log;
  try {
    run_pipeline(log, PipelineConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoUsablePing);
  }
  PipelineConfig cfg;
  cfg.ppd = 25.0;
  EXPECT_TRUE(run_pipeline(log, cfg).cloud.empty());
}

TEST(Pipeline, ConfigValidation) {
  PipelineConfig cfg;
  cfg.threshold = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.ppd = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.outlier_radius = -1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.threads = 0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Pipeline, SummaryKeys) {
  const auto s = flat_pond(50, 0.1);
  PipelineConfig cfg;
  cfg.ppd = 25.0;
  const std::string text = format_summary(s.log, cfg, run_pipeline(s.log, cfg));
  for (const char* key : {"pings=50\n", "ppd=25\n", "ref_ping=override\n", "points_before=150\n",
                          "removal_percent="}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(Pipeline, NoisyBenchmarkIsFrozen) {
  const BenchmarkSpec bench = noisy_benchmark();
  const auto s = generate_log(bench.field, bench.path, bench.options);
  const PipelineResult r = run_pipeline(s.log, PipelineConfig{});
  EXPECT_EQ(r.raw_cloud.size(), 18723U);
  EXPECT_EQ(r.removed, 1852U);
}

}  // namespace
}  // namespace bathy
