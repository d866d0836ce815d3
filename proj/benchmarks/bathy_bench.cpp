#include <benchmark/benchmark.h>

#include <random>

#include "bathy/detect_eval.hpp"
#include "bathy/pipeline.hpp"
#include "bathy/pointcloud.hpp"
#include "bathy/scanline.hpp"
#include "bathy/sonar_log.hpp"
#include "bathy/synth.hpp"

namespace {

using namespace bathy;

SyntheticSurvey survey(std::size_t pings) {
  SynthOptions o;
  o.speckle = {0.2, 1};
  o.stray_fraction = 0.05;
  return generate_log(SlopeField{}, straight_path({0, 0}, 0.0, 0.1, pings), o);
}

void BM_ParseLog(benchmark::State& state) {
  const auto bytes = write_log(survey(static_cast<std::size_t>(state.range(0))).log);
  for (auto _ : state) benchmark::DoNotOptimize(parse_log(bytes));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_ParseLog)->Arg(1000)->Arg(10000);

void BM_FirstReturnOverlay(benchmark::State& state) {
  const SurveyLog log = survey(static_cast<std::size_t>(state.range(0))).log;
  for (auto _ : state) benchmark::DoNotOptimize(first_return_overlay(log, kDefaultThreshold));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * log.pings.size()));
}
BENCHMARK(BM_FirstReturnOverlay)->Arg(1000)->Arg(10000);

void BM_RemoveOutliers(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<CloudPoint> cloud(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < cloud.size(); ++i) cloud[i] = {u(rng), u(rng), -u(rng) * 0.05, PointSource::Nadir, i};
  const OutlierParams params{0.5, 3};
  for (auto _ : state) benchmark::DoNotOptimize(remove_outliers(cloud, params));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * cloud.size()));
}
BENCHMARK(BM_RemoveOutliers)->Arg(10000)->Arg(300000);

void BM_Pipeline(benchmark::State& state) {
  const SurveyLog log = survey(static_cast<std::size_t>(state.range(0))).log;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(log, PipelineConfig{}));
}
BENCHMARK(BM_Pipeline)->Arg(10000);

void BM_Evaluate(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(0.0, 500.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Detection> truths;
  std::vector<Detection> preds;
  for (int i = 0; i < state.range(0); ++i) {
    Detection t{"img" + std::to_string(i % 50), i % 4, {}, 1.0};
    t.box.x_min = pos(rng);
    t.box.y_min = pos(rng);
    t.box.x_max = t.box.x_min + 20;
    t.box.y_max = t.box.y_min + 20;
    truths.push_back(t);
    Detection p = t;
    p.box.x_min += 3 * unit(rng);
    p.confidence = unit(rng);
    preds.push_back(p);
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(preds, truths));
}
BENCHMARK(BM_Evaluate)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
