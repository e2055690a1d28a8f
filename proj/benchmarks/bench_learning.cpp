#include <benchmark/benchmark.h>

#include "hcn/data/presets.hpp"
#include "hcn/infer/infer.hpp"
#include "hcn/data/shapes.hpp"
#include "hcn/learn/learner.hpp"

using namespace hcn;

namespace {

void BM_TwoBarsEpoch(benchmark::State& state) {
  const auto p = data::preset("two-bars");
  const auto d = data::generate_preset(p, 1).train;
  for (auto _ : state) {
    state.PauseTiming();
    auto st = learn::init_messages(p.arch, p.hyper, d.images);
    state.ResumeTiming();
    benchmark::DoNotOptimize(learn::run_epoch(st));
  }
}
BENCHMARK(BM_TwoBarsEpoch)->Unit(benchmark::kMillisecond);

void BM_ShapesEpoch(benchmark::State& state) {
  auto p = data::preset("shapes");
  p.n_test = 0;
  const auto d = data::generate_preset(p, 1).train;
  const std::span images(d.images.data(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    auto st = learn::init_messages(p.arch, p.hyper, images);
    state.ResumeTiming();
    benchmark::DoNotOptimize(learn::run_epoch(st));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ShapesEpoch)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ClassifyShapes(benchmark::State& state) {
  auto p = data::preset("shapes");
  p.n_test = 100;
  const auto d = data::generate_preset(p, 2).test;
  const learn::TrainedModel m{p.arch, p.hyper, data::shapes_weights()};
  for (auto _ : state) benchmark::DoNotOptimize(infer::classify_batch(d.images, m, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.size()));
}
BENCHMARK(BM_ClassifyShapes)->Unit(benchmark::kMillisecond);

}  // namespace
