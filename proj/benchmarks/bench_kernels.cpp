#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hcn/model/bconv.hpp"
#include "hcn/mp/factors.hpp"

using namespace hcn;

namespace {

std::vector<double> random_messages(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

void BM_OrUpdate(benchmark::State& state) {
  const auto in = random_messages(static_cast<std::size_t>(state.range(0)), 1);
  std::vector<double> out(in.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(mp::or_update(in, 0.5, out));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OrUpdate)->Arg(4)->Arg(25)->Arg(100);

void BM_PoolUpdate(benchmark::State& state) {
  const auto in = random_messages(static_cast<std::size_t>(state.range(0)), 2);
  std::vector<double> out(in.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(mp::pool_update(-0.3, in, {}, out));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PoolUpdate)->Arg(9)->Arg(25);

void BM_AndUpdate(benchmark::State& state) {
  const auto in = random_messages(3 * 1024, 3);
  for (auto _ : state) {
    for (std::size_t i = 0; i < in.size(); i += 3) benchmark::DoNotOptimize(mp::and_update(in[i], in[i + 1], in[i + 2]));
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_AndUpdate);

void BM_Bconv(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(4);
  model::BinaryTensor4 w(1, 8, 5, 5);
  for (std::size_t i = 0; i < w.size(); ++i) w.set(i, gen() % 4 == 0);
  model::BinaryTensor3 s(8, side - 4, side - 4);
  for (std::size_t i = 0; i < s.size(); ++i) s.set(i, gen() % 50 == 0);
  for (auto _ : state) benchmark::DoNotOptimize(model::bconv(s, w));
}
BENCHMARK(BM_Bconv)->Arg(30)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
