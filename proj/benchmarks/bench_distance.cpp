// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dupscan/embedding.hpp"
#include "dupscan/io_util.hpp"

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int d) {
  std::vector<double> v(d);
  for (double& c : v) c = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return v;
}

void BM_SquaredDistanceBounded(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const double bound = static_cast<double>(state.range(1));
  std::mt19937_64 rng(1);
  auto u = random_vec(rng, d);
  auto v = random_vec(rng, d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dupscan::squared_distance_bounded(u.data(), v.data(), d, bound));
  }
  state.SetItemsProcessed(state.iterations());
}
// bound 1: early exit on typical far pairs; bound 1e9: full scan
BENCHMARK(BM_SquaredDistanceBounded)->Args({64, 1})->Args({64, 1000000000});
BENCHMARK(BM_SquaredDistanceBounded)->Args({384, 1})->Args({384, 1000000000});

void BM_Cosine(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  auto u = random_vec(rng, d);
  auto v = random_vec(rng, d);
  for (auto _ : state) benchmark::DoNotOptimize(dupscan::cosine(u, v));
}
BENCHMARK(BM_Cosine)->Arg(64)->Arg(384);

void BM_HashedNgramEmbed(benchmark::State& state) {
  dupscan::HashedNgramParams params;
  params.dim = static_cast<int>(state.range(0));
  std::string text =
      "sample post text with a dozen or so words to hash into signed buckets";
  for (auto _ : state) benchmark::DoNotOptimize(dupscan::hashed_ngram_embed(text, params));
}
BENCHMARK(BM_HashedNgramEmbed)->Arg(64)->Arg(384);

}  // namespace

int main(int argc, char** argv) {
  dupscan::set_log_enabled(false);
  ::benchmark::Initialize(&argc, argv);
  if (::benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  ::benchmark::RunSpecifiedBenchmarks();
  ::benchmark::Shutdown();
  return 0;
}
