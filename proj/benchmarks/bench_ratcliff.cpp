// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include <benchmark/benchmark.h>

#include <random>

#include "dupscan/ratcliff.hpp"
#include "dupscan/synth.hpp"

namespace {

void BM_Ratcliff(benchmark::State& state) {
  const size_t len = static_cast<size_t>(state.range(0));
  std::mt19937_64 rng(3);
  auto make = [&] {
    std::string s;
    for (size_t i = 0; i < len; ++i)
      s += (rng() % 6 == 0) ? ' ' : static_cast<char>('a' + rng() % 26);
    return s;
  };
  std::string a = make(), b = make();
  for (auto _ : state) benchmark::DoNotOptimize(dupscan::ratcliff_obershelp(a, b));
}
BENCHMARK(BM_Ratcliff)->Arg(40)->Arg(140)->Arg(280);

void BM_RopmScan(benchmark::State& state) {
  const int window = static_cast<int>(state.range(0));
  dupscan::SynthConfig cfg;
  cfg.n_accounts = 100;
  cfg.n_campaigns = 150;
  cfg.noise_posts = 1500;
  cfg.compute_cosine_floor = false;
  dupscan::SynthOutput synth = dupscan::generate(cfg);

  for (auto _ : state) {
    benchmark::DoNotOptimize(dupscan::ropm_scan(synth.posts, {.window = window}));
  }
  state.SetItemsProcessed(state.iterations() * synth.posts.size());
  state.counters["posts"] = static_cast<double>(synth.posts.size());
}
BENCHMARK(BM_RopmScan)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
