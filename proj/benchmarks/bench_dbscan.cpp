// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include <benchmark/benchmark.h>

#include "dupscan/cluster.hpp"
#include "dupscan/synth.hpp"

namespace {

void BM_Dbscan(benchmark::State& state) {
  const size_t campaigns = static_cast<size_t>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  dupscan::SynthConfig cfg;
  cfg.n_accounts = std::max<size_t>(50, campaigns / 2);
  cfg.n_campaigns = campaigns;
  cfg.noise_posts = campaigns;
  cfg.embed.dim = d;
  cfg.compute_cosine_floor = false;
  dupscan::SynthOutput synth = dupscan::generate(cfg);
  auto [emb, stats] = dupscan::embed_posts(synth.posts, cfg.embed);

  for (auto _ : state) {
    benchmark::DoNotOptimize(dupscan::dbscan(emb, {.eps = 0.7}));
  }
  state.SetItemsProcessed(state.iterations() * emb.size());
  state.counters["posts"] = static_cast<double>(emb.size());
}
BENCHMARK(BM_Dbscan)->Args({250, 64})->Args({1000, 64})->Args({250, 384})
    ->Unit(benchmark::kMillisecond);

void BM_EpsSweepSingle(benchmark::State& state) {
  dupscan::SynthConfig cfg;
  cfg.n_accounts = 200;
  cfg.n_campaigns = 400;
  cfg.noise_posts = 400;
  cfg.embed.dim = 384;
  cfg.compute_cosine_floor = false;
  dupscan::SynthOutput synth = dupscan::generate(cfg);
  auto [emb, stats] = dupscan::embed_posts(synth.posts, cfg.embed);

  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dupscan::eps_sweep(emb, synth.truth.post_campaign, {1.0}));
  }
  state.SetItemsProcessed(state.iterations() * emb.size());
}
BENCHMARK(BM_EpsSweepSingle)->Unit(benchmark::kMillisecond);

}  // namespace
