// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dupscan::cli {

struct IngestOpts {
  std::string posts;
  std::string format = "jsonl";
  std::string accounts;
  std::vector<std::string> langs = {"en", "hi"};
  int min_unique_words = 4;
  bool keep_retweets = false;
  std::string out;
};

struct EmbedOpts {
  std::string posts;
  std::string provider = "hashed";
  int dim = 384;
  int ngram_lo = 3;
  int ngram_hi = 5;
  std::uint64_t seed = 0x5eed;
  std::string endpoint;
  size_t batch_size = 64;
  std::string out;
};

struct ClusterOpts {
  std::string embeddings;
  std::string posts;
  double eps = 1.0;
  int min_pts = 2;
  int threads = 0;
  size_t size_threshold = 10;
  size_t consistency_cap = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

struct SweepOpts {
  std::string embeddings;
  std::string truth;
  std::string eps = "0.1:2.0:0.1";
  int min_pts = 2;
  int threads = 0;
  std::string out;
};

struct RopmOpts {
  std::string posts;
  std::vector<int> windows = {10, 100};
  double sim_threshold = 0.9;
  int threads = 0;
  std::string out;
};

struct GraphOpts {
  std::string clusters;
  std::string posts;
  std::uint32_t min_shared = 10;
  std::string out;
};

struct CommunitiesOpts {
  std::string edges;
  std::string accounts;
  std::uint64_t seed = 1;
  size_t min_size = 10;
  bool binary_edges = false;
  std::string out;
};

struct ScreenOpts {
  std::string accounts;
  std::string scores;
  std::string parties;
  double cap_min = 0.9;
  double rbs_min = 0.9;
  // keyword surfacing, run when all three of keywords/clusters/posts are given
  std::string keywords;
  std::string clusters;
  std::string posts;
  size_t top_k = 5;
  bool word_boundary = false;
  std::string out;
};

struct ToxicityOpts {
  std::string clusters;
  std::string posts;
  std::string lexicon;
  std::string endpoint;
  std::string parties;
  double threshold = 0.5;
  std::uint64_t seed = 1;
  std::string out;
};

struct SpeciousOpts {
  std::string posts;
  std::string domains;
  std::string clusters;
  std::string parties;
  std::string out;
};

struct TimelineOpts {
  std::string posts;
  std::string specious;
  std::string from;
  std::string to;
  std::string out;
};

struct SynthOpts {
  size_t accounts = 200;
  size_t campaigns = 50;
  double mean_size = 3.0;
  double mutation_rate = 0.01;
  size_t noise_posts = 300;
  double bot_fraction = 0.01;
  double specious_rate = 0.05;
  double toxic_fraction = 0.1;
  std::string t_begin = "2023-01-01T00:00:00Z";
  std::string t_end = "2023-02-15T00:00:00Z";
  int dim = 384;
  std::uint64_t seed = 42;
  std::string out;
};

struct EvaluateOpts {
  std::string clusters;
  std::string truth;
  std::string out;
};

struct ReportOpts {
  std::string out;
};

int run_ingest(const IngestOpts&);
int run_embed(const EmbedOpts&);
int run_cluster(const ClusterOpts&);
int run_sweep(const SweepOpts&);
int run_ropm(const RopmOpts&);
int run_graph(const GraphOpts&);
int run_communities(const CommunitiesOpts&);
int run_screen(const ScreenOpts&);
int run_toxicity(const ToxicityOpts&);
int run_specious(const SpeciousOpts&);
int run_timeline(const TimelineOpts&);
int run_synth(const SynthOpts&);
int run_evaluate(const EvaluateOpts&);
int run_report(const ReportOpts&);

}  // namespace dupscan::cli
