// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dupscan/cluster.hpp"
#include "dupscan/corpus.hpp"
#include "dupscan/embedding.hpp"
#include "dupscan/graph.hpp"

namespace dupscan {

/// Knobs for planting duplication campaigns in a synthetic corpus.
struct SynthConfig {
  size_t n_accounts = 200;
  size_t n_campaigns = 50;
  double campaign_mean_size = 3.0;  // geometric, clipped to [2, 10*mean]
  double mutation_rate = 0.01;      // per-letter substitution probability
  size_t noise_posts = 300;         // unique filler posts

  double p_bjp = 0.04;
  double p_inc = 0.04;
  double bot_fraction = 0.01;
  double verified_fraction = 0.03;

  double specious_link_rate = 0.05;     // posts carrying a specious URL
  double toxic_campaign_fraction = 0.1;
  double keyword_campaign_fraction = 0.15;

  // Chronological spread of campaign members, as fractions; the remainder is
  // widely dispersed. Gap scales are relative to the mean inter-post spacing,
  // so "tight" lands within small sliding windows and "wide" beyond them.
  double tight_campaign_fraction = 0.34;
  double medium_campaign_fraction = 0.33;

  std::int64_t t_begin = 1672531200;  // 2023-01-01T00:00:00Z
  std::int64_t t_end = 1676419200;    // 2023-02-15T00:00:00Z
  size_t max_posts_per_account = 3200;

  HashedNgramParams embed;    // used for the planted cosine floor
  bool compute_cosine_floor = true;

  std::uint64_t seed = 42;
};

struct CampaignTruth {
  std::string id;
  size_t size = 0;
  bool toxic = false;
  std::string keyword;  // empty when none planted
};

struct GroundTruth {
  TruthLabels post_campaign;  // every post id -> campaign id or ""
  std::map<std::string, CampaignTruth> campaigns;
  std::map<std::string, bool> account_bot_persona;
  std::vector<std::string> specious_posts;        // ascending post id
  std::map<std::string, size_t> specious_daily;   // "YYYY-MM-DD" -> count
  double cosine_floor = 1.0;  // min within-campaign cosine under cfg.embed
};

struct SynthOutput {
  PostCollection posts;  // chronological (timestamp, id)
  AccountCollection accounts;
  GroundTruth truth;
  std::vector<std::string> specious_domains;  // the planted domain list
  std::vector<std::string> keywords;          // the plantable keyword list
};

/// Fully reproducible from the seed: two runs with equal configs are
/// byte-identical once serialized.
SynthOutput generate(const SynthConfig& config);

/// The built-in lexicon matching the generator's toxic trigger terms, as CSV
/// rows `term,dimension,weight`.
std::string builtin_lexicon_csv();

// --- scoring ------------------------------------------------------------------

struct EvalReport {
  PartitionScore score;
  size_t n_predicted = 0;
  size_t n_campaigns = 0;         // distinct planted campaigns in the universe
  long long cluster_count_delta = 0;  // predicted - planted
};

/// Scores predicted clusters against truth over the universe of posts present
/// in the ClusterSet (clusters plus noise).
EvalReport evaluate(const ClusterSet& predicted, const TruthLabels& truth);

// --- truth wire format ----------------------------------------------------------

/// JSONL {"post_id": str, "campaign_id": str|null}.
void save_truth_jsonl(const TruthLabels& truth, const std::string& path);
TruthLabels load_truth_jsonl(const std::string& path);

// --- planted graphs ---------------------------------------------------------------

struct PlantedGraph {
  DuplicationGraph graph;
  std::unordered_map<std::string, int> blocks;  // node -> planted block
};

/// Weighted block-model graph for community-detection checks: within-block
/// edges with probability p_in (weights 1..3), cross-block with p_cross
/// (weight 1).
PlantedGraph planted_partition_graph(size_t n_blocks, size_t block_size, double p_in,
                                     double p_cross, std::uint64_t seed);

}  // namespace dupscan
