// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dupscan/embedding.hpp"

namespace dupscan {

struct ClusterParams {
  double eps = 1.0;   // neighborhood radius (Euclidean), > 0
  int min_pts = 2;    // neighborhood size making a core point, >= 2, self-inclusive
  int threads = 0;    // 0 = hardware concurrency
  // Neighbor pairs precomputed in one symmetric pass when they fit this
  // budget; otherwise every point is re-scanned on demand. Both paths are
  // exact and give identical partitions. 0 forces on-demand.
  size_t neighbor_budget = 50'000'000;
};

struct Cluster {
  int id = 0;                            // dense, in creation order
  std::vector<std::string> member_ids;   // ascending post id, size >= 2
  std::int64_t first_ts = 0;
  std::int64_t last_ts = 0;

  std::int64_t active_span_seconds() const { return last_ts - first_ts; }
  size_t size() const { return member_ids.size(); }
};

/// Clusters plus noise partition the clustered post set.
struct ClusterSet {
  std::vector<Cluster> clusters;
  std::vector<std::string> noise;  // ascending post id

  size_t total_clustered() const;
  const Cluster* find(int cluster_id) const;
};

/// DBSCAN over the embedding set. Core point: >= min_pts points within eps,
/// inclusive of self. Processing order is ascending post id, and border
/// points go to the first core point that claims them in that order, so the
/// result is a pure function of (embeddings, params). Neighbor search is an
/// exact blocked scan with early exit on the eps bound.
ClusterSet dbscan(const EmbeddingSet& embeddings, const ClusterParams& params);

/// Fills first_ts/last_ts from a post_id -> timestamp map. Members missing
/// from the map are ignored; clusters with no timestamped member keep 0.
void annotate_spans(ClusterSet& clusters,
                    const std::unordered_map<std::string, std::int64_t>& timestamps);

// --- consistency --------------------------------------------------------------

struct ClusterConsistency {
  int cluster_id = 0;
  double min_cosine = 1.0;
  double mean_cosine = 1.0;
  bool sampled = false;
};

struct ConsistencyReport {
  std::vector<ClusterConsistency> per_cluster;
  double min_cosine = 1.0;   // min over clusters
  double mean_cosine = 1.0;  // mean over all evaluated within-cluster pairs
  size_t pairs_evaluated = 0;
  bool any_sampled = false;
};

struct ConsistencyOptions {
  size_t exact_size_cap = 1000;   // all-pairs below, sampling above
  size_t sample_pairs = 10000;    // per sampled cluster
  std::uint64_t seed = 1;
};

/// Within-cluster cosine similarity statistics. Every cluster member must be
/// embedded (DataError otherwise).
ConsistencyReport consistency(const ClusterSet& clusters, const EmbeddingSet& embeddings,
                              const ConsistencyOptions& options = {});

// --- statistics ---------------------------------------------------------------

struct StatsReport {
  size_t n_clusters = 0;
  double mean_size = 0.0;
  double sd_size = 0.0;  // population SD
  size_t max_size = 0;
  size_t n_ge_k = 0;     // clusters with size >= size_threshold
  size_t size_threshold = 10;
  size_t total_clustered = 0;
  size_t n_noise = 0;
  size_t n_accounts = 0;      // distinct accounts in clustered posts
  std::uint64_t post_pairs = 0;     // sum of C(size, 2)
  std::uint64_t account_pairs = 0;  // distinct co-clustered account pairs
};

/// Account-level figures need the post -> account map; pass nullptr to skip
/// them.
StatsReport cluster_stats(const ClusterSet& clusters,
                          const std::unordered_map<std::string, std::string>* post_accounts,
                          size_t size_threshold = 10);

// --- truth scoring / eps sweep -------------------------------------------------

/// Ground truth: post id -> campaign id, empty string meaning "no campaign".
using TruthLabels = std::unordered_map<std::string, std::string>;

struct PartitionScore {
  size_t n_labeled = 0;        // posts carrying a campaign label
  size_t n_correct = 0;        // majority-mapping accuracy
  size_t n_misclassified = 0;  // n_labeled - n_correct
  double precision = 1.0;      // pairwise
  double recall = 1.0;
  double f1 = 0.0;
  double ari = 1.0;            // adjusted Rand index
};

/// Scores a clustering against campaign truth over the embedded universe.
/// Posts with no campaign act as singleton truth classes, noise posts as
/// singleton predictions. Truth must cover every embedded post (DataError).
PartitionScore score_against_truth(const ClusterSet& clusters,
                                   const std::vector<std::string>& universe_ids,
                                   const TruthLabels& truth);

struct SweepRow {
  double eps = 0.0;
  size_t n_clusters = 0;
  PartitionScore score;
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

/// Runs dbscan at each eps and scores against the ground-truth partition.
/// Empty eps list is an error.
SweepReport eps_sweep(const EmbeddingSet& embeddings, const TruthLabels& truth,
                      const std::vector<double>& eps_values, int min_pts = 2,
                      int threads = 0);

// --- external formats -----------------------------------------------------------

/// CSV `post_id,cluster_id` with -1 for noise.
void write_assignments_csv(const ClusterSet& clusters, const std::string& path);
ClusterSet load_assignments_csv(const std::string& path);

}  // namespace dupscan
