// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dupscan/cluster.hpp"
#include "dupscan/corpus.hpp"

namespace dupscan {

/// Unordered account pair (first < second) -> number of distinct clusters in
/// which both accounts posted.
using PairWeights = std::map<std::pair<std::string, std::string>, std::uint32_t>;

/// An account appearing several times in one cluster still counts once per
/// cluster. A clustered post without an account mapping is fatal.
PairWeights build_pairs(const ClusterSet& clusters,
                        const std::unordered_map<std::string, std::string>& post_accounts);

/// Weighted undirected account graph; no self-loops, weights > 0.
struct DuplicationGraph {
  std::vector<std::string> nodes;  // sorted ascending
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<size_t> adj_start;                           // CSR offsets, nodes.size()+1
  std::vector<std::pair<std::uint32_t, double>> adj;       // (neighbor, weight), symmetric
  double total_weight = 0.0;                               // each edge counted once
  size_t n_edges = 0;

  size_t size() const { return nodes.size(); }
  double degree(std::uint32_t v) const;
  DuplicationGraph binarized() const;  // all edge weights forced to 1
};

DuplicationGraph make_graph(const std::vector<std::tuple<std::string, std::string, double>>& edges);

struct ThresholdResult {
  DuplicationGraph graph;                       // edges with weight >= min_shared
  std::vector<std::string> super_duplicators;   // accounts on a retained edge
};

ThresholdResult threshold_graph(const PairWeights& pairs, std::uint32_t min_shared = 10);

struct GraphPartition {
  std::unordered_map<std::string, int> community;  // every node assigned
  int n_communities = 0;
  double q = 0.0;
  std::vector<double> q_per_pass;  // modularity after each Louvain pass
};

/// Two-phase Louvain on edge weights. Node visit order is seeded-shuffled per
/// pass; a fixed seed gives a reproducible partition. Passes repeat until the
/// modularity gain drops below 1e-7.
GraphPartition louvain(const DuplicationGraph& graph, std::uint64_t seed);

/// Q = sum_c [ w_in(c)/W - (s(c)/2W)^2 ]. A graph node missing from the
/// community map is fatal.
double modularity(const DuplicationGraph& graph,
                  const std::unordered_map<std::string, int>& community);

struct CommunityProfile {
  int community_id = 0;
  size_t size = 0;
  std::vector<std::pair<std::string, double>> members_by_degree;  // descending
  std::map<std::string, size_t> party_counts;                     // BJP / INC / OTHER
  size_t unlabeled = 0;
  std::string dominant;  // party name, "mixed", or "unaffiliated"
};

struct ProfileReport {
  double q = 0.0;
  int n_communities = 0;
  size_t n_accounts = 0;
  size_t min_size = 10;
  std::vector<CommunityProfile> communities;  // size >= min_size, largest first
  double top_share = 0.0;                     // accounts covered by the listed communities
};

ProfileReport community_profile(const DuplicationGraph& graph, const GraphPartition& partition,
                                const AccountCollection& accounts, size_t min_size = 10);

// --- external formats ---------------------------------------------------------

void write_edges_csv(const PairWeights& pairs, const std::string& path);
PairWeights load_edges_csv(const std::string& path);

void write_partition_csv(const GraphPartition& partition, const std::string& path);
std::unordered_map<std::string, int> load_partition_csv(const std::string& path);

/// Layout export for graph-visualization tools: node,degree,community,party.
void write_layout_csv(const DuplicationGraph& graph, const GraphPartition& partition,
                      const AccountCollection& accounts, const std::string& path);

}  // namespace dupscan
