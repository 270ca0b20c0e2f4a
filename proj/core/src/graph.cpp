// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dupscan/io_util.hpp"

namespace dupscan {

namespace {

constexpr double kGainTol = 1e-9;
constexpr double kPassTol = 1e-7;

// Louvain working graph; aggregation introduces self-loops.
struct LevelGraph {
  std::vector<size_t> adj_start;
  std::vector<std::pair<std::uint32_t, double>> adj;  // excludes self-loops
  std::vector<double> self_weight;
  std::vector<double> degree;  // sum of incident weights, self-loops twice
  double two_w = 0.0;

  size_t size() const { return self_weight.size(); }
};

LevelGraph to_level(const DuplicationGraph& g) {
  LevelGraph lg;
  lg.adj_start = g.adj_start;
  lg.adj = g.adj;
  lg.self_weight.assign(g.size(), 0.0);
  lg.degree.assign(g.size(), 0.0);
  for (size_t v = 0; v < g.size(); ++v) {
    double d = 0.0;
    for (size_t e = g.adj_start[v]; e < g.adj_start[v + 1]; ++e) d += g.adj[e].second;
    lg.degree[v] = d;
    lg.two_w += d;
  }
  return lg;
}

double level_modularity(const LevelGraph& g, const std::vector<int>& comm) {
  if (g.two_w == 0.0) return 0.0;
  std::unordered_map<int, double> w_in, s;
  for (size_t v = 0; v < g.size(); ++v) {
    s[comm[v]] += g.degree[v];
    w_in[comm[v]] += g.self_weight[v];
    for (size_t e = g.adj_start[v]; e < g.adj_start[v + 1]; ++e) {
      auto [u, w] = g.adj[e];
      if (comm[u] == comm[v] && u > v) w_in[comm[v]] += w;
    }
  }
  const double W = g.two_w / 2.0;
  double q = 0.0;
  for (const auto& [c, win] : w_in) q += win / W;
  for (const auto& [c, sc] : s) {
    double frac = sc / (2.0 * W);
    q -= frac * frac;
  }
  return q;
}

void fisher_yates(std::vector<std::uint32_t>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

// One Louvain local phase; returns true if any node moved.
bool local_phase(const LevelGraph& g, std::vector<int>& comm, std::mt19937_64& rng) {
  const size_t n = g.size();
  std::vector<double> comm_tot(n, 0.0);
  for (size_t v = 0; v < n; ++v) comm_tot[comm[v]] += g.degree[v];

  std::vector<std::uint32_t> order(n);
  for (size_t v = 0; v < n; ++v) order[v] = static_cast<std::uint32_t>(v);
  fisher_yates(order, rng);

  std::vector<double> link_w(n, 0.0);
  std::vector<int> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::uint32_t u : order) {
      const int cu = comm[u];
      touched.clear();
      for (size_t e = g.adj_start[u]; e < g.adj_start[u + 1]; ++e) {
        auto [v, w] = g.adj[e];
        const int cv = comm[v];
        if (link_w[cv] == 0.0) touched.push_back(cv);
        link_w[cv] += w;
      }
      comm_tot[cu] -= g.degree[u];
      // score(C) = k_{u,C} - s(C) * k_u / 2W; maximizing it maximizes the
      // modularity gain of placing u in C
      double best_score = link_w[cu] - comm_tot[cu] * g.degree[u] / g.two_w;
      int best = cu;
      for (int cc : touched) {
        if (cc == cu) continue;
        double score = link_w[cc] - comm_tot[cc] * g.degree[u] / g.two_w;
        if (score > best_score + kGainTol) {
          best_score = score;
          best = cc;
        }
      }
      comm_tot[best] += g.degree[u];
      if (best != cu) {
        comm[u] = best;
        moved = true;
        any_move = true;
      }
      for (int cc : touched) link_w[cc] = 0.0;
      if (link_w[cu] != 0.0) link_w[cu] = 0.0;
    }
  }
  return any_move;
}

// Renumbers communities densely (order of first appearance by node index) and
// aggregates the graph.
LevelGraph aggregate(const LevelGraph& g, std::vector<int>& comm, size_t& n_communities) {
  std::unordered_map<int, int> renumber;
  for (size_t v = 0; v < g.size(); ++v) {
    auto [it, added] = renumber.emplace(comm[v], static_cast<int>(renumber.size()));
    comm[v] = it->second;
  }
  n_communities = renumber.size();

  LevelGraph out;
  out.self_weight.assign(n_communities, 0.0);
  out.degree.assign(n_communities, 0.0);
  out.two_w = g.two_w;

  std::vector<std::map<std::uint32_t, double>> edges(n_communities);
  for (size_t v = 0; v < g.size(); ++v) {
    const int cv = comm[v];
    out.self_weight[cv] += g.self_weight[v];
    for (size_t e = g.adj_start[v]; e < g.adj_start[v + 1]; ++e) {
      auto [u, w] = g.adj[e];
      const int cu = comm[u];
      if (cu == cv) {
        if (u > v) out.self_weight[cv] += w;
      } else {
        edges[cv][static_cast<std::uint32_t>(cu)] += w;
      }
    }
  }
  out.adj_start.assign(n_communities + 1, 0);
  for (size_t c = 0; c < n_communities; ++c) out.adj_start[c + 1] = out.adj_start[c] + edges[c].size();
  out.adj.reserve(out.adj_start.back());
  for (size_t c = 0; c < n_communities; ++c) {
    double d = 2.0 * out.self_weight[c];
    for (const auto& [u, w] : edges[c]) {
      out.adj.emplace_back(u, w);
      d += w;
    }
    out.degree[c] = d;
  }
  return out;
}

}  // namespace

double DuplicationGraph::degree(std::uint32_t v) const {
  double d = 0.0;
  for (size_t e = adj_start[v]; e < adj_start[v + 1]; ++e) d += adj[e].second;
  return d;
}

DuplicationGraph DuplicationGraph::binarized() const {
  DuplicationGraph g = *this;
  for (auto& [v, w] : g.adj) w = 1.0;
  g.total_weight = static_cast<double>(n_edges);
  return g;
}

PairWeights build_pairs(const ClusterSet& clusters,
                        const std::unordered_map<std::string, std::string>& post_accounts) {
  PairWeights pairs;
  std::vector<std::string> accs;
  for (const Cluster& c : clusters.clusters) {
    accs.clear();
    for (const std::string& post_id : c.member_ids) {
      auto it = post_accounts.find(post_id);
      if (it == post_accounts.end())
        throw DataError("build_pairs: no account mapping for post " + post_id);
      accs.push_back(it->second);
    }
    std::sort(accs.begin(), accs.end());
    accs.erase(std::unique(accs.begin(), accs.end()), accs.end());
    for (size_t i = 0; i < accs.size(); ++i)
      for (size_t j = i + 1; j < accs.size(); ++j)
        ++pairs[{accs[i], accs[j]}];
  }
  return pairs;
}

DuplicationGraph make_graph(
    const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  DuplicationGraph g;
  for (const auto& [a, b, w] : edges) {
    if (a == b) throw DataError("make_graph: self-loop on " + a);
    if (!(w > 0.0)) throw DataError("make_graph: non-positive weight on " + a + "," + b);
    g.nodes.push_back(a);
    g.nodes.push_back(b);
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) g.index[g.nodes[i]] = i;

  std::vector<std::map<std::uint32_t, double>> adj(g.nodes.size());
  for (const auto& [a, b, w] : edges) {
    std::uint32_t ia = g.index[a], ib = g.index[b];
    adj[ia][ib] += w;
    adj[ib][ia] += w;
  }
  g.adj_start.assign(g.nodes.size() + 1, 0);
  for (size_t v = 0; v < g.nodes.size(); ++v) g.adj_start[v + 1] = g.adj_start[v] + adj[v].size();
  g.adj.reserve(g.adj_start.back());
  for (size_t v = 0; v < g.nodes.size(); ++v)
    for (const auto& [u, w] : adj[v]) {
      g.adj.emplace_back(u, w);
      if (u > v) {
        g.total_weight += w;
        ++g.n_edges;
      }
    }
  return g;
}

ThresholdResult threshold_graph(const PairWeights& pairs, std::uint32_t min_shared) {
  std::vector<std::tuple<std::string, std::string, double>> edges;
  for (const auto& [pair, w] : pairs)
    if (w >= min_shared) edges.emplace_back(pair.first, pair.second, static_cast<double>(w));
  ThresholdResult result;
  result.graph = make_graph(edges);
  result.super_duplicators = result.graph.nodes;  // every node has a retained edge
  return result;
}

GraphPartition louvain(const DuplicationGraph& graph, std::uint64_t seed) {
  GraphPartition result;
  if (graph.size() == 0) return result;

  std::mt19937_64 rng(seed);
  LevelGraph level = to_level(graph);

  // node -> community at the current level, and original node -> level node
  std::vector<int> comm(level.size());
  for (size_t v = 0; v < comm.size(); ++v) comm[v] = static_cast<int>(v);
  std::vector<int> assignment(graph.size());
  for (size_t v = 0; v < assignment.size(); ++v) assignment[v] = static_cast<int>(v);

  double prev_q = level_modularity(level, comm);
  for (;;) {
    bool moved = local_phase(level, comm, rng);
    double q = level_modularity(level, comm);
    result.q_per_pass.push_back(q);
    if (!moved || q - prev_q < kPassTol) {
      for (int& a : assignment) a = comm[a];
      break;
    }
    prev_q = q;
    size_t n_communities = 0;
    level = aggregate(level, comm, n_communities);
    // aggregate renumbered comm densely: comm[level_node] is now the
    // super-node index in the new level
    for (int& a : assignment) a = comm[a];
    comm.assign(n_communities, 0);
    for (size_t v = 0; v < n_communities; ++v) comm[v] = static_cast<int>(v);
  }

  // densify final community ids in ascending node order
  std::unordered_map<int, int> renumber;
  for (size_t v = 0; v < graph.size(); ++v) {
    auto [it, added] = renumber.emplace(assignment[v], static_cast<int>(renumber.size()));
    result.community[graph.nodes[v]] = it->second;
  }
  result.n_communities = static_cast<int>(renumber.size());
  result.q = modularity(graph, result.community);
  return result;
}

double modularity(const DuplicationGraph& graph,
                  const std::unordered_map<std::string, int>& community) {
  if (graph.size() == 0) return 0.0;
  std::vector<int> comm(graph.size());
  for (size_t v = 0; v < graph.size(); ++v) {
    auto it = community.find(graph.nodes[v]);
    if (it == community.end())
      throw DataError("modularity: node not covered by partition: " + graph.nodes[v]);
    comm[v] = it->second;
  }
  if (graph.total_weight == 0.0) return 0.0;

  std::unordered_map<int, double> w_in, s;
  for (size_t v = 0; v < graph.size(); ++v) {
    s[comm[v]] += graph.degree(static_cast<std::uint32_t>(v));
    for (size_t e = graph.adj_start[v]; e < graph.adj_start[v + 1]; ++e) {
      auto [u, w] = graph.adj[e];
      if (u > v && comm[u] == comm[v]) w_in[comm[v]] += w;
    }
  }
  const double W = graph.total_weight;
  double q = 0.0;
  for (const auto& [c, win] : w_in) q += win / W;
  for (const auto& [c, sc] : s) {
    const double frac = sc / (2.0 * W);
    q -= frac * frac;
  }
  return q;
}

ProfileReport community_profile(const DuplicationGraph& graph, const GraphPartition& partition,
                                const AccountCollection& accounts, size_t min_size) {
  ProfileReport report;
  report.q = partition.q;
  report.n_communities = partition.n_communities;
  report.n_accounts = graph.size();
  report.min_size = min_size;

  std::unordered_map<int, std::vector<std::uint32_t>> members;
  for (std::uint32_t v = 0; v < graph.size(); ++v) {
    auto it = partition.community.find(graph.nodes[v]);
    if (it == partition.community.end())
      throw DataError("community_profile: node not covered: " + graph.nodes[v]);
    members[it->second].push_back(v);
  }

  std::vector<int> ids;
  for (const auto& [cid, m] : members)
    if (m.size() >= min_size) ids.push_back(cid);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (members[a].size() != members[b].size()) return members[a].size() > members[b].size();
    return a < b;
  });

  size_t covered = 0;
  for (int cid : ids) {
    CommunityProfile p;
    p.community_id = cid;
    p.size = members[cid].size();
    covered += p.size;

    std::vector<std::uint32_t>& m = members[cid];
    std::sort(m.begin(), m.end(), [&](std::uint32_t a, std::uint32_t b) {
      double da = graph.degree(a), db = graph.degree(b);
      if (da != db) return da > db;
      return graph.nodes[a] < graph.nodes[b];
    });
    for (std::uint32_t v : m) p.members_by_degree.emplace_back(graph.nodes[v], graph.degree(v));

    for (std::uint32_t v : m) {
      const Account* acc = accounts.find(graph.nodes[v]);
      if (acc && acc->party)
        ++p.party_counts[party_name(*acc->party)];
      else
        ++p.unlabeled;
    }

    // plurality of labeled members; top two within 10% -> mixed
    std::vector<std::pair<size_t, std::string>> ranked;
    for (const auto& [party, count] : p.party_counts) ranked.emplace_back(count, party);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    const size_t top = ranked.empty() ? 0 : ranked[0].first;
    const size_t second = ranked.size() > 1 ? ranked[1].first : 0;
    const std::string top_party = ranked.empty() ? "" : ranked[0].second;
    if (top == 0)
      p.dominant = "unaffiliated";
    else if (static_cast<double>(second) >= 0.9 * static_cast<double>(top))
      p.dominant = "mixed";
    else
      p.dominant = top_party;

    report.communities.push_back(std::move(p));
  }
  report.top_share =
      graph.size() ? static_cast<double>(covered) / static_cast<double>(graph.size()) : 0.0;
  return report;
}

void write_edges_csv(const PairWeights& pairs, const std::string& path) {
  std::ostringstream ss;
  ss << "account_a,account_b,weight\n";
  for (const auto& [pair, w] : pairs)
    ss << csv_escape(pair.first) << ',' << csv_escape(pair.second) << ',' << w << '\n';
  write_file(path, ss.str());
}

PairWeights load_edges_csv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty() ||
      split_csv(lines[0]) != std::vector<std::string>{"account_a", "account_b", "weight"})
    throw DataError(path + ": expected header account_a,account_b,weight");
  PairWeights pairs;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> row = split_csv(lines[i]);
    if (row.size() != 3) throw DataError(path + ":" + std::to_string(i + 1) + ": bad row");
    std::uint32_t w = 0;
    try {
      w = static_cast<std::uint32_t>(std::stoul(row[2]));
    } catch (...) {
      throw DataError(path + ":" + std::to_string(i + 1) + ": bad weight");
    }
    std::string a = row[0], b = row[1];
    if (a > b) std::swap(a, b);
    pairs[{a, b}] += w;
  }
  return pairs;
}

void write_partition_csv(const GraphPartition& partition, const std::string& path) {
  std::map<std::string, int> sorted(partition.community.begin(), partition.community.end());
  std::ostringstream ss;
  ss << "account_id,community_id\n";
  for (const auto& [account, cid] : sorted) ss << csv_escape(account) << ',' << cid << '\n';
  write_file(path, ss.str());
}

std::unordered_map<std::string, int> load_partition_csv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty() ||
      split_csv(lines[0]) != std::vector<std::string>{"account_id", "community_id"})
    throw DataError(path + ": expected header account_id,community_id");
  std::unordered_map<std::string, int> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> row = split_csv(lines[i]);
    if (row.size() != 2) throw DataError(path + ":" + std::to_string(i + 1) + ": bad row");
    try {
      out[row[0]] = std::stoi(row[1]);
    } catch (...) {
      throw DataError(path + ":" + std::to_string(i + 1) + ": bad community id");
    }
  }
  return out;
}

void write_layout_csv(const DuplicationGraph& graph, const GraphPartition& partition,
                      const AccountCollection& accounts, const std::string& path) {
  std::ostringstream ss;
  ss << "node,degree,community,party\n";
  char buf[32];
  for (std::uint32_t v = 0; v < graph.size(); ++v) {
    auto it = partition.community.find(graph.nodes[v]);
    int cid = it == partition.community.end() ? -1 : it->second;
    const Account* acc = accounts.find(graph.nodes[v]);
    std::snprintf(buf, sizeof buf, "%.10g", graph.degree(v));
    ss << csv_escape(graph.nodes[v]) << ',' << buf << ',' << cid << ',';
    if (acc && acc->party) ss << party_name(*acc->party);
    ss << '\n';
  }
  write_file(path, ss.str());
}

}  // namespace dupscan
