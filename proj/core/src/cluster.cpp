// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/cluster.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "dupscan/detail/parallel.hpp"
#include "dupscan/io_util.hpp"

namespace dupscan {

namespace {

constexpr int kUnclassified = -2;
constexpr int kNoise = -1;

// Persistent workers for the per-point range scans. DBSCAN issues one scan
// per point, so thread spawn per query would dominate on large inputs.
class ScanPool {
 public:
  explicit ScanPool(int threads) : n_workers_(std::max(0, threads - 1)) {
    workers_.reserve(n_workers_);
    for (int w = 0; w < n_workers_; ++w)
      workers_.emplace_back([this, w] { worker_loop(w + 1); });
  }

  ~ScanPool() {
    {
      std::lock_guard lock(mu_);
      stop_ = true;
      ++generation_;
    }
    cv_.notify_all();
    for (auto& t : workers_) t.join();
  }

  int width() const { return n_workers_ + 1; }

  /// Runs fn(chunk, begin, end) over [0, n) in width() contiguous chunks.
  /// Blocks until every chunk completed.
  void run(size_t n, const std::function<void(int, size_t, size_t)>& fn) {
    if (n_workers_ == 0 || n < 4096) {
      fn(0, 0, n);
      return;
    }
    {
      std::lock_guard lock(mu_);
      job_ = &fn;
      job_n_ = n;
      pending_ = n_workers_;
      ++generation_;
    }
    cv_.notify_all();
    run_chunk(0, fn, n);
    std::unique_lock lock(mu_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    job_ = nullptr;
  }

 private:
  void run_chunk(int chunk, const std::function<void(int, size_t, size_t)>& fn, size_t n) {
    size_t per = (n + width() - 1) / width();
    size_t b = std::min(n, static_cast<size_t>(chunk) * per);
    size_t e = std::min(n, b + per);
    if (b < e) fn(chunk, b, e);
  }

  void worker_loop(int chunk) {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(int, size_t, size_t)>* job = nullptr;
      size_t n = 0;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
        seen = generation_;
        if (stop_) return;
        job = job_;
        n = job_n_;
      }
      if (job) run_chunk(chunk, *job, n);
      {
        std::lock_guard lock(mu_);
        if (--pending_ == 0) done_cv_.notify_one();
      }
    }
  }

  int n_workers_;
  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  const std::function<void(int, size_t, size_t)>* job_ = nullptr;
  size_t job_n_ = 0;
  int pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - 1) / 2; }

// One symmetric pass over i<j pairs, dynamic row blocks. Returns false when
// the pair count exceeds the budget (the caller then re-scans on demand);
// the decision depends only on the data, not on scheduling.
bool build_adjacency(const double* pts, size_t n, size_t d, double eps2, int threads,
                     size_t budget, std::vector<std::uint32_t>& adj,
                     std::vector<size_t>& adj_start) {
  constexpr size_t kBlock = 256;
  const size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> hits(n_blocks);
  std::atomic<size_t> next_block{0};
  std::atomic<size_t> total{0};
  std::atomic<bool> overflow{false};

  auto worker = [&] {
    for (;;) {
      const size_t b = next_block.fetch_add(1);
      if (b >= n_blocks || overflow.load(std::memory_order_relaxed)) return;
      auto& out = hits[b];
      const size_t lo = b * kBlock, hi = std::min(n, lo + kBlock);
      for (size_t i = lo; i < hi; ++i) {
        const size_t before = out.size();
        const double* qi = pts + i * d;
        const double* row = pts + (i + 1) * d;
        for (size_t j = i + 1; j < n; ++j, row += d) {
          if (squared_distance_bounded(qi, row, d, eps2) <= eps2)
            out.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        }
        if (total.fetch_add(out.size() - before) + (out.size() - before) > budget) {
          overflow.store(true);
          return;
        }
      }
    }
  };

  const int width = detail::resolve_threads(threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (overflow.load()) return false;

  adj_start.assign(n + 1, 0);
  for (const auto& block : hits)
    for (auto [i, j] : block) {
      ++adj_start[i + 1];
      ++adj_start[j + 1];
    }
  for (size_t v = 0; v < n; ++v) adj_start[v + 1] += adj_start[v];
  adj.resize(adj_start[n]);
  std::vector<size_t> cursor(adj_start.begin(), adj_start.end() - 1);
  // backward neighbors first (ascending i per node), then forward (ascending
  // j), so every list ends up sorted ascending
  for (const auto& block : hits)
    for (auto [i, j] : block) adj[cursor[j]++] = i;
  for (const auto& block : hits)
    for (auto [i, j] : block) adj[cursor[i]++] = j;
  return true;
}

}  // namespace

size_t ClusterSet::total_clustered() const {
  size_t total = 0;
  for (const Cluster& c : clusters) total += c.size();
  return total;
}

const Cluster* ClusterSet::find(int cluster_id) const {
  for (const Cluster& c : clusters)
    if (c.id == cluster_id) return &c;
  return nullptr;
}

ClusterSet dbscan(const EmbeddingSet& embeddings, const ClusterParams& params) {
  if (params.eps < 0.0) throw DataError("dbscan: eps must be >= 0");
  if (params.min_pts < 2) throw DataError("dbscan: min_pts must be >= 2");

  ClusterSet out;
  const size_t n = embeddings.size();
  if (n == 0) return out;
  const size_t d = static_cast<size_t>(embeddings.dim);
  const double eps2 = params.eps * params.eps;

  // Ranks in ascending post-id order; all processing happens in rank space.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return embeddings.id(a) < embeddings.id(b);
  });

  // Contiguous copy in rank order keeps the scans sequential.
  std::vector<double> pts(n * d);
  for (size_t r = 0; r < n; ++r) {
    auto v = embeddings.vec(order[r]);
    std::copy(v.begin(), v.end(), pts.begin() + r * d);
  }

  // Fast path: all neighbor lists from one symmetric pass. Fallback: scan on
  // demand through the worker pool. Partitions are identical either way.
  std::vector<std::uint32_t> adj;
  std::vector<size_t> adj_start;
  const bool have_adjacency =
      params.neighbor_budget > 0 &&
      build_adjacency(pts.data(), n, d, eps2, params.threads, params.neighbor_budget, adj,
                      adj_start);

  ScanPool pool(have_adjacency ? 1 : detail::resolve_threads(params.threads));
  const int width = pool.width();
  std::vector<std::vector<std::uint32_t>> chunk_hits(width);

  std::vector<std::uint32_t> scan_hits;
  // neighbors of `rank` excluding itself, ascending
  auto region_query = [&](size_t rank) -> std::span<const std::uint32_t> {
    if (have_adjacency)
      return {adj.data() + adj_start[rank], adj_start[rank + 1] - adj_start[rank]};
    const double* q = pts.data() + rank * d;
    for (auto& hits : chunk_hits) hits.clear();  // pool.run may skip chunks on small n
    pool.run(n, [&](int chunk, size_t b, size_t e) {
      auto& hits = chunk_hits[chunk];
      const double* row = pts.data() + b * d;
      for (size_t r = b; r < e; ++r, row += d) {
        if (r != rank && squared_distance_bounded(q, row, d, eps2) <= eps2)
          hits.push_back(static_cast<std::uint32_t>(r));
      }
    });
    scan_hits.clear();
    for (int c = 0; c < width; ++c)
      scan_hits.insert(scan_hits.end(), chunk_hits[c].begin(), chunk_hits[c].end());
    return scan_hits;
  };

  const size_t need = static_cast<size_t>(params.min_pts) - 1;  // besides self
  std::vector<int> label(n, kUnclassified);
  std::deque<std::uint32_t> fifo;
  int next_cluster = 0;

  auto claim = [&](std::uint32_t r, int cid) {
    if (label[r] == kUnclassified) {
      label[r] = cid;
      fifo.push_back(r);
    } else if (label[r] == kNoise) {
      label[r] = cid;  // border point, already known non-core
    }
  };

  for (size_t rank = 0; rank < n; ++rank) {
    if (label[rank] != kUnclassified) continue;
    auto neighbors = region_query(rank);
    if (neighbors.size() < need) {
      label[rank] = kNoise;
      continue;
    }
    const int cid = next_cluster++;
    label[rank] = cid;
    fifo.clear();
    for (std::uint32_t r : neighbors) claim(r, cid);
    while (!fifo.empty()) {
      std::uint32_t cur = fifo.front();
      fifo.pop_front();
      auto reach = region_query(cur);
      if (reach.size() >= need)
        for (std::uint32_t r : reach) claim(r, cid);
    }
  }

  // A core point whose neighbors were all claimed as borders elsewhere can
  // end up alone (possible for min_pts >= 3); a one-post cluster is no
  // duplication, so it demotes to noise. Surviving ids stay dense.
  std::vector<std::uint32_t> cluster_sizes(static_cast<size_t>(next_cluster), 0);
  for (size_t rank = 0; rank < n; ++rank)
    if (label[rank] >= 0) ++cluster_sizes[label[rank]];
  std::vector<int> renumber(static_cast<size_t>(next_cluster), kNoise);
  int dense = 0;
  for (int c = 0; c < next_cluster; ++c)
    if (cluster_sizes[c] >= 2) renumber[c] = dense++;

  out.clusters.resize(static_cast<size_t>(dense));
  for (int c = 0; c < dense; ++c) out.clusters[c].id = c;
  for (size_t rank = 0; rank < n; ++rank) {
    const std::string& id = embeddings.id(order[rank]);
    const int mapped = label[rank] >= 0 ? renumber[label[rank]] : kNoise;
    if (mapped == kNoise)
      out.noise.push_back(id);
    else
      out.clusters[mapped].member_ids.push_back(id);
  }
  return out;
}

void annotate_spans(ClusterSet& clusters,
                    const std::unordered_map<std::string, std::int64_t>& timestamps) {
  for (Cluster& c : clusters.clusters) {
    bool seen = false;
    for (const std::string& id : c.member_ids) {
      auto it = timestamps.find(id);
      if (it == timestamps.end()) continue;
      if (!seen || it->second < c.first_ts) c.first_ts = it->second;
      if (!seen || it->second > c.last_ts) c.last_ts = it->second;
      seen = true;
    }
    if (!seen) c.first_ts = c.last_ts = 0;
  }
}

ConsistencyReport consistency(const ClusterSet& clusters, const EmbeddingSet& embeddings,
                              const ConsistencyOptions& options) {
  ConsistencyReport report;
  double pair_sum = 0.0;
  bool any_cluster = false;

  for (const Cluster& c : clusters.clusters) {
    std::vector<size_t> rows;
    rows.reserve(c.size());
    for (const std::string& id : c.member_ids) {
      auto it = embeddings.index.find(id);
      if (it == embeddings.index.end())
        throw DataError("consistency: cluster member not embedded: " + id);
      rows.push_back(it->second);
    }

    ClusterConsistency cc;
    cc.cluster_id = c.id;
    double sum = 0.0;
    double mn = 1.0;
    size_t evaluated = 0;

    if (c.size() <= options.exact_size_cap) {
      for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = i + 1; j < rows.size(); ++j) {
          double cs = cosine(embeddings.vec(rows[i]), embeddings.vec(rows[j]));
          sum += cs;
          mn = std::min(mn, cs);
          ++evaluated;
        }
    } else {
      cc.sampled = true;
      std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ULL * (c.id + 1)));
      for (size_t s = 0; s < options.sample_pairs; ++s) {
        size_t i = static_cast<size_t>(rng() % rows.size());
        size_t j = static_cast<size_t>(rng() % (rows.size() - 1));
        if (j >= i) ++j;
        double cs = cosine(embeddings.vec(rows[i]), embeddings.vec(rows[j]));
        sum += cs;
        mn = std::min(mn, cs);
        ++evaluated;
      }
    }

    cc.min_cosine = mn;
    cc.mean_cosine = evaluated ? sum / static_cast<double>(evaluated) : 1.0;
    report.any_sampled |= cc.sampled;
    report.per_cluster.push_back(cc);
    report.min_cosine = any_cluster ? std::min(report.min_cosine, mn) : mn;
    any_cluster = true;
    pair_sum += sum;
    report.pairs_evaluated += evaluated;
  }

  report.mean_cosine =
      report.pairs_evaluated ? pair_sum / static_cast<double>(report.pairs_evaluated) : 1.0;
  if (!any_cluster) report.min_cosine = 1.0;
  return report;
}

StatsReport cluster_stats(const ClusterSet& clusters,
                          const std::unordered_map<std::string, std::string>* post_accounts,
                          size_t size_threshold) {
  StatsReport r;
  r.size_threshold = size_threshold;
  r.n_clusters = clusters.clusters.size();
  r.n_noise = clusters.noise.size();

  double sum = 0.0, sum_sq = 0.0;
  std::unordered_map<std::string, std::uint32_t> account_idx;
  std::unordered_set<std::uint64_t> account_pairs;

  for (const Cluster& c : clusters.clusters) {
    const double s = static_cast<double>(c.size());
    sum += s;
    sum_sq += s * s;
    r.max_size = std::max(r.max_size, c.size());
    if (c.size() >= size_threshold) ++r.n_ge_k;
    r.total_clustered += c.size();
    r.post_pairs += pairs_of(c.size());

    if (post_accounts) {
      std::vector<std::uint32_t> accs;
      for (const std::string& id : c.member_ids) {
        auto it = post_accounts->find(id);
        if (it == post_accounts->end())
          throw DataError("cluster_stats: no account for post " + id);
        auto [ins, added] =
            account_idx.emplace(it->second, static_cast<std::uint32_t>(account_idx.size()));
        accs.push_back(ins->second);
      }
      std::sort(accs.begin(), accs.end());
      accs.erase(std::unique(accs.begin(), accs.end()), accs.end());
      for (size_t i = 0; i < accs.size(); ++i)
        for (size_t j = i + 1; j < accs.size(); ++j)
          account_pairs.insert((static_cast<std::uint64_t>(accs[i]) << 32) | accs[j]);
    }
  }

  if (r.n_clusters > 0) {
    const double n = static_cast<double>(r.n_clusters);
    r.mean_size = sum / n;
    double var = sum_sq / n - r.mean_size * r.mean_size;
    r.sd_size = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  r.n_accounts = account_idx.size();
  r.account_pairs = account_pairs.size();
  return r;
}

PartitionScore score_against_truth(const ClusterSet& clusters,
                                   const std::vector<std::string>& universe_ids,
                                   const TruthLabels& truth) {
  PartitionScore score;

  // Campaign sizes over the universe; filler posts act as singletons and so
  // never contribute pairs.
  std::unordered_map<std::string, std::uint64_t> truth_sizes;
  for (const std::string& id : universe_ids) {
    auto it = truth.find(id);
    if (it == truth.end()) throw DataError("truth does not cover post " + id);
    if (!it->second.empty()) {
      ++truth_sizes[it->second];
      ++score.n_labeled;
    }
  }

  std::uint64_t truth_pairs = 0;
  for (const auto& [campaign, sz] : truth_sizes) truth_pairs += pairs_of(sz);

  std::uint64_t pred_pairs = 0;
  std::uint64_t both_pairs = 0;  // sum over contingency cells of C(n, 2)

  for (const Cluster& c : clusters.clusters) {
    pred_pairs += pairs_of(c.size());
    std::unordered_map<std::string, std::uint64_t> cell;
    for (const std::string& id : c.member_ids) {
      auto it = truth.find(id);
      if (it == truth.end()) throw DataError("truth does not cover post " + id);
      if (!it->second.empty()) ++cell[it->second];
    }
    // majority campaign, ties to the lexicographically smallest id
    std::string majority;
    std::uint64_t majority_n = 0;
    for (const auto& [campaign, cnt] : cell) {
      both_pairs += pairs_of(cnt);
      if (cnt > majority_n || (cnt == majority_n && (majority.empty() || campaign < majority))) {
        majority = campaign;
        majority_n = cnt;
      }
    }
    if (!majority.empty()) score.n_correct += cell[majority];
  }
  score.n_misclassified = score.n_labeled - score.n_correct;

  score.precision = pred_pairs ? static_cast<double>(both_pairs) / pred_pairs : 1.0;
  score.recall = truth_pairs ? static_cast<double>(both_pairs) / truth_pairs : 1.0;
  score.f1 = (score.precision + score.recall) > 0.0
                 ? 2.0 * score.precision * score.recall / (score.precision + score.recall)
                 : 0.0;

  const double total = static_cast<double>(universe_ids.size());
  const double all_pairs = total * (total - 1.0) / 2.0;
  if (all_pairs <= 0.0) {
    score.ari = 1.0;
    return score;
  }
  const double expected =
      static_cast<double>(pred_pairs) * static_cast<double>(truth_pairs) / all_pairs;
  const double max_index = 0.5 * (static_cast<double>(pred_pairs) + static_cast<double>(truth_pairs));
  if (max_index == expected)
    score.ari = 1.0;  // degenerate: identical pair structure
  else
    score.ari = (static_cast<double>(both_pairs) - expected) / (max_index - expected);
  return score;
}

SweepReport eps_sweep(const EmbeddingSet& embeddings, const TruthLabels& truth,
                      const std::vector<double>& eps_values, int min_pts, int threads) {
  if (eps_values.empty()) throw DataError("eps_sweep: empty eps list");
  SweepReport report;
  for (double eps : eps_values) {
    ClusterParams params;
    params.eps = eps;
    params.min_pts = min_pts;
    params.threads = threads;
    ClusterSet clusters = dbscan(embeddings, params);
    SweepRow row;
    row.eps = eps;
    row.n_clusters = clusters.clusters.size();
    row.score = score_against_truth(clusters, embeddings.ids, truth);
    report.rows.push_back(row);
    log_info("sweep_eps", "eps=" + std::to_string(eps) +
                              " clusters=" + std::to_string(row.n_clusters));
  }
  return report;
}

void write_assignments_csv(const ClusterSet& clusters, const std::string& path) {
  std::ostringstream ss;
  ss << "post_id,cluster_id\n";
  for (const Cluster& c : clusters.clusters)
    for (const std::string& id : c.member_ids) ss << csv_escape(id) << ',' << c.id << '\n';
  for (const std::string& id : clusters.noise) ss << csv_escape(id) << ",-1\n";
  write_file(path, ss.str());
}

ClusterSet load_assignments_csv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || split_csv(lines[0]) != std::vector<std::string>{"post_id", "cluster_id"})
    throw DataError(path + ": expected header post_id,cluster_id");
  std::map<int, std::vector<std::string>> members;
  ClusterSet out;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> row = split_csv(lines[i]);
    if (row.size() != 2) throw DataError(path + ":" + std::to_string(i + 1) + ": bad row");
    int cid;
    try {
      cid = std::stoi(row[1]);
    } catch (...) {
      throw DataError(path + ":" + std::to_string(i + 1) + ": bad cluster id");
    }
    if (cid < 0)
      out.noise.push_back(row[0]);
    else
      members[cid].push_back(row[0]);
  }
  for (auto& [cid, ids] : members) {
    Cluster c;
    c.id = cid;
    std::sort(ids.begin(), ids.end());
    c.member_ids = std::move(ids);
    out.clusters.push_back(std::move(c));
  }
  std::sort(out.noise.begin(), out.noise.end());
  return out;
}

}  // namespace dupscan
