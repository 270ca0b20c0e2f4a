// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/cluster.hpp"

#include <random>

#include "doctest.h"
#include "dupscan/io_util.hpp"
#include "dupscan/synth.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace dupscan;

namespace {

EmbeddingSet points_1d(const std::vector<std::pair<std::string, double>>& pts) {
  EmbeddingSet set;
  set.dim = 8;
  std::vector<double> v(8, 0.0);
  for (const auto& [id, x] : pts) {
    v[0] = x;
    set.add(id, v);
  }
  return set;
}

}  // namespace

TEST_CASE("dbscan handles the definitional cases") {
  ClusterParams params;  // eps 1, min_pts 2

  SUBCASE("single point is noise") {
    EmbeddingSet set = points_1d({{"p1", 0.0}});
    ClusterSet cs = dbscan(set, params);
    CHECK(cs.clusters.empty());
    CHECK(cs.noise == std::vector<std::string>{"p1"});
  }
  SUBCASE("two points within eps form one cluster") {
    EmbeddingSet set = points_1d({{"p1", 0.0}, {"p2", 0.5}});
    ClusterSet cs = dbscan(set, params);
    REQUIRE(cs.clusters.size() == 1);
    CHECK(cs.clusters[0].member_ids == std::vector<std::string>{"p1", "p2"});
    CHECK(cs.noise.empty());
  }
  SUBCASE("chain of gaps 0.9 clusters all three") {
    // ends are 1.8 apart but density-connect through the middle; verified
    // against the naive reference below
    EmbeddingSet set = points_1d({{"p1", -0.9}, {"p2", 0.0}, {"p3", 0.9}});
    ClusterSet cs = dbscan(set, params);
    REQUIRE(cs.clusters.size() == 1);
    CHECK(cs.clusters[0].member_ids.size() == 3);
    auto ref = oracles::naive_dbscan(set, params.eps, params.min_pts);
    CHECK(oracles::partition_signature(cs) == oracles::partition_signature(ref));
  }
  SUBCASE("empty input gives an empty result") {
    EmbeddingSet set;
    set.dim = 8;
    ClusterSet cs = dbscan(set, params);
    CHECK(cs.clusters.empty());
    CHECK(cs.noise.empty());
  }
  SUBCASE("eps 0 leaves distinct points as noise") {
    EmbeddingSet set = points_1d({{"p1", 0.0}, {"p2", 0.5}, {"p3", 0.9}});
    params.eps = 0.0;
    ClusterSet cs = dbscan(set, params);
    CHECK(cs.clusters.empty());
    CHECK(cs.noise.size() == 3);
  }
  SUBCASE("invalid params throw") {
    EmbeddingSet set = points_1d({{"p1", 0.0}});
    CHECK_THROWS_AS(dbscan(set, {.eps = -1.0, .min_pts = 2}), DataError);
    CHECK_THROWS_AS(dbscan(set, {.eps = 1.0, .min_pts = 1}), DataError);
  }
}

TEST_CASE("dbscan matches the naive reference on random corpora") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = (trial % 3 == 0) ? 8 : (trial % 3 == 1 ? 64 : 384);
    const size_t n = 20 + rng() % 300;
    EmbeddingSet set = testutil::random_corpus(rng, n, d, 0.05 + 0.2 * testutil::u01(rng));
    const double eps = 0.1 + testutil::u01(rng);
    const int min_pts = 2 + static_cast<int>(rng() % 3);
    ClusterParams params{.eps = eps, .min_pts = min_pts, .threads = 2};
    ClusterSet cs = dbscan(set, params);
    auto ref = oracles::naive_dbscan(set, eps, min_pts);
    REQUIRE(oracles::partition_signature(cs) == oracles::partition_signature(ref));
  }
}

TEST_CASE("precomputed-adjacency and on-demand scans give identical partitions") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 10; ++trial) {
    EmbeddingSet set = testutil::random_corpus(rng, 100 + rng() % 400, 16, 0.1);
    const double eps = 0.2 + testutil::u01(rng);
    ClusterParams fast{.eps = eps, .min_pts = 2};
    ClusterParams on_demand{.eps = eps, .min_pts = 2, .neighbor_budget = 0};
    CHECK(oracles::partition_signature(dbscan(set, fast)) ==
          oracles::partition_signature(dbscan(set, on_demand)));
    // a tiny budget must fall back, not misbehave
    ClusterParams tiny{.eps = eps, .min_pts = 2, .neighbor_budget = 3};
    CHECK(oracles::partition_signature(dbscan(set, tiny)) ==
          oracles::partition_signature(dbscan(set, fast)));
  }
}

TEST_CASE("dbscan runs are fully deterministic, including ids and orderings") {
  std::mt19937_64 rng(808);
  EmbeddingSet set = testutil::random_corpus(rng, 300, 16, 0.1);
  ClusterParams params{.eps = 0.5, .min_pts = 2, .threads = 2};
  ClusterSet a = dbscan(set, params);
  ClusterSet b = dbscan(set, params);
  REQUIRE(a.clusters.size() == b.clusters.size());
  for (size_t i = 0; i < a.clusters.size(); ++i) {
    CHECK(a.clusters[i].id == b.clusters[i].id);
    CHECK(a.clusters[i].member_ids == b.clusters[i].member_ids);
  }
  CHECK(a.noise == b.noise);
}

TEST_CASE("dbscan is invariant under input permutation") {
  std::mt19937_64 rng(202);
  EmbeddingSet set = testutil::random_corpus(rng, 150, 8, 0.1);
  ClusterParams params{.eps = 0.5, .min_pts = 2};
  ClusterSet base = dbscan(set, params);

  // shuffle insertion order; ids keep the processing order stable
  std::vector<size_t> perm(set.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  EmbeddingSet shuffled;
  shuffled.dim = set.dim;
  for (size_t i : perm) {
    auto v = set.vec(i);
    shuffled.add(set.id(i), std::vector<double>(v.begin(), v.end()));
  }
  ClusterSet other = dbscan(shuffled, params);
  CHECK(oracles::partition_signature(base) == oracles::partition_signature(other));
}

TEST_CASE("dbscan density invariants hold") {
  std::mt19937_64 rng(303);
  EmbeddingSet set = testutil::random_corpus(rng, 250, 8, 0.12);
  const double eps = 0.4;
  ClusterParams params{.eps = eps, .min_pts = 3};
  ClusterSet cs = dbscan(set, params);

  auto sq_dist = [&](const std::string& a, const std::string& b) {
    auto u = set.vec(set.index.at(a));
    auto v = set.vec(set.index.at(b));
    double acc = 0;
    for (size_t k = 0; k < u.size(); ++k) acc += (u[k] - v[k]) * (u[k] - v[k]);
    return acc;
  };
  auto neighbor_count = [&](const std::string& id) {
    size_t count = 0;
    for (size_t r = 0; r < set.size(); ++r)
      if (sq_dist(id, set.id(r)) <= eps * eps) ++count;
    return count;
  };

  // every cluster holds at least two posts
  for (const Cluster& c : cs.clusters) CHECK(c.size() >= 2);
  // every clustered post has at least one cluster member within eps
  for (const Cluster& c : cs.clusters)
    for (const std::string& id : c.member_ids) {
      bool witness = false;
      for (const std::string& other : c.member_ids)
        if (other != id && sq_dist(id, other) <= eps * eps) witness = true;
      CHECK(witness);
    }
  // no two in-eps noise points may both be cores
  for (const std::string& a : cs.noise)
    for (const std::string& b : cs.noise) {
      if (a >= b || sq_dist(a, b) > eps * eps) continue;
      const bool both_core = neighbor_count(a) >= 3 && neighbor_count(b) >= 3;
      CHECK_FALSE(both_core);
    }
}

TEST_CASE("annotate_spans fills first/last timestamps") {
  EmbeddingSet set = points_1d({{"p1", -0.9}, {"p2", -0.8}, {"p3", 0.9}});
  ClusterSet cs = dbscan(set, {});
  REQUIRE(cs.clusters.size() == 1);  // p3 stays noise
  annotate_spans(cs, {{"p1", 100}, {"p2", 40}, {"p3", 7}});
  CHECK(cs.clusters[0].first_ts == 40);
  CHECK(cs.clusters[0].last_ts == 100);
  CHECK(cs.clusters[0].active_span_seconds() == 60);
}

TEST_CASE("consistency reports within-cluster cosine stats") {
  SUBCASE("identical vectors score 1.0") {
    EmbeddingSet set;
    set.dim = 4;
    set.add("p1", std::vector<double>{0.5, 0.5, 0.5, 0.5});
    set.add("p2", std::vector<double>{0.5, 0.5, 0.5, 0.5});
    ClusterSet cs = dbscan(set, {});
    ConsistencyReport rep = consistency(cs, set);
    CHECK(rep.min_cosine == doctest::Approx(1.0));
    CHECK(rep.mean_cosine == doctest::Approx(1.0));
    CHECK(rep.pairs_evaluated == 1);
  }
  SUBCASE("orthogonal pair scores 0.0") {
    EmbeddingSet set;
    set.dim = 4;
    set.add("p1", std::vector<double>{1.0, 0.0, 0.0, 0.0});
    set.add("p2", std::vector<double>{0.0, 1.0, 0.0, 0.0});
    ClusterSet cs;
    Cluster c;
    c.id = 0;
    c.member_ids = {"p1", "p2"};
    cs.clusters.push_back(c);
    ConsistencyReport rep = consistency(cs, set);
    CHECK(rep.min_cosine == doctest::Approx(0.0));
  }
  SUBCASE("sampling kicks in above the cap and is flagged") {
    std::mt19937_64 rng(7);
    EmbeddingSet set;
    set.dim = 8;
    std::vector<double> v(8);
    ClusterSet cs;
    Cluster c;
    c.id = 0;
    for (int i = 0; i < 40; ++i) {
      for (double& x : v) x = 0.5 + 0.01 * testutil::u01(rng);
      double n = 0;
      for (double x : v) n += x * x;
      for (double& x : v) x /= std::sqrt(n);
      std::string id = "p" + std::to_string(i);
      set.add(id, v);
      c.member_ids.push_back(id);
    }
    std::sort(c.member_ids.begin(), c.member_ids.end());
    cs.clusters.push_back(c);
    ConsistencyOptions opts;
    opts.exact_size_cap = 10;
    opts.sample_pairs = 200;
    ConsistencyReport rep = consistency(cs, set, opts);
    CHECK(rep.any_sampled);
    CHECK(rep.pairs_evaluated == 200);
    CHECK(rep.min_cosine > 0.9);
    // sampling is seeded: same options, same result
    ConsistencyReport rep2 = consistency(cs, set, opts);
    CHECK(rep.min_cosine == rep2.min_cosine);
    CHECK(rep.mean_cosine == rep2.mean_cosine);
  }
  SUBCASE("missing embedding is fatal") {
    EmbeddingSet set;
    set.dim = 4;
    set.add("p1", std::vector<double>{1.0, 0.0, 0.0, 0.0});
    ClusterSet cs;
    Cluster c;
    c.id = 0;
    c.member_ids = {"p1", "p9"};
    cs.clusters.push_back(c);
    CHECK_THROWS_AS(consistency(cs, set), DataError);
  }
}

TEST_CASE("cluster_stats computes size and pair metrics") {
  ClusterSet cs;
  Cluster a;
  a.id = 0;
  a.member_ids = {"p1", "p2"};
  Cluster b;
  b.id = 1;
  b.member_ids = {"p3", "p4", "p5"};
  cs.clusters = {a, b};
  cs.noise = {"p6"};

  SUBCASE("sizes {2,3}") {
    StatsReport r = cluster_stats(cs, nullptr, 3);
    CHECK(r.n_clusters == 2);
    CHECK(r.mean_size == doctest::Approx(2.5));
    CHECK(r.sd_size == doctest::Approx(0.5));
    CHECK(r.max_size == 3);
    CHECK(r.n_ge_k == 1);
    CHECK(r.total_clustered == 5);
    CHECK(r.n_noise == 1);
    CHECK(r.post_pairs == 4);  // C(2,2) + C(3,2) = 1 + 3
  }
  SUBCASE("empty set is all zeros") {
    StatsReport r = cluster_stats(ClusterSet{}, nullptr);
    CHECK(r.n_clusters == 0);
    CHECK(r.mean_size == 0.0);
    CHECK(r.sd_size == 0.0);
    CHECK(r.max_size == 0);
    CHECK(r.post_pairs == 0);
  }
  SUBCASE("account metrics count distinct co-clustered pairs") {
    std::unordered_map<std::string, std::string> accounts = {
        {"p1", "A"}, {"p2", "B"}, {"p3", "A"}, {"p4", "B"}, {"p5", "C"}, {"p6", "D"}};
    StatsReport r = cluster_stats(cs, &accounts);
    CHECK(r.n_accounts == 3);
    // cluster 0: {A,B}; cluster 1: {A,B,C} -> pairs {AB, AC, BC}
    CHECK(r.account_pairs == 3);
  }
}

TEST_CASE("cluster_stats pair counts match a brute-force recount") {
  std::mt19937_64 rng(404);
  SynthConfig cfg;
  cfg.n_accounts = 40;
  cfg.n_campaigns = 12;
  cfg.noise_posts = 60;
  cfg.seed = rng();
  cfg.compute_cosine_floor = false;
  SynthOutput synth = generate(cfg);
  auto [emb, stats] = embed_posts(synth.posts, {.dim = 64});
  ClusterSet cs = dbscan(emb, {.eps = 0.8});

  std::unordered_map<std::string, std::string> accounts;
  for (const Post& p : synth.posts.posts) accounts[p.id] = p.account_id;
  StatsReport r = cluster_stats(cs, &accounts);

  std::uint64_t post_pairs = 0;
  std::set<std::pair<std::string, std::string>> account_pairs;
  for (const Cluster& c : cs.clusters) {
    post_pairs += oracles::choose2(c.size());
    std::set<std::string> accs;
    for (const std::string& id : c.member_ids) accs.insert(accounts.at(id));
    for (auto i = accs.begin(); i != accs.end(); ++i)
      for (auto j = std::next(i); j != accs.end(); ++j) account_pairs.insert({*i, *j});
  }
  CHECK(r.post_pairs == post_pairs);
  CHECK(r.account_pairs == account_pairs.size());
}

TEST_CASE("score_against_truth matches the pairwise oracle") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 10; ++trial) {
    SynthConfig cfg;
    cfg.n_accounts = 30;
    cfg.n_campaigns = 8;
    cfg.noise_posts = 40;
    cfg.seed = rng();
    cfg.compute_cosine_floor = false;
    SynthOutput synth = generate(cfg);
    auto [emb, stats] = embed_posts(synth.posts, {.dim = 64});
    ClusterSet cs = dbscan(emb, {.eps = 0.3 + testutil::u01(rng)});

    PartitionScore score = score_against_truth(cs, emb.ids, synth.truth.post_campaign);
    auto brute = oracles::brute_pair_scores(emb.ids, synth.truth.post_campaign,
                                            oracles::predicted_labels(cs));
    CHECK(score.precision == doctest::Approx(brute.precision).epsilon(1e-12));
    CHECK(score.recall == doctest::Approx(brute.recall).epsilon(1e-12));
    CHECK(score.ari == doctest::Approx(brute.ari).epsilon(1e-12));
  }
}

TEST_CASE("eps_sweep recovers planted campaigns and handles edge cases") {
  SynthConfig cfg;
  cfg.n_accounts = 60;
  cfg.n_campaigns = 25;
  cfg.noise_posts = 120;
  cfg.seed = 909;
  cfg.embed.dim = 384;
  SynthOutput synth = generate(cfg);
  auto [emb, stats] = embed_posts(synth.posts, cfg.embed);

  SUBCASE("a tuned eps reaches ARI >= 0.95") {
    SweepReport rep = eps_sweep(emb, synth.truth.post_campaign, {0.3, 0.6, 0.9, 1.2});
    double best = 0;
    for (const SweepRow& row : rep.rows) best = std::max(best, row.score.ari);
    CHECK(best >= 0.95);
  }
  SUBCASE("eps 0 leaves distinct points as noise") {
    // filler-only corpus: every text differs, so no two vectors coincide
    SynthConfig distinct = cfg;
    distinct.n_campaigns = 0;
    distinct.noise_posts = 150;
    SynthOutput filler = generate(distinct);
    auto [femb, fstats] = embed_posts(filler.posts, distinct.embed);
    SweepReport rep = eps_sweep(femb, filler.truth.post_campaign, {0.0});
    CHECK(rep.rows[0].n_clusters == 0);
  }
  SUBCASE("empty eps list is an error") {
    CHECK_THROWS_AS(eps_sweep(emb, synth.truth.post_campaign, {}), DataError);
  }
  SUBCASE("truth must cover the corpus") {
    TruthLabels partial;
    CHECK_THROWS_AS(eps_sweep(emb, partial, {0.5}), DataError);
  }
}

TEST_CASE("assignments csv round-trips the partition") {
  testutil::TempDir tmp;
  std::mt19937_64 rng(606);
  EmbeddingSet set = testutil::random_corpus(rng, 80, 8, 0.1);
  ClusterSet cs = dbscan(set, {.eps = 0.4});
  write_assignments_csv(cs, tmp.file("clusters.csv"));
  ClusterSet loaded = load_assignments_csv(tmp.file("clusters.csv"));
  CHECK(oracles::partition_signature(cs) == oracles::partition_signature(loaded));
}
