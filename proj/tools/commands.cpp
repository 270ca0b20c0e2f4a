// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "dupscan/cluster.hpp"
#include "dupscan/corpus.hpp"
#include "dupscan/embed_client.hpp"
#include "dupscan/embedding.hpp"
#include "dupscan/graph.hpp"
#include "dupscan/io_util.hpp"
#include "dupscan/ratcliff.hpp"
#include "dupscan/report.hpp"
#include "dupscan/screening.hpp"
#include "dupscan/synth.hpp"
#include "dupscan/tox_client.hpp"

namespace dupscan::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string out_path(const std::string& dir, const char* name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

void print_summary(const json& j) { std::printf("%s\n", j.dump().c_str()); }

std::unordered_map<std::string, std::string> account_map(const PostCollection& posts) {
  std::unordered_map<std::string, std::string> m;
  for (const Post& p : posts.posts) m[p.id] = p.account_id;
  return m;
}

std::unordered_map<std::string, std::int64_t> timestamp_map(const PostCollection& posts) {
  std::unordered_map<std::string, std::int64_t> m;
  for (const Post& p : posts.posts) m[p.id] = p.timestamp;
  return m;
}

std::vector<double> parse_eps_list(const std::string& spec) {
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    double lo, hi, step;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
      throw DataError("bad eps range, want lo:hi:step: " + spec);
    for (double e = lo; e <= hi + 1e-9; e += step) values.push_back(e);
    return values;
  }
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    std::string tok =
        spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      values.push_back(std::stod(tok));
    } catch (...) {
      throw DataError("bad eps value: " + tok);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return values;
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

}  // namespace

int run_ingest(const IngestOpts& opts) {
  PostFormat format;
  if (opts.format == "jsonl")
    format = PostFormat::Jsonl;
  else if (opts.format == "csv")
    format = PostFormat::Csv;
  else
    throw DataError("unknown post format: " + opts.format);

  auto [posts, load_stats] = load_posts(opts.posts, format);
  FilterConfig cfg;
  cfg.allowed_langs = std::set<std::string>(opts.langs.begin(), opts.langs.end());
  cfg.min_unique_words = opts.min_unique_words;
  cfg.drop_retweets = !opts.keep_retweets;
  auto [kept, filter_stats] = filter_posts(posts, cfg);

  save_posts_jsonl(kept, out_path(opts.out, "posts_clean.jsonl"));
  write_json(to_json(filter_stats), out_path(opts.out, "filter_stats.json"));

  json summary = to_json(filter_stats);
  summary["loaded"] = load_stats.loaded;
  summary["skipped"] = load_stats.skipped;
  if (!opts.accounts.empty()) {
    auto [accounts, acc_stats] = load_accounts(opts.accounts);
    save_accounts_csv(accounts, out_path(opts.out, "accounts.csv"));
    summary["accounts"] = acc_stats.loaded;
    summary["accounts_skipped"] = acc_stats.skipped;
  }
  print_summary(summary);
  return 0;
}

int run_embed(const EmbedOpts& opts) {
  auto [posts, load_stats] = load_posts(opts.posts, PostFormat::Jsonl);
  EmbeddingSet set;
  EmbedStats stats;
  if (opts.provider == "hashed") {
    HashedNgramParams params;
    params.dim = opts.dim;
    params.n_lo = opts.ngram_lo;
    params.n_hi = opts.ngram_hi;
    params.seed = opts.seed;
    if (params.dim < 8) throw DataError("embed: dim must be >= 8");
    std::tie(set, stats) = embed_posts(posts, params);
  } else if (opts.provider == "service") {
    if (opts.endpoint.empty())
      throw DataError("embed: --embed-endpoint required for service provider");
    EmbedServiceConfig cfg;
    cfg.endpoint = opts.endpoint;
    cfg.api_key = env_or_empty("EMBED_API_KEY");
    cfg.batch_size = opts.batch_size;
    std::tie(set, stats) =
        fetch_embeddings(posts, cfg, out_path(opts.out, "embeddings.checkpoint.jsonl"));
  } else {
    throw DataError("unknown embedding provider: " + opts.provider);
  }
  save_embeddings(set, out_path(opts.out, "embeddings.jsonl"));
  print_summary({{"embedded", stats.embedded},
                 {"unembeddable", stats.unembeddable},
                 {"dim", set.dim},
                 {"posts_loaded", load_stats.loaded}});
  return 0;
}

int run_cluster(const ClusterOpts& opts) {
  auto [embeddings, load_stats] = load_embeddings(opts.embeddings);
  ClusterParams params;
  params.eps = opts.eps;
  params.min_pts = opts.min_pts;
  params.threads = opts.threads;
  ClusterSet clusters = dbscan(embeddings, params);

  StatsReport stats;
  if (!opts.posts.empty()) {
    auto [posts, _] = load_posts(opts.posts, PostFormat::Jsonl);
    annotate_spans(clusters, timestamp_map(posts));
    auto accounts = account_map(posts);
    stats = cluster_stats(clusters, &accounts, opts.size_threshold);
  } else {
    stats = cluster_stats(clusters, nullptr, opts.size_threshold);
  }
  write_json(to_json(stats), out_path(opts.out, "stats.json"));
  write_assignments_csv(clusters, out_path(opts.out, "clusters.csv"));

  ConsistencyOptions copts;
  copts.exact_size_cap = opts.consistency_cap;
  copts.seed = opts.seed;
  ConsistencyReport cons = consistency(clusters, embeddings, copts);
  write_json(to_json(cons), out_path(opts.out, "consistency.json"));

  print_summary({{"n_clusters", clusters.clusters.size()},
                 {"total_clustered", clusters.total_clustered()},
                 {"noise", clusters.noise.size()},
                 {"min_cosine", cons.min_cosine},
                 {"rejected_embeddings", load_stats.rejected}});
  return 0;
}

int run_sweep(const SweepOpts& opts) {
  auto [embeddings, _] = load_embeddings(opts.embeddings);
  TruthLabels truth = load_truth_jsonl(opts.truth);
  SweepReport report =
      eps_sweep(embeddings, truth, parse_eps_list(opts.eps), opts.min_pts, opts.threads);
  write_json(to_json(report), out_path(opts.out, "sweep.json"));
  print_summary({{"rows", report.rows.size()}});
  return 0;
}

int run_ropm(const RopmOpts& opts) {
  auto [posts, _] = load_posts(opts.posts, PostFormat::Jsonl);
  json rows = json::array();
  for (int window : opts.windows) {
    RopmParams params;
    params.window = window;
    params.sim_threshold = opts.sim_threshold;
    params.threads = opts.threads;
    DupPairSet pairs = ropm_scan(posts, params);
    json row = to_json(pairs);
    row["method"] = "ropm-" + std::to_string(window);
    row["window"] = window;
    row["sim_threshold"] = opts.sim_threshold;
    rows.push_back(row);
  }
  json doc = {{"rows", rows}};
  write_json(doc, out_path(opts.out, "ropm.json"));
  print_summary(doc);
  return 0;
}

int run_graph(const GraphOpts& opts) {
  ClusterSet clusters = load_assignments_csv(opts.clusters);
  auto [posts, _] = load_posts(opts.posts, PostFormat::Jsonl);
  auto accounts = account_map(posts);
  PairWeights pairs = build_pairs(clusters, accounts);
  write_edges_csv(pairs, out_path(opts.out, "pairs.csv"));

  ThresholdResult thresholded = threshold_graph(pairs, opts.min_shared);
  PairWeights retained;
  for (const auto& [pair, w] : pairs)
    if (w >= opts.min_shared) retained.emplace(pair, w);
  write_edges_csv(retained, out_path(opts.out, "edges.csv"));

  std::string supers;
  for (const std::string& id : thresholded.super_duplicators) supers += id + "\n";
  write_file(out_path(opts.out, "super_duplicators.txt"), supers);

  print_summary({{"n_pairs", pairs.size()},
                 {"n_edges", retained.size()},
                 {"n_super_duplicators", thresholded.super_duplicators.size()},
                 {"min_shared", opts.min_shared}});
  return 0;
}

int run_communities(const CommunitiesOpts& opts) {
  PairWeights edges = load_edges_csv(opts.edges);
  ThresholdResult t = threshold_graph(edges, 1);  // edges.csv is already thresholded
  DuplicationGraph graph = opts.binary_edges ? t.graph.binarized() : t.graph;

  GraphPartition partition = louvain(graph, opts.seed);
  write_partition_csv(partition, out_path(opts.out, "partition.csv"));

  AccountCollection accounts;
  if (!opts.accounts.empty()) accounts = load_accounts(opts.accounts).first;
  ProfileReport profile = community_profile(graph, partition, accounts, opts.min_size);
  write_json(to_json(profile), out_path(opts.out, "profile.json"));
  write_layout_csv(graph, partition, accounts, out_path(opts.out, "layout.csv"));

  print_summary({{"q", partition.q},
                 {"n_communities", partition.n_communities},
                 {"n_nodes", graph.size()},
                 {"top_share", profile.top_share}});
  return 0;
}

int run_screen(const ScreenOpts& opts) {
  if (!opts.keywords.empty() && (opts.clusters.empty() || opts.posts.empty()))
    throw DataError("screen: --keywords needs --clusters and --posts");
  auto [accounts, _] = load_accounts(opts.accounts);
  if (!opts.scores.empty()) {
    auto [scores, skipped] = load_bot_scores(opts.scores);
    for (Account& a : accounts.accounts) {
      auto it = scores.find(a.id);
      if (it != scores.end()) {
        a.cap = it->second.first;
        a.rbs = it->second.second;
      }
    }
  }
  if (!opts.parties.empty()) {
    auto [parties, skipped] = load_party_labels(opts.parties);
    for (Account& a : accounts.accounts) {
      auto it = parties.find(a.id);
      if (it != parties.end()) a.party = it->second;
    }
  }
  BotThresholds thresholds{opts.cap_min, opts.rbs_min};
  SummaryReport summary = account_summary(accounts, thresholds);
  write_json(to_json(summary), out_path(opts.out, "account_summary.json"));

  json out = to_json(summary);
  if (!opts.keywords.empty() && !opts.clusters.empty() && !opts.posts.empty()) {
    auto [keywords, skipped] = load_keywords(opts.keywords);
    ClusterSet clusters = load_assignments_csv(opts.clusters);
    auto [posts, pskipped] = load_posts(opts.posts, PostFormat::Jsonl);
    annotate_spans(clusters, timestamp_map(posts));
    KeywordReport kw =
        keyword_surface(clusters, posts, keywords, opts.top_k, opts.word_boundary);
    write_json(to_json(kw), out_path(opts.out, "keywords.json"));
    out["keyword_matched_posts"] = kw.total_matched_posts;
    out["keyword_matched_clusters"] = kw.total_matched_clusters;
  }
  print_summary(out);
  return 0;
}

int run_toxicity(const ToxicityOpts& opts) {
  ClusterSet clusters = load_assignments_csv(opts.clusters);
  auto [posts, _] = load_posts(opts.posts, PostFormat::Jsonl);

  std::map<std::string, Party> parties;
  const std::map<std::string, Party>* parties_ptr = nullptr;
  if (!opts.parties.empty()) {
    parties = load_party_labels(opts.parties).first;
    parties_ptr = &parties;
  }

  ToxicityReport report;
  if (!opts.lexicon.empty()) {
    LexiconScorer scorer = LexiconScorer::load(opts.lexicon);
    report = score_toxicity(
        clusters, posts,
        [&](const std::string& text) -> std::optional<ToxicityScores> {
          return scorer.score(text);
        },
        parties_ptr, opts.threshold, opts.seed);
  } else if (!opts.endpoint.empty()) {
    ToxServiceConfig cfg;
    cfg.endpoint = opts.endpoint;
    cfg.api_key = env_or_empty("TOX_API_KEY");
    ToxicityServiceClient client(cfg);
    report =
        score_toxicity(clusters, posts, client.scorer(), parties_ptr, opts.threshold, opts.seed);
  } else {
    throw DataError("toxicity: need --lexicon or --tox-endpoint");
  }

  write_json(to_json(report), out_path(opts.out, "toxicity.json"));
  write_toxicity_table_csv(report, out_path(opts.out, "toxicity_table.csv"));
  print_summary({{"scored", report.per_cluster.size()},
                 {"unscored", report.unscored},
                 {"threshold", report.threshold}});
  return 0;
}

int run_specious(const SpeciousOpts& opts) {
  auto [posts, _] = load_posts(opts.posts, PostFormat::Jsonl);
  auto [domains, dup] = load_domain_list(opts.domains);

  ClusterSet clusters;
  const ClusterSet* clusters_ptr = nullptr;
  if (!opts.clusters.empty()) {
    clusters = load_assignments_csv(opts.clusters);
    clusters_ptr = &clusters;
  }
  std::map<std::string, Party> parties;
  const std::map<std::string, Party>* parties_ptr = nullptr;
  if (!opts.parties.empty()) {
    parties = load_party_labels(opts.parties).first;
    parties_ptr = &parties;
  }

  SpeciousReport report = match_specious(posts, domains, clusters_ptr, parties_ptr);
  write_json(to_json(report), out_path(opts.out, "specious.json"));
  print_summary({{"n_flagged", report.n_flagged},
                 {"n_clusters", report.n_clusters},
                 {"n_accounts", report.n_accounts},
                 {"unparseable_urls", report.unparseable_urls}});
  return 0;
}

int run_timeline(const TimelineOpts& opts) {
  auto [posts, _] = load_posts(opts.posts, PostFormat::Jsonl);
  json specious = json::parse(read_file(opts.specious), nullptr, false);
  if (specious.is_discarded() || !specious.contains("flagged_posts"))
    throw DataError(opts.specious + ": expected a specious report with flagged_posts");
  std::vector<std::string> flagged = specious["flagged_posts"].get<std::vector<std::string>>();

  TimelineReport report = specious_timeline(posts, flagged, opts.from, opts.to);
  write_json(to_json(report), out_path(opts.out, "timeline.json"));
  write_timeline_csv(report, out_path(opts.out, "timeline.csv"));
  print_summary({{"total", report.total},
                 {"days", report.counts.size()},
                 {"mean_per_day", report.mean_per_day}});
  return 0;
}

int run_synth(const SynthOpts& opts) {
  SynthConfig config;
  config.n_accounts = opts.accounts;
  config.n_campaigns = opts.campaigns;
  config.campaign_mean_size = opts.mean_size;
  config.mutation_rate = opts.mutation_rate;
  config.noise_posts = opts.noise_posts;
  config.bot_fraction = opts.bot_fraction;
  config.specious_link_rate = opts.specious_rate;
  config.toxic_campaign_fraction = opts.toxic_fraction;
  config.embed.dim = opts.dim;
  config.seed = opts.seed;
  auto t0 = parse_timestamp(opts.t_begin);
  auto t1 = parse_timestamp(opts.t_end);
  if (!t0 || !t1) throw DataError("synth: bad time range");
  config.t_begin = *t0;
  config.t_end = *t1;

  SynthOutput output = generate(config);
  save_posts_jsonl(output.posts, out_path(opts.out, "posts.jsonl"));
  save_accounts_csv(output.accounts, out_path(opts.out, "accounts.csv"));
  save_truth_jsonl(output.truth.post_campaign, out_path(opts.out, "truth.jsonl"));

  std::string domains;
  for (const std::string& d : output.specious_domains) domains += d + "\n";
  write_file(out_path(opts.out, "domains.txt"), domains);
  std::string keywords;
  for (const std::string& k : output.keywords) keywords += k + "\n";
  write_file(out_path(opts.out, "keywords.txt"), keywords);
  write_file(out_path(opts.out, "lexicon.csv"), builtin_lexicon_csv());

  print_summary({{"posts", output.posts.size()},
                 {"accounts", output.accounts.accounts.size()},
                 {"campaigns", output.truth.campaigns.size()},
                 {"specious_posts", output.truth.specious_posts.size()},
                 {"cosine_floor", output.truth.cosine_floor}});
  return 0;
}

int run_evaluate(const EvaluateOpts& opts) {
  ClusterSet clusters = load_assignments_csv(opts.clusters);
  TruthLabels truth = load_truth_jsonl(opts.truth);
  EvalReport report = evaluate(clusters, truth);
  write_json(to_json(report), out_path(opts.out, "eval.json"));
  print_summary(to_json(report));
  return 0;
}

int run_report(const ReportOpts& opts) {
  ConsolidatedReport report = build_report(opts.out);
  write_json(report.document, out_path(opts.out, "report.json"));
  write_file(out_path(opts.out, "report.txt"), report.text);
  size_t present = 0;
  for (const auto& [key, value] : report.document.items())
    if (!(value.is_object() && value.contains("absent"))) ++present;
  print_summary({{"sections_present", present}, {"report", out_path(opts.out, "report.json")}});
  return 0;
}

}  // namespace dupscan::cli
