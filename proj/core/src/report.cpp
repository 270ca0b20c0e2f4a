// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/report.hpp"

#include <filesystem>
#include <sstream>

#include "dupscan/io_util.hpp"

namespace dupscan {

namespace {

using nlohmann::json;

json load_if_present(const std::string& dir, const char* name) {
  std::filesystem::path p = std::filesystem::path(dir) / name;
  if (!std::filesystem::exists(p)) return nullptr;
  json j = json::parse(read_file(p.string()), nullptr, false);
  if (j.is_discarded()) return nullptr;
  return j;
}

}  // namespace

json to_json(const FilterStats& stats) {
  return {{"input", stats.input},
          {"kept", stats.kept},
          {"dropped_retweet", stats.dropped_retweet},
          {"dropped_language", stats.dropped_language},
          {"dropped_short", stats.dropped_short}};
}

json to_json(const StatsReport& r) {
  return {{"n_clusters", r.n_clusters},
          {"mean_size", r.mean_size},
          {"sd_size", r.sd_size},
          {"max_size", r.max_size},
          {"n_ge_k", r.n_ge_k},
          {"size_threshold", r.size_threshold},
          {"total_clustered", r.total_clustered},
          {"n_noise", r.n_noise},
          {"n_accounts", r.n_accounts},
          {"post_pairs", r.post_pairs},
          {"account_pairs", r.account_pairs}};
}

json to_json(const ConsistencyReport& r) {
  json per = json::array();
  for (const ClusterConsistency& c : r.per_cluster)
    per.push_back({{"cluster_id", c.cluster_id},
                   {"min_cosine", c.min_cosine},
                   {"mean_cosine", c.mean_cosine},
                   {"sampled", c.sampled}});
  return {{"min_cosine", r.min_cosine},
          {"mean_cosine", r.mean_cosine},
          {"pairs_evaluated", r.pairs_evaluated},
          {"any_sampled", r.any_sampled},
          {"per_cluster", per}};
}

json to_json(const SweepReport& r) {
  json rows = json::array();
  for (const SweepRow& row : r.rows)
    rows.push_back({{"eps", row.eps},
                    {"n_clusters", row.n_clusters},
                    {"n_correct", row.score.n_correct},
                    {"n_misclassified", row.score.n_misclassified},
                    {"precision", row.score.precision},
                    {"recall", row.score.recall},
                    {"ari", row.score.ari}});
  return {{"rows", rows}};
}

json to_json(const DupPairSet& p) {
  return {{"n_dup_tweets", p.n_dup_posts}, {"n_pairs", p.n_pairs()}, {"n_accounts", p.n_accounts}};
}

json to_json(const GraphPartition& p) {
  return {{"q", p.q}, {"n_communities", p.n_communities}, {"q_per_pass", p.q_per_pass}};
}

json to_json(const ProfileReport& r) {
  json communities = json::array();
  for (const CommunityProfile& c : r.communities) {
    json members = json::array();
    for (const auto& [id, degree] : c.members_by_degree)
      members.push_back({{"account", id}, {"degree", degree}});
    communities.push_back({{"community_id", c.community_id},
                           {"size", c.size},
                           {"dominant", c.dominant},
                           {"party_counts", c.party_counts},
                           {"unlabeled", c.unlabeled},
                           {"members", members}});
  }
  return {{"q", r.q},
          {"n_communities", r.n_communities},
          {"n_accounts", r.n_accounts},
          {"min_size", r.min_size},
          {"top_share", r.top_share},
          {"communities", communities}};
}

json to_json(const SummaryReport& r) {
  auto share = [&](size_t n) {
    return r.total ? static_cast<double>(n) / static_cast<double>(r.total) : 0.0;
  };
  return {{"total", r.total},
          {"bots", r.bots},
          {"verified", r.verified},
          {"political", r.political},
          {"regular", r.regular},
          {"bot_share", share(r.bots)},
          {"verified_share", share(r.verified)},
          {"political_share", share(r.political)},
          {"regular_share", share(r.regular)}};
}

json to_json(const KeywordReport& r) {
  json hits = json::array();
  for (const KeywordHit& h : r.hits)
    hits.push_back({{"keyword", h.keyword},
                    {"matched_posts", h.matched_posts},
                    {"matched_clusters", h.matched_clusters},
                    {"top_clusters", h.top_clusters}});
  return {{"total_matched_posts", r.total_matched_posts},
          {"total_matched_clusters", r.total_matched_clusters},
          {"hits", hits}};
}

json to_json(const ToxicityReport& r) {
  json labels = json::object();
  for (const auto& [dim, counts] : r.label_counts)
    labels[dim] = {{"n_clusters", counts[0]}, {"n_bjp", counts[1]}, {"n_inc", counts[2]}};
  json per = json::array();
  for (const ClusterToxicity& c : r.per_cluster) {
    json scores = json::object();
    for (size_t i = 0; i < kToxicityDimensions.size(); ++i)
      scores[kToxicityDimensions[i]] = c.scores[i];
    per.push_back({{"cluster_id", c.cluster_id},
                   {"representative", c.representative},
                   {"scores", scores},
                   {"labels", c.labels}});
  }
  return {{"threshold", r.threshold},
          {"unscored", r.unscored},
          {"label_counts", labels},
          {"per_cluster", per}};
}

json to_json(const SpeciousReport& r) {
  return {{"n_flagged", r.n_flagged},
          {"n_clusters", r.n_clusters},
          {"n_accounts", r.n_accounts},
          {"unparseable_urls", r.unparseable_urls},
          {"posts_by_party", r.posts_by_party},
          {"flagged_posts", r.flagged_posts}};
}

json to_json(const TimelineReport& r) {
  json days = json::array();
  for (size_t i = 0; i < r.counts.size(); ++i)
    days.push_back({{"date", format_date(r.day_from + static_cast<std::int64_t>(i))},
                    {"count", r.counts[i]}});
  return {{"from", format_date(r.day_from)},
          {"to", format_date(r.day_to)},
          {"total", r.total},
          {"mean_per_day", r.mean_per_day},
          {"days", days}};
}

json to_json(const EvalReport& r) {
  return {{"n_predicted", r.n_predicted},
          {"n_campaigns", r.n_campaigns},
          {"cluster_count_delta", r.cluster_count_delta},
          {"n_correct", r.score.n_correct},
          {"n_misclassified", r.score.n_misclassified},
          {"precision", r.score.precision},
          {"recall", r.score.recall},
          {"f1", r.score.f1},
          {"ari", r.score.ari}};
}

void write_json(const json& j, const std::string& path) {
  write_file(path, j.dump(2) + "\n");
}

void write_toxicity_table_csv(const ToxicityReport& report, const std::string& path) {
  std::ostringstream ss;
  ss << "label,n_clusters,n_bjp,n_inc\n";
  for (const char* dim : kToxicityDimensions) {
    auto it = report.label_counts.find(dim);
    const std::array<size_t, 3> counts = it == report.label_counts.end()
                                             ? std::array<size_t, 3>{0, 0, 0}
                                             : it->second;
    ss << dim << ',' << counts[0] << ',' << counts[1] << ',' << counts[2] << '\n';
  }
  write_file(path, ss.str());
}

void write_timeline_csv(const TimelineReport& report, const std::string& path) {
  std::ostringstream ss;
  ss << "date,count\n";
  for (size_t i = 0; i < report.counts.size(); ++i)
    ss << format_date(report.day_from + static_cast<std::int64_t>(i)) << ',' << report.counts[i]
       << '\n';
  write_file(path, ss.str());
}

ConsolidatedReport build_report(const std::string& output_dir) {
  ConsolidatedReport out;
  json& doc = out.document;
  std::ostringstream text;
  text << "duplication campaign report\n";
  text << "===========================\n";

  struct Section {
    const char* key;
    const char* file;
    const char* title;
  };
  const Section sections[] = {
      {"filter", "filter_stats.json", "corpus filtering"},
      {"clusters", "stats.json", "cluster statistics"},
      {"consistency", "consistency.json", "cluster consistency"},
      {"sweep", "sweep.json", "eps sweep"},
      {"ropm", "ropm.json", "sliding-window baseline"},
      {"communities", "profile.json", "account communities"},
      {"accounts", "account_summary.json", "account screening"},
      {"keywords", "keywords.json", "keyword campaigns"},
      {"toxicity", "toxicity.json", "toxicity screening"},
      {"specious", "specious.json", "specious links"},
      {"timeline", "timeline.json", "specious timeline"},
      {"evaluation", "eval.json", "truth evaluation"},
  };

  for (const Section& s : sections) {
    json j = load_if_present(output_dir, s.file);
    if (j.is_null()) {
      doc[s.key] = {{"absent", true}};
      text << "\n[" << s.title << "] absent (" << s.file << " not found)\n";
      continue;
    }
    doc[s.key] = j;
    text << "\n[" << s.title << "]\n";
    if (std::string(s.key) == "clusters") {
      text << "  clusters: " << j.value("n_clusters", 0) << ", mean size "
           << j.value("mean_size", 0.0) << " (sd " << j.value("sd_size", 0.0) << "), max "
           << j.value("max_size", 0) << "\n";
      text << "  clustered posts: " << j.value("total_clustered", 0) << ", "
           << j.value("n_ge_k", 0) << " clusters with >= " << j.value("size_threshold", 10)
           << " members\n";
      text << "  post pairs: " << j.value("post_pairs", 0)
           << ", account pairs: " << j.value("account_pairs", 0) << "\n";
    } else if (std::string(s.key) == "ropm") {
      text << "  duplicate tweets: " << j.value("n_dup_tweets", 0)
           << ", pairs: " << j.value("n_pairs", 0) << ", accounts: " << j.value("n_accounts", 0)
           << "\n";
    } else if (std::string(s.key) == "communities") {
      text << "  communities: " << j.value("n_communities", 0) << " at modularity "
           << j.value("q", 0.0) << "; top " << j["communities"].size() << " hold "
           << j.value("top_share", 0.0) * 100.0 << "% of accounts\n";
    } else if (std::string(s.key) == "toxicity") {
      if (j.contains("label_counts"))
        for (auto& [dim, counts] : j["label_counts"].items())
          text << "  " << dim << ": " << counts.value("n_clusters", 0) << " clusters (BJP "
               << counts.value("n_bjp", 0) << ", INC " << counts.value("n_inc", 0) << ")\n";
    } else if (std::string(s.key) == "timeline") {
      text << "  " << j.value("total", 0) << " flagged posts between " << j.value("from", "")
           << " and " << j.value("to", "") << ", mean " << j.value("mean_per_day", 0.0)
           << " per day\n";
    } else if (std::string(s.key) == "consistency") {
      text << "  min cosine " << j.value("min_cosine", 0.0) << ", mean "
           << j.value("mean_cosine", 0.0) << "\n";
    } else if (std::string(s.key) == "accounts") {
      text << "  " << j.value("total", 0) << " accounts: " << j.value("bots", 0) << " bots, "
           << j.value("verified", 0) << " verified, " << j.value("regular", 0) << " regular\n";
    } else if (std::string(s.key) == "specious") {
      text << "  " << j.value("n_flagged", 0) << " flagged posts across "
           << j.value("n_accounts", 0) << " accounts\n";
    }
  }
  out.text = text.str();
  return out;
}

}  // namespace dupscan
