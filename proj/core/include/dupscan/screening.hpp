// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dupscan/cluster.hpp"
#include "dupscan/corpus.hpp"

namespace dupscan {

// --- account classification -----------------------------------------------------

struct BotThresholds {
  double cap_min = 0.9;  // bot requires cap strictly greater
  double rbs_min = 0.9;  // and rbs strictly greater
};

struct AccountLabels {
  bool bot = false;
  bool verified = false;
  bool political = false;
  bool regular = false;  // neither bot nor verified
};

/// Missing scores never make a bot. Comparisons are strict (>), so a score
/// exactly at the threshold does not qualify.
AccountLabels classify_account(const Account& account, const BotThresholds& thresholds);

struct SummaryReport {
  size_t total = 0;
  size_t bots = 0;
  size_t verified = 0;
  size_t political = 0;
  size_t regular = 0;
};

SummaryReport account_summary(const AccountCollection& accounts,
                              const BotThresholds& thresholds);

// --- keyword surfacing ------------------------------------------------------------

struct KeywordHit {
  std::string keyword;
  size_t matched_posts = 0;
  std::vector<int> matched_clusters;  // ascending cluster id
  std::vector<int> top_clusters;      // ranked by active span desc, id asc
};

struct KeywordReport {
  std::vector<KeywordHit> hits;  // one per keyword, input order
  size_t total_matched_posts = 0;     // posts matching any keyword
  size_t total_matched_clusters = 0;  // clusters matching any keyword
};

/// Case-insensitive substring match on normalized text; a cluster matches a
/// keyword iff any member matches. When word_boundary is set, the keyword
/// must appear as whole whitespace-delimited words.
KeywordReport keyword_surface(const ClusterSet& clusters, const PostCollection& posts,
                              const std::vector<std::string>& keywords, size_t top_k = 5,
                              bool word_boundary = false);

// --- toxicity ---------------------------------------------------------------------

inline constexpr std::array<const char*, 6> kToxicityDimensions = {
    "toxicity", "severe_toxicity", "identity_attack", "threat", "insult", "profanity"};

struct ToxicityScores {
  std::array<double, 6> values{};  // indexed like kToxicityDimensions, in [0,1]

  double operator[](size_t i) const { return values[i]; }
  double& operator[](size_t i) { return values[i]; }
};

/// Returns nullopt on scoring failure (the cluster stays unscored).
using ToxicityScorer = std::function<std::optional<ToxicityScores>(const std::string& text)>;

struct ClusterToxicity {
  int cluster_id = 0;
  std::string representative;  // scored post id
  ToxicityScores scores;
  std::vector<std::string> labels;  // dimensions with score strictly above threshold
};

struct ToxicityReport {
  std::vector<ClusterToxicity> per_cluster;  // scored clusters, ascending id
  size_t unscored = 0;
  double threshold = 0.5;
  // Table-shaped breakdown: dimension -> (clusters labeled, of which BJP / INC)
  std::map<std::string, std::array<size_t, 3>> label_counts;
};

/// Scores one representative post per cluster, chosen uniformly at random
/// under the seed. A dimension labels the cluster iff its score is strictly
/// above the threshold. Party attribution counts a cluster for a party when
/// any member post's account carries that label.
ToxicityReport score_toxicity(const ClusterSet& clusters, const PostCollection& posts,
                              const ToxicityScorer& scorer,
                              const std::map<std::string, Party>* parties = nullptr,
                              double threshold = 0.5, std::uint64_t seed = 1);

/// Hermetic stand-in for an external toxicity service: per dimension,
/// score = 1 - exp(-sum of matched term weights) over whole case-folded
/// tokens.
class LexiconScorer {
 public:
  /// Lexicon CSV rows `term,dimension,weight`. Missing file or unknown
  /// dimension is fatal.
  static LexiconScorer load(const std::string& path);

  ToxicityScores score(const std::string& text) const;
  size_t size() const { return terms_.size(); }

 private:
  std::map<std::string, std::vector<std::pair<size_t, double>>> terms_;  // folded term -> (dim, weight)
};

// --- specious links ----------------------------------------------------------------

struct SpeciousReport {
  std::vector<std::string> flagged_posts;  // ascending post id
  size_t n_flagged = 0;
  size_t n_clusters = 0;  // clusters containing >= 1 flagged post
  size_t n_accounts = 0;  // accounts with >= 1 flagged post
  size_t unparseable_urls = 0;
  std::map<std::string, size_t> posts_by_party;  // party -> flagged posts
};

/// A post is flagged iff any URL host (lowercased, leading "www." stripped)
/// equals a listed domain or ends with "." + a listed domain.
SpeciousReport match_specious(const PostCollection& posts, const std::set<std::string>& domains,
                              const ClusterSet* clusters = nullptr,
                              const std::map<std::string, Party>* parties = nullptr);

/// Lowercased host with leading www. stripped, or nullopt if unparseable.
std::optional<std::string> url_host(std::string_view url);
bool domain_matches(const std::string& host, const std::set<std::string>& domains);

// --- timelines ---------------------------------------------------------------------

struct TimelineReport {
  std::int64_t day_from = 0;  // days since epoch, inclusive
  std::int64_t day_to = 0;    // inclusive
  std::vector<size_t> counts; // one per UTC day, zero-filled
  size_t total = 0;
  double mean_per_day = 0.0;
};

/// Per-UTC-day counts of the given posts within [date_from, date_to]
/// (dates "YYYY-MM-DD", inclusive). Inverted range is an error.
TimelineReport specious_timeline(const PostCollection& posts,
                                 const std::vector<std::string>& flagged_ids,
                                 const std::string& date_from, const std::string& date_to);

}  // namespace dupscan
