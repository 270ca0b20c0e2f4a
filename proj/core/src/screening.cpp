// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/screening.hpp"

#include <unicode/unistr.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "dupscan/io_util.hpp"

namespace dupscan {

namespace {

std::string fold_case(std::string_view s) {
  icu::UnicodeString us =
      icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  us.foldCase();
  std::string out;
  us.toUTF8String(out);
  return out;
}

size_t dimension_index(std::string_view name) {
  for (size_t i = 0; i < kToxicityDimensions.size(); ++i)
    if (name == kToxicityDimensions[i]) return i;
  throw DataError("unknown toxicity dimension: " + std::string(name));
}

bool contains_word(const std::string& haystack, const std::string& needle) {
  size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || std::isspace(static_cast<unsigned char>(haystack[pos - 1]));
    const size_t end = pos + needle.size();
    const bool right_ok =
        end >= haystack.size() || std::isspace(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

}  // namespace

AccountLabels classify_account(const Account& account, const BotThresholds& thresholds) {
  AccountLabels labels;
  labels.bot = account.cap && account.rbs && *account.cap > thresholds.cap_min &&
               *account.rbs > thresholds.rbs_min;
  labels.verified = account.verified;
  labels.political = account.party.has_value();
  labels.regular = !labels.bot && !labels.verified;
  return labels;
}

SummaryReport account_summary(const AccountCollection& accounts,
                              const BotThresholds& thresholds) {
  SummaryReport report;
  report.total = accounts.accounts.size();
  for (const Account& a : accounts.accounts) {
    AccountLabels l = classify_account(a, thresholds);
    report.bots += l.bot;
    report.verified += l.verified;
    report.political += l.political;
    report.regular += l.regular;
  }
  return report;
}

KeywordReport keyword_surface(const ClusterSet& clusters, const PostCollection& posts,
                              const std::vector<std::string>& keywords, size_t top_k,
                              bool word_boundary) {
  if (keywords.empty()) throw DataError("keyword_surface: no keywords");
  KeywordReport report;

  std::vector<std::string> folded_texts(posts.size());
  std::unordered_map<std::string, size_t> post_row;
  for (size_t i = 0; i < posts.size(); ++i) {
    folded_texts[i] = fold_case(normalize_text(posts.posts[i].text));
    post_row[posts.posts[i].id] = i;
  }

  std::unordered_set<size_t> any_post;
  std::unordered_set<int> any_cluster;

  for (const std::string& keyword : keywords) {
    KeywordHit hit;
    hit.keyword = keyword;
    const std::string needle = fold_case(normalize_text(keyword));

    std::vector<std::pair<std::int64_t, int>> spans;  // (-span used via sort below)
    for (const Cluster& c : clusters.clusters) {
      size_t matched_here = 0;
      for (const std::string& id : c.member_ids) {
        auto it = post_row.find(id);
        if (it == post_row.end()) continue;
        const std::string& text = folded_texts[it->second];
        const bool match = word_boundary ? contains_word(text, needle)
                                         : text.find(needle) != std::string::npos;
        if (match) {
          ++matched_here;
          any_post.insert(it->second);
        }
      }
      if (matched_here > 0) {
        hit.matched_posts += matched_here;
        hit.matched_clusters.push_back(c.id);
        any_cluster.insert(c.id);
        spans.emplace_back(c.active_span_seconds(), c.id);
      }
    }
    std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;  // longest active first
      return a.second < b.second;
    });
    for (size_t i = 0; i < spans.size() && i < top_k; ++i)
      hit.top_clusters.push_back(spans[i].second);
    std::sort(hit.matched_clusters.begin(), hit.matched_clusters.end());
    report.hits.push_back(std::move(hit));
  }

  report.total_matched_posts = any_post.size();
  report.total_matched_clusters = any_cluster.size();
  return report;
}

ToxicityReport score_toxicity(const ClusterSet& clusters, const PostCollection& posts,
                              const ToxicityScorer& scorer,
                              const std::map<std::string, Party>* parties, double threshold,
                              std::uint64_t seed) {
  ToxicityReport report;
  report.threshold = threshold;
  for (const char* dim : kToxicityDimensions) report.label_counts[dim] = {0, 0, 0};

  std::unordered_map<std::string, const Post*> by_id;
  for (const Post& p : posts.posts) by_id[p.id] = &p;

  for (const Cluster& c : clusters.clusters) {
    // members are sorted ascending, so the draw depends only on (seed, id)
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(c.id) + 1)));
    const std::string& rep_id = c.member_ids[rng() % c.member_ids.size()];
    auto it = by_id.find(rep_id);
    if (it == by_id.end()) throw DataError("score_toxicity: representative post missing: " + rep_id);

    std::optional<ToxicityScores> scores = scorer(it->second->text);
    if (!scores) {
      ++report.unscored;
      log_warn("cluster_unscored", "cluster " + std::to_string(c.id));
      continue;
    }

    ClusterToxicity ct;
    ct.cluster_id = c.id;
    ct.representative = rep_id;
    ct.scores = *scores;

    bool bjp = false, inc = false;
    if (parties) {
      for (const std::string& id : c.member_ids) {
        auto pit = by_id.find(id);
        if (pit == by_id.end()) continue;
        auto party = parties->find(pit->second->account_id);
        if (party == parties->end()) continue;
        bjp |= party->second == Party::BJP;
        inc |= party->second == Party::INC;
      }
    }

    for (size_t i = 0; i < kToxicityDimensions.size(); ++i) {
      if (ct.scores[i] > threshold) {  // strictly above
        ct.labels.emplace_back(kToxicityDimensions[i]);
        auto& row = report.label_counts[kToxicityDimensions[i]];
        ++row[0];
        row[1] += bjp;
        row[2] += inc;
      }
    }
    report.per_cluster.push_back(std::move(ct));
  }
  return report;
}

LexiconScorer LexiconScorer::load(const std::string& path) {
  LexiconScorer scorer;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> row = split_csv(line);
    if (row.size() != 3) throw DataError(path + ":" + std::to_string(i + 1) +
                                         ": expected term,dimension,weight");
    size_t dim = dimension_index(trim(row[1]));
    double weight = 0.0;
    try {
      weight = std::stod(row[2]);
    } catch (...) {
      throw DataError(path + ":" + std::to_string(i + 1) + ": bad weight");
    }
    scorer.terms_[fold_case(std::string(trim(row[0])))].emplace_back(dim, weight);
  }
  if (scorer.terms_.empty()) throw DataError(path + ": empty lexicon");
  return scorer;
}

ToxicityScores LexiconScorer::score(const std::string& text) const {
  std::array<double, 6> sums{};
  const std::string folded = fold_case(normalize_text(text));
  for (std::string_view token : split_ws(folded)) {
    auto it = terms_.find(std::string(token));
    if (it == terms_.end()) continue;
    for (auto [dim, weight] : it->second) sums[dim] += weight;
  }
  ToxicityScores scores;
  for (size_t i = 0; i < sums.size(); ++i) scores[i] = 1.0 - std::exp(-sums[i]);
  return scores;
}

std::optional<std::string> url_host(std::string_view url) {
  size_t scheme = url.find("://");
  std::string_view rest = scheme == std::string_view::npos ? url : url.substr(scheme + 3);
  if (scheme == std::string_view::npos) {
    // accept scheme-less "host/path" forms
    if (rest.empty() || rest[0] == '/') return std::nullopt;
  }
  size_t end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, end);
  size_t at = authority.rfind('@');
  if (at != std::string_view::npos) authority = authority.substr(at + 1);
  size_t colon = authority.find(':');
  if (colon != std::string_view::npos) authority = authority.substr(0, colon);
  if (authority.empty()) return std::nullopt;
  for (char c : authority) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '-';
    if (!ok) return std::nullopt;
  }
  std::string host = ascii_lower(authority);
  if (host.rfind("www.", 0) == 0) host = host.substr(4);
  if (host.empty()) return std::nullopt;
  return host;
}

bool domain_matches(const std::string& host, const std::set<std::string>& domains) {
  if (domains.count(host)) return true;
  // suffix match on a dot boundary: cdn.fake.example matches fake.example
  size_t pos = host.find('.');
  while (pos != std::string::npos) {
    if (domains.count(host.substr(pos + 1))) return true;
    pos = host.find('.', pos + 1);
  }
  return false;
}

SpeciousReport match_specious(const PostCollection& posts, const std::set<std::string>& domains,
                              const ClusterSet* clusters,
                              const std::map<std::string, Party>* parties) {
  SpeciousReport report;
  std::unordered_set<std::string> flagged;
  std::unordered_set<std::string> accounts;

  for (const Post& p : posts.posts) {
    bool hit = false;
    for (const std::string& url : p.urls) {
      auto host = url_host(url);
      if (!host) {
        ++report.unparseable_urls;
        continue;
      }
      if (domain_matches(*host, domains)) hit = true;
    }
    if (!hit) continue;
    flagged.insert(p.id);
    accounts.insert(p.account_id);
    if (parties) {
      auto it = parties->find(p.account_id);
      if (it != parties->end()) ++report.posts_by_party[party_name(it->second)];
    }
  }

  report.flagged_posts.assign(flagged.begin(), flagged.end());
  std::sort(report.flagged_posts.begin(), report.flagged_posts.end());
  report.n_flagged = flagged.size();
  report.n_accounts = accounts.size();

  if (clusters) {
    for (const Cluster& c : clusters->clusters)
      for (const std::string& id : c.member_ids)
        if (flagged.count(id)) {
          ++report.n_clusters;
          break;
        }
  }
  return report;
}

TimelineReport specious_timeline(const PostCollection& posts,
                                 const std::vector<std::string>& flagged_ids,
                                 const std::string& date_from, const std::string& date_to) {
  auto from = parse_date(date_from);
  auto to = parse_date(date_to);
  if (!from || !to) throw DataError("specious_timeline: bad date (want YYYY-MM-DD)");
  if (*from > *to) throw DataError("specious_timeline: date_from after date_to");

  TimelineReport report;
  report.day_from = *from;
  report.day_to = *to;
  report.counts.assign(static_cast<size_t>(*to - *from + 1), 0);

  std::unordered_set<std::string> wanted(flagged_ids.begin(), flagged_ids.end());
  for (const Post& p : posts.posts) {
    if (!wanted.count(p.id)) continue;
    std::int64_t day = p.timestamp / 86400;
    if (day < *from || day > *to) continue;
    ++report.counts[static_cast<size_t>(day - *from)];
    ++report.total;
  }
  report.mean_per_day = static_cast<double>(report.total) / static_cast<double>(report.counts.size());
  return report;
}

}  // namespace dupscan
