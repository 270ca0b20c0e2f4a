// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace dupscan {

/// One social-media message.
struct Post {
  std::string id;
  std::string account_id;
  std::int64_t timestamp = 0;  // epoch seconds, UTC
  std::string text;
  std::vector<std::string> urls;
  bool is_retweet = false;
  std::string lang;  // 2-letter code, empty when absent
};

enum class Party { BJP, INC, Other };

std::string party_name(Party p);
std::optional<Party> parse_party(std::string_view s);

struct Account {
  std::string id;
  std::string handle;
  bool verified = false;
  std::optional<double> cap;  // complete automation probability, [0,1]
  std::optional<double> rbs;  // raw bot score, [0,1]
  std::optional<Party> party;
};

struct PostCollection {
  std::vector<Post> posts;

  size_t size() const { return posts.size(); }
  bool empty() const { return posts.empty(); }
};

struct AccountCollection {
  std::vector<Account> accounts;
  std::unordered_map<std::string, size_t> index;  // id -> position

  const Account* find(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? nullptr : &accounts[it->second];
  }
};

enum class PostFormat { Jsonl, Csv };

struct LoadStats {
  size_t loaded = 0;
  size_t skipped = 0;  // malformed records
};

/// Noise filters applied to a loaded corpus.
struct FilterConfig {
  std::set<std::string> allowed_langs = {"en", "hi"};
  int min_unique_words = 4;
  bool drop_retweets = true;
};

struct FilterStats {
  size_t input = 0;
  size_t kept = 0;
  size_t dropped_retweet = 0;
  size_t dropped_language = 0;
  size_t dropped_short = 0;
};

// --- loading ----------------------------------------------------------------

/// Reads posts from JSONL ({"id","account_id","timestamp","text","urls",
/// "is_retweet","lang"}) or CSV with the same column names. Malformed or
/// duplicate-id records are skipped and counted; an unreadable file throws
/// DataError.
std::pair<PostCollection, LoadStats> load_posts(const std::string& path, PostFormat format);

void save_posts_jsonl(const PostCollection& posts, const std::string& path);

/// Account CSV: header `id,handle,verified,cap,rbs,party`, empty optionals.
std::pair<AccountCollection, LoadStats> load_accounts(const std::string& path);
void save_accounts_csv(const AccountCollection& accounts, const std::string& path);

/// Lines of `account_id,cap,rbs`. Scores outside [0,1] are rejected.
std::pair<std::map<std::string, std::pair<double, double>>, LoadStats> load_bot_scores(
    const std::string& path);

/// Lines of `account_id,party` with party in {BJP, INC, OTHER}.
std::pair<std::map<std::string, Party>, LoadStats> load_party_labels(const std::string& path);

/// One lowercase domain per line; '#' comments and blank lines ignored;
/// duplicates deduplicated with a warning.
std::pair<std::set<std::string>, LoadStats> load_domain_list(const std::string& path);

/// One keyword per line; '#' comments and blank lines ignored.
std::pair<std::vector<std::string>, LoadStats> load_keywords(const std::string& path);

// --- text -------------------------------------------------------------------

/// Removes URLs (http/https tokens and bare t.co paths) and @-mentions,
/// strips '#' from hashtags, NFC-normalizes, collapses whitespace, trims.
/// Total and idempotent.
std::string normalize_text(std::string_view raw);

/// Distinct case-folded whitespace-delimited tokens. Input should already be
/// normalized.
size_t unique_word_count(std::string_view normalized);

// --- filtering --------------------------------------------------------------

/// Applies the configured noise filters in input order. Language uses the
/// post's `lang` field when present, otherwise a script heuristic
/// (>=50% Devanagari -> hi, >=50% ASCII letters -> en, else unknown).
std::pair<PostCollection, FilterStats> filter_posts(const PostCollection& posts,
                                                    const FilterConfig& cfg);

/// The script heuristic used by filter_posts when `lang` is absent.
/// Returns "hi", "en", or "" (unknown).
std::string detect_lang(std::string_view text);

}  // namespace dupscan
