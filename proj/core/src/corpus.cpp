// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/corpus.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "dupscan/io_util.hpp"
#include "json.hpp"

namespace dupscan {

namespace {

using nlohmann::json;

bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c == '_';
}

// One pass of URL / mention / hashtag-mark removal. Removals can expose new
// patterns ("t@x.co/a" -> "t.co/a"), so normalize_text loops this to a
// fixpoint.
std::string strip_patterns_once(std::string_view s, bool& changed) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 7, "http://") == 0 || s.compare(i, 8, "https://") == 0) {
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      changed = true;
      continue;
    }
    if (s.compare(i, 5, "t.co/") == 0 &&
        (i == 0 || (!is_word_char(s[i - 1]) && s[i - 1] != '.' && s[i - 1] != '-'))) {
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      changed = true;
      continue;
    }
    if (s[i] == '@' && i + 1 < s.size() && is_word_char(s[i + 1])) {
      ++i;
      while (i < s.size() && is_word_char(s[i])) ++i;
      changed = true;
      continue;
    }
    if (s[i] == '#' && i + 1 < s.size() &&
        (is_word_char(s[i + 1]) || static_cast<unsigned char>(s[i + 1]) >= 0x80)) {
      ++i;  // keep the tag text
      changed = true;
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string nfc(const std::string& s) {
  UErrorCode ec = U_ZERO_ERROR;
  const icu::Normalizer2* inst = icu::Normalizer2::getNFCInstance(ec);
  if (U_FAILURE(ec)) return s;
  icu::UnicodeString us = icu::UnicodeString::fromUTF8(s);
  icu::UnicodeString res = inst->normalize(us, ec);
  if (U_FAILURE(ec)) return s;
  std::string out;
  res.toUTF8String(out);
  return out;
}

bool is_space_cp(char32_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

std::string collapse_whitespace(const std::string& s) {
  std::u32string cps = utf8_decode(s);
  std::u32string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t c : cps) {
    if (is_space_cp(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(U' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return utf8_encode(out);
}

std::optional<Post> parse_post_json(const std::string& line, std::string& why) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    why = "not a JSON object";
    return std::nullopt;
  }
  Post p;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
    why = "missing id";
    return std::nullopt;
  }
  p.id = j["id"].get<std::string>();
  if (!j.contains("account_id") || !j["account_id"].is_string()) {
    why = "missing account_id";
    return std::nullopt;
  }
  p.account_id = j["account_id"].get<std::string>();
  if (!j.contains("timestamp") || !j["timestamp"].is_string()) {
    why = "missing timestamp";
    return std::nullopt;
  }
  auto ts = parse_timestamp(j["timestamp"].get<std::string>());
  if (!ts) {
    why = "bad timestamp";
    return std::nullopt;
  }
  p.timestamp = *ts;
  if (!j.contains("text") || !j["text"].is_string()) {
    why = "missing text";
    return std::nullopt;
  }
  p.text = j["text"].get<std::string>();
  if (j.contains("urls")) {
    if (!j["urls"].is_array()) {
      why = "urls not an array";
      return std::nullopt;
    }
    for (const auto& u : j["urls"]) {
      if (!u.is_string()) {
        why = "non-string url";
        return std::nullopt;
      }
      p.urls.push_back(u.get<std::string>());
    }
  }
  if (j.contains("is_retweet")) {
    if (!j["is_retweet"].is_boolean()) {
      why = "is_retweet not a boolean";
      return std::nullopt;
    }
    p.is_retweet = j["is_retweet"].get<bool>();
  }
  if (j.contains("lang") && j["lang"].is_string()) p.lang = j["lang"].get<std::string>();
  return p;
}

std::optional<bool> parse_bool_field(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0" || s.empty()) return false;
  return std::nullopt;
}

std::optional<double> parse_unit_interval(std::string_view s) {
  try {
    size_t pos = 0;
    double v = std::stod(std::string(s), &pos);
    if (pos != s.size()) return std::nullopt;
    if (v < 0.0 || v > 1.0) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

std::string party_name(Party p) {
  switch (p) {
    case Party::BJP: return "BJP";
    case Party::INC: return "INC";
    default: return "OTHER";
  }
}

std::optional<Party> parse_party(std::string_view s) {
  if (s == "BJP") return Party::BJP;
  if (s == "INC") return Party::INC;
  if (s == "OTHER") return Party::Other;
  return std::nullopt;
}

std::string normalize_text(std::string_view raw) {
  std::string cur(raw);
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    std::string next = strip_patterns_once(cur, changed);
    cur = std::move(next);
    if (!changed) break;
  }
  return collapse_whitespace(nfc(cur));
}

size_t unique_word_count(std::string_view normalized) {
  std::unordered_set<std::string> seen;
  for (std::string_view tok : split_ws(normalized)) {
    icu::UnicodeString us = icu::UnicodeString::fromUTF8(
        icu::StringPiece(tok.data(), static_cast<int32_t>(tok.size())));
    us.foldCase();
    std::string folded;
    us.toUTF8String(folded);
    seen.insert(std::move(folded));
  }
  return seen.size();
}

std::string detect_lang(std::string_view text) {
  std::u32string cps = utf8_decode(std::string(text));
  size_t total = 0, devanagari = 0, ascii_letters = 0;
  for (char32_t c : cps) {
    if (is_space_cp(c)) continue;
    ++total;
    if (c >= 0x0900 && c <= 0x097F) ++devanagari;
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) ++ascii_letters;
  }
  if (total == 0) return "";
  if (devanagari * 2 >= total) return "hi";
  if (ascii_letters * 2 >= total) return "en";
  return "";
}

std::pair<PostCollection, LoadStats> load_posts(const std::string& path, PostFormat format) {
  PostCollection out;
  LoadStats stats;
  std::unordered_set<std::string> seen_ids;
  auto add = [&](std::optional<Post> p, const std::string& why, size_t lineno) {
    if (!p) {
      ++stats.skipped;
      log_warn("post_skipped", path + ":" + std::to_string(lineno) + " " + why);
      return;
    }
    if (!seen_ids.insert(p->id).second) {
      ++stats.skipped;
      log_warn("post_skipped", path + ":" + std::to_string(lineno) + " duplicate id " + p->id);
      return;
    }
    out.posts.push_back(std::move(*p));
    ++stats.loaded;
  };

  std::vector<std::string> lines = read_lines(path);
  if (format == PostFormat::Jsonl) {
    for (size_t i = 0; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      std::string why;
      add(parse_post_json(lines[i], why), why, i + 1);
    }
    return {std::move(out), stats};
  }

  // CSV with a header naming at least id,account_id,timestamp,text.
  if (lines.empty()) return {std::move(out), stats};
  std::vector<std::string> header = split_csv(lines[0]);
  std::map<std::string, size_t> col;
  for (size_t i = 0; i < header.size(); ++i) col[std::string(trim(header[i]))] = i;
  for (const char* required : {"id", "account_id", "timestamp", "text"})
    if (!col.count(required)) throw DataError(path + ": CSV header missing column " + required);

  auto field = [&](const std::vector<std::string>& row, const char* name) -> std::string {
    auto it = col.find(name);
    if (it == col.end() || it->second >= row.size()) return "";
    return row[it->second];
  };
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> row = split_csv(lines[i]);
    Post p;
    p.id = field(row, "id");
    p.account_id = field(row, "account_id");
    auto ts = parse_timestamp(field(row, "timestamp"));
    p.text = field(row, "text");
    auto rt = parse_bool_field(field(row, "is_retweet"));
    std::string why;
    if (p.id.empty())
      why = "missing id";
    else if (p.account_id.empty())
      why = "missing account_id";
    else if (!ts)
      why = "bad timestamp";
    else if (!rt)
      why = "bad is_retweet";
    if (!why.empty()) {
      add(std::nullopt, why, i + 1);
      continue;
    }
    p.timestamp = *ts;
    p.is_retweet = *rt;
    for (std::string_view u : split_ws(field(row, "urls"))) p.urls.emplace_back(u);
    p.lang = field(row, "lang");
    add(std::move(p), "", i + 1);
  }
  return {std::move(out), stats};
}

void save_posts_jsonl(const PostCollection& posts, const std::string& path) {
  std::ostringstream ss;
  for (const Post& p : posts.posts) {
    json j;
    j["id"] = p.id;
    j["account_id"] = p.account_id;
    j["timestamp"] = format_timestamp(p.timestamp);
    j["text"] = p.text;
    j["urls"] = p.urls;
    j["is_retweet"] = p.is_retweet;
    if (!p.lang.empty()) j["lang"] = p.lang;
    ss << j.dump() << "\n";
  }
  write_file(path, ss.str());
}

std::pair<AccountCollection, LoadStats> load_accounts(const std::string& path) {
  AccountCollection out;
  LoadStats stats;
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) return {std::move(out), stats};
  std::vector<std::string> header = split_csv(lines[0]);
  std::map<std::string, size_t> col;
  for (size_t i = 0; i < header.size(); ++i) col[std::string(trim(header[i]))] = i;
  if (!col.count("id")) throw DataError(path + ": account CSV header missing column id");

  auto field = [&](const std::vector<std::string>& row, const char* name) -> std::string {
    auto it = col.find(name);
    if (it == col.end() || it->second >= row.size()) return "";
    return row[it->second];
  };
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> row = split_csv(lines[i]);
    Account a;
    a.id = field(row, "id");
    a.handle = field(row, "handle");
    std::string why;
    auto ver = parse_bool_field(field(row, "verified"));
    if (a.id.empty()) why = "missing id";
    if (why.empty() && !ver) why = "bad verified flag";
    std::string cap_s = field(row, "cap"), rbs_s = field(row, "rbs"), party_s = field(row, "party");
    if (why.empty() && !cap_s.empty()) {
      a.cap = parse_unit_interval(cap_s);
      if (!a.cap) why = "cap outside [0,1]";
    }
    if (why.empty() && !rbs_s.empty()) {
      a.rbs = parse_unit_interval(rbs_s);
      if (!a.rbs) why = "rbs outside [0,1]";
    }
    if (why.empty() && !party_s.empty()) {
      a.party = parse_party(party_s);
      if (!a.party) why = "unknown party";
    }
    if (why.empty() && out.index.count(a.id)) why = "duplicate id " + a.id;
    if (!why.empty()) {
      ++stats.skipped;
      log_warn("account_skipped", path + ":" + std::to_string(i + 1) + " " + why);
      continue;
    }
    a.verified = *ver;
    out.index[a.id] = out.accounts.size();
    out.accounts.push_back(std::move(a));
    ++stats.loaded;
  }
  return {std::move(out), stats};
}

void save_accounts_csv(const AccountCollection& accounts, const std::string& path) {
  std::ostringstream ss;
  ss << "id,handle,verified,cap,rbs,party\n";
  char buf[32];
  for (const Account& a : accounts.accounts) {
    ss << csv_escape(a.id) << ',' << csv_escape(a.handle) << ','
       << (a.verified ? "true" : "false") << ',';
    if (a.cap) {
      std::snprintf(buf, sizeof buf, "%.6g", *a.cap);
      ss << buf;
    }
    ss << ',';
    if (a.rbs) {
      std::snprintf(buf, sizeof buf, "%.6g", *a.rbs);
      ss << buf;
    }
    ss << ',';
    if (a.party) ss << party_name(*a.party);
    ss << '\n';
  }
  write_file(path, ss.str());
}

std::pair<std::map<std::string, std::pair<double, double>>, LoadStats> load_bot_scores(
    const std::string& path) {
  std::map<std::string, std::pair<double, double>> out;
  LoadStats stats;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> row = split_csv(line);
    std::string why;
    if (row.size() != 3 || row[0].empty()) {
      why = "expected account_id,cap,rbs";
    } else if (out.count(row[0])) {
      why = "duplicate account " + row[0];
    } else {
      auto cap = parse_unit_interval(trim(row[1]));
      auto rbs = parse_unit_interval(trim(row[2]));
      if (!cap || !rbs) {
        why = "score outside [0,1]";
      } else {
        out.emplace(row[0], std::make_pair(*cap, *rbs));
        ++stats.loaded;
        continue;
      }
    }
    ++stats.skipped;
    log_warn("bot_score_skipped", path + ":" + std::to_string(i + 1) + " " + why);
  }
  return {std::move(out), stats};
}

std::pair<std::map<std::string, Party>, LoadStats> load_party_labels(const std::string& path) {
  std::map<std::string, Party> out;
  LoadStats stats;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> row = split_csv(line);
    std::string why;
    if (row.size() != 2 || row[0].empty()) {
      why = "expected account_id,party";
    } else if (out.count(row[0])) {
      why = "duplicate account " + row[0];
    } else {
      auto party = parse_party(trim(row[1]));
      if (!party) {
        why = "unknown party";
      } else {
        out.emplace(row[0], *party);
        ++stats.loaded;
        continue;
      }
    }
    ++stats.skipped;
    log_warn("party_label_skipped", path + ":" + std::to_string(i + 1) + " " + why);
  }
  return {std::move(out), stats};
}

std::pair<std::set<std::string>, LoadStats> load_domain_list(const std::string& path) {
  std::set<std::string> out;
  LoadStats stats;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::string domain = ascii_lower(line);
    if (!out.insert(domain).second) {
      ++stats.skipped;
      log_warn("domain_duplicate", path + ":" + std::to_string(i + 1) + " " + domain);
      continue;
    }
    ++stats.loaded;
  }
  return {std::move(out), stats};
}

std::pair<std::vector<std::string>, LoadStats> load_keywords(const std::string& path) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  LoadStats stats;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::string kw(line);
    if (!seen.insert(kw).second) {
      ++stats.skipped;
      log_warn("keyword_duplicate", path + ":" + std::to_string(i + 1) + " " + kw);
      continue;
    }
    out.push_back(std::move(kw));
    ++stats.loaded;
  }
  return {std::move(out), stats};
}

std::pair<PostCollection, FilterStats> filter_posts(const PostCollection& posts,
                                                    const FilterConfig& cfg) {
  PostCollection kept;
  FilterStats stats;
  stats.input = posts.size();
  for (const Post& p : posts.posts) {
    if (cfg.drop_retweets && p.is_retweet) {
      ++stats.dropped_retweet;
      continue;
    }
    std::string lang = !p.lang.empty() ? p.lang : detect_lang(p.text);
    if (!cfg.allowed_langs.empty() && !cfg.allowed_langs.count(lang)) {
      ++stats.dropped_language;
      continue;
    }
    if (cfg.min_unique_words > 0 &&
        unique_word_count(normalize_text(p.text)) <
            static_cast<size_t>(cfg.min_unique_words)) {
      ++stats.dropped_short;
      continue;
    }
    kept.posts.push_back(p);
  }
  stats.kept = kept.size();
  return {std::move(kept), stats};
}

}  // namespace dupscan
