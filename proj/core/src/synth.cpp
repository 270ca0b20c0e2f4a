// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>

#include "dupscan/io_util.hpp"
#include "dupscan/screening.hpp"
#include "json.hpp"

namespace dupscan {

namespace {

using nlohmann::json;

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

size_t randint(std::mt19937_64& rng, size_t n) { return static_cast<size_t>(rng() % n); }

// Pseudo-word pool built from syllables; deterministic and platform-stable.
std::vector<std::string> make_word_pool(std::mt19937_64& rng, size_t n) {
  static const char* onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n",
                                 "p", "r", "s", "t", "v", "z", "ch", "sh"};
  static const char* vowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  std::unordered_set<std::string> seen;
  std::vector<std::string> pool;
  pool.reserve(n);
  while (pool.size() < n) {
    std::string w;
    size_t syllables = 2 + randint(rng, 3);
    for (size_t s = 0; s < syllables; ++s) {
      w += onsets[randint(rng, std::size(onsets))];
      w += vowels[randint(rng, std::size(vowels))];
    }
    if (seen.insert(w).second) pool.push_back(std::move(w));
  }
  return pool;
}

// Trigger terms the built-in lexicon scores; clearly synthetic so they never
// collide with pool words.
struct TriggerTerm {
  const char* term;
  const char* dimension;
  double weight;
};
constexpr TriggerTerm kTriggers[] = {
    {"xztoxin", "toxicity", 1.2},     {"xzvenom", "toxicity", 0.9},
    {"xzblight", "severe_toxicity", 1.4}, {"xzscourge", "severe_toxicity", 1.0},
    {"xzslurix", "identity_attack", 1.3}, {"xzbrandk", "identity_attack", 0.9},
    {"xzmenace", "threat", 1.3},      {"xzdoomt", "threat", 0.9},
    {"xzinsulto", "insult", 1.2},     {"xzscornix", "insult", 0.9},
    {"xzprofane", "profanity", 1.3},  {"xzcursek", "profanity", 0.9},
};

std::string pad_id(const char* prefix, size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

size_t geometric_size(std::mt19937_64& rng, double mean) {
  if (mean <= 2.0) return 2;
  const double p = 1.0 / (mean - 1.0);
  double u = u01(rng);
  if (u <= 0.0) u = 0x1.0p-53;
  double extra = std::floor(std::log(u) / std::log(1.0 - p));
  size_t size = 2 + static_cast<size_t>(std::max(0.0, extra));
  return std::min(size, static_cast<size_t>(mean * 10.0) + 2);
}

std::string mutate_text(const std::string& text, double rate, std::mt19937_64& rng) {
  std::string out = text;
  for (char& c : out)
    if (c >= 'a' && c <= 'z' && u01(rng) < rate)
      c = static_cast<char>('a' + randint(rng, 26));
  return out;
}

std::string random_token(std::mt19937_64& rng, size_t len) {
  static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string t;
  for (size_t i = 0; i < len; ++i) t += alphabet[randint(rng, 36)];
  return t;
}

}  // namespace

std::string builtin_lexicon_csv() {
  std::ostringstream ss;
  char buf[16];
  for (const TriggerTerm& t : kTriggers) {
    std::snprintf(buf, sizeof buf, "%.2f", t.weight);
    ss << t.term << ',' << t.dimension << ',' << buf << '\n';
  }
  return ss.str();
}

SynthOutput generate(const SynthConfig& config) {
  if (config.n_accounts == 0 && (config.n_campaigns > 0 || config.noise_posts > 0))
    throw DataError("generate: no accounts to post from");
  if (config.t_begin >= config.t_end) throw DataError("generate: empty time range");

  std::mt19937_64 rng(config.seed);
  SynthOutput out;

  // --- accounts -------------------------------------------------------------
  const int acc_width = static_cast<int>(std::to_string(std::max<size_t>(config.n_accounts, 1)).size());
  for (size_t i = 0; i < config.n_accounts; ++i) {
    Account a;
    a.id = pad_id("a", i, acc_width);
    a.handle = "user_" + random_token(rng, 6);
    const bool bot = u01(rng) < config.bot_fraction;
    out.truth.account_bot_persona[a.id] = bot;
    if (bot) {
      a.cap = 0.92 + 0.07 * u01(rng);
      a.rbs = 0.92 + 0.07 * u01(rng);
    } else {
      a.verified = u01(rng) < config.verified_fraction;
      if (u01(rng) < 0.7) {  // some accounts simply have no scores
        a.cap = 0.85 * u01(rng);
        a.rbs = 0.85 * u01(rng);
      }
    }
    const double pr = u01(rng);
    if (pr < config.p_bjp)
      a.party = Party::BJP;
    else if (pr < config.p_bjp + config.p_inc)
      a.party = Party::INC;
    out.accounts.index[a.id] = out.accounts.accounts.size();
    out.accounts.accounts.push_back(std::move(a));
  }

  // --- vocabulary ------------------------------------------------------------
  std::vector<std::string> pool = make_word_pool(rng, 4000);
  for (size_t i = 0; i < 20; ++i) out.keywords.push_back(pool[randint(rng, pool.size())]);
  std::sort(out.keywords.begin(), out.keywords.end());
  out.keywords.erase(std::unique(out.keywords.begin(), out.keywords.end()), out.keywords.end());

  for (size_t i = 0; i < 20; ++i)
    out.specious_domains.push_back("specious" + pad_id("", i, 2) + ".example");
  const std::vector<std::string> benign_domains = {"news.example", "blog.example",
                                                   "media.example"};

  // --- campaigns --------------------------------------------------------------
  struct Draft {
    Post post;
    std::string campaign;  // empty for filler
  };
  std::vector<Draft> drafts;
  const int camp_width = static_cast<int>(std::to_string(std::max<size_t>(config.n_campaigns, 1)).size());
  const int post_width = 8;

  std::vector<std::vector<std::string>> campaign_texts;  // normalized later for the floor
  const double duration = static_cast<double>(config.t_end - config.t_begin);
  const double expected_posts =
      static_cast<double>(config.n_campaigns) * std::max(config.campaign_mean_size, 2.0) +
      static_cast<double>(config.noise_posts);
  const double mean_spacing = duration / std::max(expected_posts, 1.0);

  size_t next_post = 0;
  auto emit = [&](Post p, const std::string& campaign) {
    p.id = pad_id("p", next_post++, post_width);
    if (u01(rng) < config.specious_link_rate) {
      p.urls.push_back("https://www." + out.specious_domains[randint(rng, out.specious_domains.size())] +
                       "/s/" + random_token(rng, 6));
    } else if (u01(rng) < 0.2) {
      p.urls.push_back("https://" + benign_domains[randint(rng, benign_domains.size())] + "/b/" +
                       random_token(rng, 6));
    }
    drafts.push_back({std::move(p), campaign});
  };

  for (size_t c = 0; c < config.n_campaigns; ++c) {
    CampaignTruth truth;
    truth.id = pad_id("c", c, camp_width);
    truth.size = geometric_size(rng, config.campaign_mean_size);
    truth.toxic = u01(rng) < config.toxic_campaign_fraction;
    if (u01(rng) < config.keyword_campaign_fraction && !out.keywords.empty())
      truth.keyword = out.keywords[randint(rng, out.keywords.size())];

    std::string templ;
    const size_t n_words = 6 + randint(rng, 9);
    for (size_t w = 0; w < n_words; ++w) {
      if (w) templ += ' ';
      templ += pool[randint(rng, pool.size())];
    }
    if (!truth.keyword.empty()) templ += ' ' + truth.keyword;
    if (truth.toxic) {
      templ += ' ';
      templ += kTriggers[randint(rng, std::size(kTriggers))].term;
      templ += ' ';
      templ += kTriggers[randint(rng, std::size(kTriggers))].term;
    }

    // chronological spread: tight fits in small windows, wide escapes them
    const double spread = u01(rng);
    double gap_scale;
    if (spread < config.tight_campaign_fraction)
      gap_scale = 2.0;
    else if (spread < config.tight_campaign_fraction + config.medium_campaign_fraction)
      gap_scale = 40.0;
    else
      gap_scale = 500.0;

    const double total_span = gap_scale * mean_spacing * static_cast<double>(truth.size);
    const double start =
        static_cast<double>(config.t_begin) +
        u01(rng) * std::max(1.0, duration - total_span);

    std::vector<std::string> texts;
    for (size_t m = 0; m < truth.size; ++m) {
      Post p;
      p.account_id = out.accounts.accounts[randint(rng, config.n_accounts)].id;
      p.timestamp = static_cast<std::int64_t>(
          std::min(start + gap_scale * mean_spacing * (static_cast<double>(m) + u01(rng)),
                   static_cast<double>(config.t_end - 1)));
      std::string text = mutate_text(templ, config.mutation_rate, rng);
      if (u01(rng) < 0.5) text += " https://t.co/" + random_token(rng, 8);
      if (u01(rng) < 0.3) text += " @user" + random_token(rng, 4);
      p.text = text;
      p.lang = "en";
      texts.push_back(std::move(text));
      emit(std::move(p), truth.id);
    }
    campaign_texts.push_back(std::move(texts));
    out.truth.campaigns[truth.id] = truth;
  }

  // --- filler -------------------------------------------------------------------
  for (size_t f = 0; f < config.noise_posts; ++f) {
    Post p;
    const size_t acc = randint(rng, config.n_accounts);
    p.account_id = out.accounts.accounts[acc].id;
    const bool bursty = out.truth.account_bot_persona[p.account_id];
    double t;
    if (bursty) {
      // short bursts: quantized burst start plus a few seconds
      const double burst = std::floor(u01(rng) * duration / 3600.0) * 3600.0;
      t = burst + u01(rng) * 120.0;
    } else {
      // diurnal: mass in the 06:00-23:00 window of a random day
      const double day = std::floor(u01(rng) * duration / 86400.0) * 86400.0;
      t = day + (6.0 + 17.0 * u01(rng)) * 3600.0;
    }
    p.timestamp = static_cast<std::int64_t>(
        std::min(static_cast<double>(config.t_begin) + t, static_cast<double>(config.t_end - 1)));
    std::string text = "zq" + pad_id("", f, 6);
    const size_t n_words = 8 + randint(rng, 9);
    for (size_t w = 0; w < n_words; ++w) text += ' ' + pool[randint(rng, pool.size())];
    p.text = std::move(text);
    p.lang = "en";
    emit(std::move(p), "");
  }

  if (config.max_posts_per_account > 0 &&
      drafts.size() > config.n_accounts * config.max_posts_per_account)
    throw DataError("generate: infeasible config, " + std::to_string(drafts.size()) +
                    " posts exceed account capacity");

  // --- assemble ------------------------------------------------------------------
  std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    if (a.post.timestamp != b.post.timestamp) return a.post.timestamp < b.post.timestamp;
    return a.post.id < b.post.id;
  });
  for (Draft& d : drafts) {
    out.truth.post_campaign[d.post.id] = d.campaign;
    for (const std::string& url : d.post.urls) {
      auto host = url_host(url);
      if (!host) continue;
      bool specious = false;
      for (const std::string& dom : out.specious_domains)
        if (*host == dom) specious = true;
      if (specious) {
        out.truth.specious_posts.push_back(d.post.id);
        ++out.truth.specious_daily[format_date(d.post.timestamp / 86400)];
        break;
      }
    }
    out.posts.posts.push_back(std::move(d.post));
  }
  std::sort(out.truth.specious_posts.begin(), out.truth.specious_posts.end());

  // --- planted cosine floor ---------------------------------------------------------
  if (config.compute_cosine_floor) {
    double floor = 1.0;
    for (const auto& texts : campaign_texts) {
      std::vector<std::vector<double>> vecs;
      for (const std::string& t : texts)
        vecs.push_back(hashed_ngram_embed(normalize_text(t), config.embed));
      for (size_t i = 0; i < vecs.size(); ++i)
        for (size_t j = i + 1; j < vecs.size(); ++j)
          floor = std::min(floor, cosine(vecs[i], vecs[j]));
    }
    out.truth.cosine_floor = floor;
  }
  return out;
}

EvalReport evaluate(const ClusterSet& predicted, const TruthLabels& truth) {
  std::vector<std::string> universe;
  for (const Cluster& c : predicted.clusters)
    universe.insert(universe.end(), c.member_ids.begin(), c.member_ids.end());
  universe.insert(universe.end(), predicted.noise.begin(), predicted.noise.end());

  EvalReport report;
  report.score = score_against_truth(predicted, universe, truth);
  report.n_predicted = predicted.clusters.size();
  std::unordered_set<std::string> campaigns;
  for (const std::string& id : universe) {
    auto it = truth.find(id);
    if (it != truth.end() && !it->second.empty()) campaigns.insert(it->second);
  }
  report.n_campaigns = campaigns.size();
  report.cluster_count_delta = static_cast<long long>(report.n_predicted) -
                               static_cast<long long>(report.n_campaigns);
  return report;
}

void save_truth_jsonl(const TruthLabels& truth, const std::string& path) {
  std::map<std::string, std::string> sorted(truth.begin(), truth.end());
  std::ostringstream ss;
  for (const auto& [post_id, campaign] : sorted) {
    json j;
    j["post_id"] = post_id;
    if (campaign.empty())
      j["campaign_id"] = nullptr;
    else
      j["campaign_id"] = campaign;
    ss << j.dump() << "\n";
  }
  write_file(path, ss.str());
}

TruthLabels load_truth_jsonl(const std::string& path) {
  TruthLabels truth;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    json j = json::parse(lines[i], nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("post_id") ||
        !j["post_id"].is_string() || !j.contains("campaign_id"))
      throw DataError(path + ":" + std::to_string(i + 1) + ": bad truth row");
    std::string campaign;
    if (j["campaign_id"].is_string()) campaign = j["campaign_id"].get<std::string>();
    truth[j["post_id"].get<std::string>()] = campaign;
  }
  return truth;
}

PlantedGraph planted_partition_graph(size_t n_blocks, size_t block_size, double p_in,
                                     double p_cross, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PlantedGraph out;
  const size_t n = n_blocks * block_size;
  const int width = static_cast<int>(std::to_string(std::max<size_t>(n, 1)).size());
  std::vector<std::string> names(n);
  for (size_t v = 0; v < n; ++v) {
    names[v] = pad_id("n", v, width);
    out.blocks[names[v]] = static_cast<int>(v / block_size);
  }
  std::vector<std::tuple<std::string, std::string, double>> edges;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const bool same = out.blocks[names[i]] == out.blocks[names[j]];
      const double p = same ? p_in : p_cross;
      if (u01(rng) < p)
        edges.emplace_back(names[i], names[j], same ? 1.0 + static_cast<double>(randint(rng, 3)) : 1.0);
    }
  out.graph = make_graph(edges);
  return out;
}

}  // namespace dupscan
