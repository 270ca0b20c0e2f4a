// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/screening.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "dupscan/io_util.hpp"
#include "dupscan/synth.hpp"
#include "support/test_util.hpp"

using namespace dupscan;
using testutil::TempDir;
using testutil::write_text;

namespace {

Account scored(std::optional<double> cap, std::optional<double> rbs, bool verified = false) {
  Account a;
  a.id = "x";
  a.cap = cap;
  a.rbs = rbs;
  a.verified = verified;
  return a;
}

ClusterSet one_cluster(const std::vector<std::string>& ids, std::int64_t span = 0) {
  ClusterSet cs;
  Cluster c;
  c.id = 0;
  c.member_ids = ids;
  std::sort(c.member_ids.begin(), c.member_ids.end());
  c.first_ts = 0;
  c.last_ts = span;
  cs.clusters.push_back(c);
  return cs;
}

}  // namespace

TEST_CASE("classify_account applies strict bot thresholds") {
  BotThresholds t;
  CHECK(classify_account(scored(0.95, 0.97), t).bot);
  CHECK_FALSE(classify_account(scored(0.9, 0.95), t).bot);   // strict >
  CHECK_FALSE(classify_account(scored(0.95, 0.9), t).bot);
  CHECK_FALSE(classify_account(scored(std::nullopt, 0.99), t).bot);
  CHECK_FALSE(classify_account(scored(std::nullopt, std::nullopt), t).bot);

  SUBCASE("verified without scores is verified, not bot, not regular") {
    AccountLabels l = classify_account(scored(std::nullopt, std::nullopt, true), t);
    CHECK(l.verified);
    CHECK_FALSE(l.bot);
    CHECK_FALSE(l.regular);
  }
  SUBCASE("political flag follows the party label") {
    Account a = scored(0.1, 0.1);
    a.party = Party::INC;
    CHECK(classify_account(a, t).political);
    CHECK(classify_account(a, t).regular);  // political but neither bot nor verified
  }
  SUBCASE("bot set shrinks as thresholds rise") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      Account a = scored(testutil::u01(rng), testutil::u01(rng));
      BotThresholds loose{0.5, 0.5}, strict{0.8, 0.8};
      if (classify_account(a, strict).bot) CHECK(classify_account(a, loose).bot);
    }
  }
}

TEST_CASE("account_summary counts categories") {
  AccountCollection accounts;
  auto push = [&](Account a, const std::string& id) {
    a.id = id;
    accounts.index[id] = accounts.accounts.size();
    accounts.accounts.push_back(a);
  };
  push(scored(0.95, 0.95), "a1");                      // bot
  push(scored(0.2, 0.3, true), "a2");                  // verified
  push(scored(std::nullopt, std::nullopt, true), "a3");  // verified
  for (int i = 0; i < 7; ++i) push(scored(0.1, 0.1), "r" + std::to_string(i));

  SummaryReport r = account_summary(accounts, {});
  CHECK(r.total == 10);
  CHECK(r.bots == 1);
  CHECK(r.verified == 2);
  CHECK(r.regular == 7);

  SUBCASE("missing scores never count as bots") {
    AccountCollection none;
    for (int i = 0; i < 5; ++i) {
      Account a;
      a.id = "n" + std::to_string(i);
      none.index[a.id] = none.accounts.size();
      none.accounts.push_back(a);
    }
    CHECK(account_summary(none, {}).bots == 0);
  }
}

TEST_CASE("planted bot rate is reproduced by the summary") {
  SynthConfig cfg;
  cfg.n_accounts = 2000;
  cfg.n_campaigns = 0;
  cfg.noise_posts = 0;
  cfg.bot_fraction = 0.008;
  cfg.seed = 91;
  cfg.compute_cosine_floor = false;
  SynthOutput synth = generate(cfg);
  SummaryReport r = account_summary(synth.accounts, {});
  size_t planted = 0;
  for (const auto& [id, bot] : synth.truth.account_bot_persona) planted += bot;
  CHECK(r.bots == planted);  // scores are planted strictly above 0.9 for bots
  CHECK(std::abs(static_cast<double>(r.bots) / 2000.0 - 0.008) < 0.006);
}

TEST_CASE("keyword_surface matches and ranks clusters") {
  PostCollection posts;
  auto add_post = [&](const std::string& id, const std::string& text) {
    posts.posts.push_back({id, "acc_" + id, 0, text, {}, false, "en"});
  };
  add_post("p1", "please boycott the product now");
  add_post("p2", "BOYCOTT everything they sell");
  add_post("p3", "boycott is trending again");
  add_post("p4", "unrelated content entirely");
  add_post("p5", "nothing to see here");

  ClusterSet cs;
  Cluster c0;  // all three members match, span 100
  c0.id = 0;
  c0.member_ids = {"p1", "p2", "p3"};
  c0.first_ts = 0;
  c0.last_ts = 100;
  Cluster c1;  // no match, span 50
  c1.id = 1;
  c1.member_ids = {"p4", "p5"};
  c1.first_ts = 0;
  c1.last_ts = 50;
  cs.clusters = {c0, c1};

  KeywordReport rep = keyword_surface(cs, posts, {"boycott"});
  REQUIRE(rep.hits.size() == 1);
  CHECK(rep.hits[0].matched_posts == 3);  // case-insensitive
  CHECK(rep.hits[0].matched_clusters == std::vector<int>{0});
  CHECK(rep.total_matched_posts == 3);
  CHECK(rep.total_matched_clusters == 1);

  SUBCASE("ranking prefers the longer active span, then lower id") {
    PostCollection more = posts;
    more.posts.push_back({"p6", "acc6", 0, "boycott here too", {}, false, "en"});
    more.posts.push_back({"p7", "acc7", 0, "boycott again", {}, false, "en"});
    ClusterSet ranked = cs;
    Cluster c2;
    c2.id = 2;
    c2.member_ids = {"p6", "p7"};
    c2.first_ts = 0;
    c2.last_ts = 50;
    ranked.clusters.push_back(c2);
    KeywordReport r2 = keyword_surface(ranked, more, {"boycott"}, 1);
    CHECK(r2.hits[0].top_clusters == std::vector<int>{0});  // span 100 beats 50
    KeywordReport r3 = keyword_surface(ranked, more, {"boycott"}, 5);
    CHECK(r3.hits[0].top_clusters == std::vector<int>{0, 2});
  }
  SUBCASE("absent keyword gives an empty hit") {
    KeywordReport r2 = keyword_surface(cs, posts, {"nonexistent"});
    CHECK(r2.hits[0].matched_posts == 0);
    CHECK(r2.hits[0].matched_clusters.empty());
    CHECK(r2.hits[0].top_clusters.empty());
  }
  SUBCASE("word-boundary mode rejects substrings") {
    PostCollection embedded;
    embedded.posts.push_back({"q1", "a", 0, "boycotting continues", {}, false, "en"});
    embedded.posts.push_back({"q2", "a", 0, "boycotting goes on", {}, false, "en"});
    ClusterSet qcs = one_cluster({"q1", "q2"});
    CHECK(keyword_surface(qcs, embedded, {"boycott"}, 5, false).hits[0].matched_posts == 2);
    CHECK(keyword_surface(qcs, embedded, {"boycott"}, 5, true).hits[0].matched_posts == 0);
  }
  SUBCASE("empty keyword list is an error") {
    CHECK_THROWS_AS(keyword_surface(cs, posts, {}), DataError);
  }
}

TEST_CASE("keyword counts equal an independent full scan") {
  SynthConfig cfg;
  cfg.n_accounts = 50;
  cfg.n_campaigns = 30;
  cfg.noise_posts = 100;
  cfg.keyword_campaign_fraction = 0.5;
  cfg.seed = 1234;
  cfg.compute_cosine_floor = false;
  SynthOutput synth = generate(cfg);
  auto [emb, estats] = embed_posts(synth.posts, {.dim = 64});
  ClusterSet cs = dbscan(emb, {.eps = 0.8});

  KeywordReport rep = keyword_surface(cs, synth.posts, synth.keywords);
  for (const KeywordHit& hit : rep.hits) {
    // independent recount: scan every clustered post's normalized text
    std::set<std::string> clustered;
    for (const Cluster& c : cs.clusters)
      for (const std::string& id : c.member_ids) clustered.insert(id);
    size_t count = 0;
    for (const Post& p : synth.posts.posts) {
      if (!clustered.count(p.id)) continue;
      std::string folded = normalize_text(p.text);
      for (char& ch : folded) ch = static_cast<char>(std::tolower(ch));
      std::string needle = hit.keyword;
      for (char& ch : needle) ch = static_cast<char>(std::tolower(ch));
      if (folded.find(needle) != std::string::npos) ++count;
    }
    CHECK(hit.matched_posts == count);
  }
}

TEST_CASE("lexicon scorer follows the closed form") {
  TempDir tmp;
  // 0.69314 sits just below ln 2, so a single hit stays just under 0.5
  std::string path = write_text(tmp.file("lexicon.csv"),
                                "sting,insult,0.69314\n"
                                "barb,insult,1.0\n"
                                "jab,insult,1.0\n"
                                "menace,threat,2.0\n");
  LexiconScorer scorer = LexiconScorer::load(path);

  SUBCASE("no matched terms scores zero everywhere") {
    ToxicityScores s = scorer.score("completely neutral words");
    for (size_t i = 0; i < kToxicityDimensions.size(); ++i) CHECK(s[i] == 0.0);
  }
  SUBCASE("a weight just below ln 2 lands just under 0.5 and stays unlabeled") {
    ToxicityScores s = scorer.score("a sting remark");
    CHECK(s[4] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(s[4] < 0.5);  // 1 - e^-0.69314 = 0.499998...
  }
  SUBCASE("two unit weights give 1 - e^-2") {
    ToxicityScores s = scorer.score("barb and jab");
    CHECK(s[4] == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  }
  SUBCASE("matching is token-based and case-folded") {
    CHECK(scorer.score("MENACE approaching")[3] > 0.5);
    CHECK(scorer.score("menacing approach")[3] == 0.0);  // substring is not a token
  }
  SUBCASE("adding a matched term never lowers any score") {
    ToxicityScores base = scorer.score("barb");
    ToxicityScores more = scorer.score("barb jab menace");
    for (size_t i = 0; i < kToxicityDimensions.size(); ++i) CHECK(more[i] >= base[i]);
  }
  SUBCASE("missing lexicon is fatal") {
    CHECK_THROWS_AS(LexiconScorer::load(tmp.file("missing.csv")), DataError);
  }
  SUBCASE("unknown dimension is fatal") {
    std::string bad = write_text(tmp.file("bad.csv"), "term,sarcasm,1.0\n");
    CHECK_THROWS_AS(LexiconScorer::load(bad), DataError);
  }
}

TEST_CASE("score_toxicity labels strictly above the threshold") {
  PostCollection posts;
  posts.posts.push_back({"p1", "a1", 0, "text", {}, false, "en"});
  posts.posts.push_back({"p2", "a2", 0, "text", {}, false, "en"});
  ClusterSet cs = one_cluster({"p1", "p2"});

  SUBCASE("insult 0.7 labels, threat 0.2 does not") {
    ToxicityReport rep = score_toxicity(cs, posts, [](const std::string&) {
      ToxicityScores s;
      s[4] = 0.7;  // insult
      s[3] = 0.2;  // threat
      return s;
    });
    REQUIRE(rep.per_cluster.size() == 1);
    CHECK(rep.per_cluster[0].labels == std::vector<std::string>{"insult"});
    CHECK(rep.label_counts.at("insult")[0] == 1);
    CHECK(rep.label_counts.at("threat")[0] == 0);
  }
  SUBCASE("scores exactly 0.5 stay unlabeled") {
    ToxicityReport rep = score_toxicity(cs, posts, [](const std::string&) {
      ToxicityScores s;
      for (size_t i = 0; i < kToxicityDimensions.size(); ++i) s[i] = 0.5;
      return s;
    });
    CHECK(rep.per_cluster[0].labels.empty());
  }
  SUBCASE("scorer failure marks the cluster unscored") {
    ToxicityReport rep = score_toxicity(
        cs, posts, [](const std::string&) -> std::optional<ToxicityScores> { return std::nullopt; });
    CHECK(rep.per_cluster.empty());
    CHECK(rep.unscored == 1);
  }
  SUBCASE("representative choice is seeded") {
    ToxicityReport r1 = score_toxicity(cs, posts,
                                       [](const std::string&) { return ToxicityScores{}; },
                                       nullptr, 0.5, 7);
    ToxicityReport r2 = score_toxicity(cs, posts,
                                       [](const std::string&) { return ToxicityScores{}; },
                                       nullptr, 0.5, 7);
    CHECK(r1.per_cluster[0].representative == r2.per_cluster[0].representative);
  }
  SUBCASE("party attribution counts member accounts") {
    std::map<std::string, Party> parties = {{"a1", Party::BJP}};
    ToxicityReport rep = score_toxicity(cs, posts,
                                        [](const std::string&) {
                                          ToxicityScores s;
                                          s[0] = 0.9;
                                          return s;
                                        },
                                        &parties);
    CHECK(rep.label_counts.at("toxicity")[0] == 1);
    CHECK(rep.label_counts.at("toxicity")[1] == 1);  // BJP
    CHECK(rep.label_counts.at("toxicity")[2] == 0);  // INC
  }
}

TEST_CASE("planted profane campaign gets the profanity label") {
  SynthConfig cfg;
  cfg.n_accounts = 30;
  cfg.n_campaigns = 20;
  cfg.toxic_campaign_fraction = 1.0;  // every campaign carries trigger terms
  cfg.noise_posts = 0;
  cfg.seed = 3921;
  cfg.compute_cosine_floor = false;
  SynthOutput synth = generate(cfg);

  TempDir tmp;
  std::string lex = write_text(tmp.file("lexicon.csv"), builtin_lexicon_csv());
  LexiconScorer scorer = LexiconScorer::load(lex);

  // truth campaigns as clusters
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [post, campaign] : synth.truth.post_campaign)
    if (!campaign.empty()) groups[campaign].push_back(post);
  ClusterSet cs;
  int next = 0;
  for (auto& [campaign, members] : groups) {
    Cluster c;
    c.id = next++;
    std::sort(members.begin(), members.end());
    c.member_ids = members;
    cs.clusters.push_back(c);
  }

  ToxicityReport rep = score_toxicity(cs, synth.posts,
                                      [&](const std::string& text) { return scorer.score(text); });
  CHECK(rep.unscored == 0);
  size_t labeled = 0;
  for (const ClusterToxicity& ct : rep.per_cluster) labeled += !ct.labels.empty();
  CHECK(labeled == rep.per_cluster.size());  // every toxic campaign trips some dimension
}

TEST_CASE("match_specious applies host and suffix rules") {
  std::set<std::string> domains = {"fake.example"};
  auto post_with = [](const std::string& id, const std::string& url) {
    return Post{id, "acc_" + id, 0, "text", {url}, false, "en"};
  };

  PostCollection posts;
  posts.posts.push_back(post_with("p1", "https://www.fake.example/story?1"));
  posts.posts.push_back(post_with("p2", "https://notfake.example"));
  posts.posts.push_back(post_with("p3", "https://cdn.fake.example/x"));
  posts.posts.push_back(post_with("p4", "http://fake.example:8080/y"));
  posts.posts.push_back(post_with("p5", "::::not a url::::"));

  SpeciousReport rep = match_specious(posts, domains);
  CHECK(rep.n_flagged == 3);
  CHECK(rep.flagged_posts == std::vector<std::string>{"p1", "p3", "p4"});
  CHECK(rep.unparseable_urls == 1);
  CHECK(rep.n_accounts == 3);

  SUBCASE("url_host handles the usual shapes") {
    CHECK(url_host("https://www.Fake.Example/a").value() == "fake.example");
    CHECK(url_host("fake.example/path").value() == "fake.example");
    CHECK_FALSE(url_host("https:///nohost").has_value());
    CHECK_FALSE(url_host("").has_value());
  }
  SUBCASE("flagging under a domain union equals the union of flags") {
    std::set<std::string> d1 = {"fake.example"}, d2 = {"notfake.example"};
    std::set<std::string> both = {"fake.example", "notfake.example"};
    auto r1 = match_specious(posts, d1);
    auto r2 = match_specious(posts, d2);
    auto ru = match_specious(posts, both);
    std::set<std::string> expected(r1.flagged_posts.begin(), r1.flagged_posts.end());
    expected.insert(r2.flagged_posts.begin(), r2.flagged_posts.end());
    CHECK(std::set<std::string>(ru.flagged_posts.begin(), ru.flagged_posts.end()) == expected);
  }
  SUBCASE("repeat runs are identical (idempotence)") {
    auto again = match_specious(posts, domains);
    CHECK(again.flagged_posts == rep.flagged_posts);
  }
  SUBCASE("cluster and party rollups") {
    ClusterSet cs = one_cluster({"p1", "p2"});
    std::map<std::string, Party> parties = {{"acc_p1", Party::BJP}, {"acc_p3", Party::INC}};
    auto r = match_specious(posts, domains, &cs, &parties);
    CHECK(r.n_clusters == 1);
    CHECK(r.posts_by_party.at("BJP") == 1);
    CHECK(r.posts_by_party.at("INC") == 1);
  }
}

TEST_CASE("specious_timeline buckets by UTC day") {
  PostCollection posts;
  auto at = [](const std::string& id, const std::string& ts) {
    return Post{id, "a", parse_timestamp(ts).value(), "t", {}, false, "en"};
  };
  posts.posts.push_back(at("p1", "2023-01-05T10:00:00Z"));
  posts.posts.push_back(at("p2", "2023-01-05T23:59:59Z"));
  posts.posts.push_back(at("p3", "2023-01-05T00:00:00Z"));
  posts.posts.push_back(at("p4", "2023-03-01T00:00:00Z"));  // outside range

  TimelineReport rep = specious_timeline(posts, {"p1", "p2", "p3", "p4"}, "2023-01-01",
                                         "2023-02-15");
  CHECK(rep.counts.size() == 46);
  CHECK(rep.counts[4] == 3);  // Jan 5
  CHECK(rep.total == 3);
  CHECK(rep.mean_per_day == doctest::Approx(3.0 / 46.0));
  size_t sum = 0;
  for (size_t c : rep.counts) sum += c;
  CHECK(sum == rep.total);  // conservation

  SUBCASE("unflagged posts are ignored") {
    TimelineReport r2 = specious_timeline(posts, {"p1"}, "2023-01-01", "2023-02-15");
    CHECK(r2.total == 1);
  }
  SUBCASE("inverted range is an error") {
    CHECK_THROWS_AS(specious_timeline(posts, {}, "2023-02-15", "2023-01-01"), DataError);
  }
  SUBCASE("bad date is an error") {
    CHECK_THROWS_AS(specious_timeline(posts, {}, "2023/01/01", "2023-02-15"), DataError);
  }
}

TEST_CASE("timeline matches the generator's planted histogram exactly") {
  SynthConfig cfg;
  cfg.n_accounts = 60;
  cfg.n_campaigns = 25;
  cfg.noise_posts = 200;
  cfg.specious_link_rate = 0.15;
  cfg.seed = 777;
  cfg.compute_cosine_floor = false;
  SynthOutput synth = generate(cfg);

  std::set<std::string> domains(synth.specious_domains.begin(), synth.specious_domains.end());
  SpeciousReport spec = match_specious(synth.posts, domains);
  CHECK(spec.flagged_posts == synth.truth.specious_posts);

  TimelineReport timeline =
      specious_timeline(synth.posts, spec.flagged_posts, "2023-01-01", "2023-02-14");
  for (size_t i = 0; i < timeline.counts.size(); ++i) {
    std::string date = format_date(timeline.day_from + static_cast<std::int64_t>(i));
    auto it = synth.truth.specious_daily.find(date);
    size_t expected = it == synth.truth.specious_daily.end() ? 0 : it->second;
    CHECK(timeline.counts[i] == expected);
  }
}
