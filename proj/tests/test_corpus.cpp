// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/corpus.hpp"

#include <random>

#include "doctest.h"
#include "dupscan/io_util.hpp"
#include "support/test_util.hpp"

using namespace dupscan;
using testutil::TempDir;
using testutil::write_text;

TEST_CASE("timestamps parse and format strictly") {
  CHECK(parse_timestamp("2023-01-15T12:30:45Z").value() == 1673785845);
  CHECK(format_timestamp(1673785845) == "2023-01-15T12:30:45Z");
  CHECK_FALSE(parse_timestamp("2023-01-15 12:30:45").has_value());
  CHECK_FALSE(parse_timestamp("2023-13-01T00:00:00Z").has_value());
  CHECK_FALSE(parse_timestamp("2023-02-29T00:00:00Z").has_value());
  CHECK(parse_timestamp("2024-02-29T00:00:00Z").has_value());  // leap year
  CHECK_FALSE(parse_timestamp("1969-12-31T23:59:59Z").has_value());
  CHECK_FALSE(parse_timestamp("2100-01-01T00:00:00Z").has_value());
  CHECK(parse_timestamp("2099-12-31T23:59:59Z").has_value());

  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    std::int64_t t = static_cast<std::int64_t>(rng() % kTimestampMax);
    CHECK(parse_timestamp(format_timestamp(t)).value() == t);
  }
}

TEST_CASE("normalize_text removes urls and mentions, strips hashtag marks") {
  CHECK(normalize_text("Check @user https://t.co/abc now") == "Check now");
  CHECK(normalize_text("#boycott trending") == "boycott trending");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("bare t.co/xyz link") == "bare link");
  CHECK(normalize_text("http://example.com/x rest") == "rest");
  CHECK(normalize_text("  spaced\t\tout  ") == "spaced out");
  CHECK(normalize_text("keep docs.example.com/path text") == "keep docs.example.com/path text");
}

TEST_CASE("normalize_text is idempotent, including on cascading patterns") {
  // mention removal exposes a bare t.co path; the fixpoint pass removes it
  std::string tricky = "t@x.co/abc stays?";
  std::string once = normalize_text(tricky);
  CHECK(once == normalize_text(once));
  CHECK(normalize_text("##tag") == normalize_text(normalize_text("##tag")));

  std::mt19937_64 rng(7);
  const std::string alphabet = "ab #@/:.tco hxyz\t";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const size_t len = rng() % 40;
    for (size_t k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
    std::string n1 = normalize_text(s);
    CHECK(n1 == normalize_text(n1));
  }
}

TEST_CASE("normalize_text applies NFC") {
  // e + combining acute composes to the precomposed form
  std::string decomposed = "caf\x65\xcc\x81";
  CHECK(normalize_text(decomposed) == "caf\xc3\xa9");
}

TEST_CASE("unique_word_count case-folds and deduplicates") {
  CHECK(unique_word_count("a b a c") == 3);
  CHECK(unique_word_count("A a") == 1);
  CHECK(unique_word_count("") == 0);
  CHECK(unique_word_count("ok ok ok ok") == 1);
}

TEST_CASE("detect_lang script heuristic") {
  CHECK(detect_lang("plain english words here") == "en");
  CHECK(detect_lang("नमस्ते दुनिया") == "hi");
  CHECK(detect_lang("12345 67890 ...") == "");
  CHECK(detect_lang("") == "");
}

TEST_CASE("load_posts jsonl keeps well-formed rows and counts skips") {
  TempDir tmp;
  std::string path = write_text(
      tmp.file("posts.jsonl"),
      R"({"id":"p1","account_id":"a1","timestamp":"2023-01-01T00:00:00Z","text":"one two three four"})"
      "\n"
      R"({"id":"p2","account_id":"a1","timestamp":"2023-01-01T00:00:01Z","text":"hello","urls":["https://x.example/a"],"is_retweet":true,"lang":"en"})"
      "\n"
      R"({"id":"p3","account_id":"a2","timestamp":"2023-01-01T00:00:02Z","text":"third"})"
      "\n");
  auto [posts, stats] = load_posts(path, PostFormat::Jsonl);
  CHECK(posts.size() == 3);
  CHECK(stats.loaded == 3);
  CHECK(stats.skipped == 0);
  CHECK(posts.posts[1].urls.size() == 1);
  CHECK(posts.posts[1].is_retweet);
  CHECK(posts.posts[1].lang == "en");

  SUBCASE("missing text field skips the record") {
    std::string bad = write_text(
        tmp.file("bad.jsonl"),
        R"({"id":"p1","account_id":"a1","timestamp":"2023-01-01T00:00:00Z","text":"ok"})"
        "\n"
        R"({"id":"p2","account_id":"a1","timestamp":"2023-01-01T00:00:01Z","text":"ok"})"
        "\n"
        R"({"id":"p3","account_id":"a1","timestamp":"2023-01-01T00:00:02Z"})"
        "\n");
    auto [loaded, s] = load_posts(bad, PostFormat::Jsonl);
    CHECK(loaded.size() == 2);
    CHECK(s.skipped == 1);
  }
  SUBCASE("empty file loads an empty collection") {
    std::string empty = write_text(tmp.file("empty.jsonl"), "");
    auto [loaded, s] = load_posts(empty, PostFormat::Jsonl);
    CHECK(loaded.empty());
    CHECK(s.skipped == 0);
  }
  SUBCASE("duplicate ids are skipped") {
    std::string dup = write_text(
        tmp.file("dup.jsonl"),
        R"({"id":"p1","account_id":"a1","timestamp":"2023-01-01T00:00:00Z","text":"ok"})"
        "\n"
        R"({"id":"p1","account_id":"a1","timestamp":"2023-01-01T00:00:01Z","text":"again"})"
        "\n");
    auto [loaded, s] = load_posts(dup, PostFormat::Jsonl);
    CHECK(loaded.size() == 1);
    CHECK(s.skipped == 1);
  }
  SUBCASE("unreadable file is fatal") {
    CHECK_THROWS_AS(load_posts(tmp.file("missing.jsonl"), PostFormat::Jsonl), DataError);
  }
}

TEST_CASE("load_posts csv") {
  TempDir tmp;
  std::string path = write_text(tmp.file("posts.csv"),
                                "id,account_id,timestamp,text,urls,is_retweet,lang\n"
                                "p1,a1,2023-01-01T00:00:00Z,\"hello, world\",,false,en\n"
                                "p2,a2,2023-01-01T00:00:01Z,two,https://x.example/a,true,\n"
                                "p3,a2,not-a-time,bad,,false,\n");
  auto [posts, stats] = load_posts(path, PostFormat::Csv);
  CHECK(posts.size() == 2);
  CHECK(stats.skipped == 1);
  CHECK(posts.posts[0].text == "hello, world");
  CHECK(posts.posts[1].urls.size() == 1);
}

TEST_CASE("posts jsonl round-trips") {
  TempDir tmp;
  PostCollection posts;
  posts.posts.push_back({"p1", "a1", 1672531200, "some text", {"https://a.example/x"}, false, "en"});
  posts.posts.push_back({"p2", "a2", 1672531201, "unicode हि", {}, true, ""});
  save_posts_jsonl(posts, tmp.file("out.jsonl"));
  auto [loaded, stats] = load_posts(tmp.file("out.jsonl"), PostFormat::Jsonl);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded.posts[0].text == "some text");
  CHECK(loaded.posts[1].text == "unicode हि");
  CHECK(loaded.posts[1].is_retweet);
  CHECK(loaded.posts[1].lang.empty());
}

TEST_CASE("filter_posts applies the noise rules and conserves counts") {
  FilterConfig cfg;  // defaults: en/hi, 4 unique words, drop retweets
  PostCollection posts;
  posts.posts.push_back({"p1", "a1", 0, "one two three four", {}, true, "en"});   // retweet
  posts.posts.push_back({"p2", "a1", 0, "un deux trois quatre", {}, false, "fr"});  // language
  posts.posts.push_back({"p3", "a1", 0, "ok ok ok ok", {}, false, "en"});         // 1 unique word
  posts.posts.push_back({"p4", "a1", 0, "perfectly fine post here", {}, false, "en"});
  posts.posts.push_back({"p5", "a1", 0, "also fine text with words", {}, false, ""});  // en detected

  auto [kept, stats] = filter_posts(posts, cfg);
  CHECK(stats.input == 5);
  CHECK(stats.dropped_retweet == 1);
  CHECK(stats.dropped_language == 1);
  CHECK(stats.dropped_short == 1);
  CHECK(stats.kept == 2);
  CHECK(stats.kept + stats.dropped_retweet + stats.dropped_language + stats.dropped_short ==
        stats.input);
  REQUIRE(kept.size() == 2);
  CHECK(kept.posts[0].id == "p4");  // order preserved
  CHECK(kept.posts[1].id == "p5");

  SUBCASE("filtering is idempotent") {
    auto [again, stats2] = filter_posts(kept, cfg);
    CHECK(again.size() == kept.size());
    CHECK(stats2.dropped_retweet == 0);
    CHECK(stats2.dropped_language == 0);
    CHECK(stats2.dropped_short == 0);
  }
}

TEST_CASE("unique-word rule counts after normalization") {
  // url and mention tokens do not count as words
  FilterConfig cfg;
  PostCollection posts;
  posts.posts.push_back({"p1", "a1", 0, "a b c @user https://t.co/x", {}, false, "en"});
  auto [kept, stats] = filter_posts(posts, cfg);
  CHECK(kept.empty());  // only 3 unique words after normalization
  CHECK(stats.dropped_short == 1);
}

TEST_CASE("aux loaders parse, deduplicate, and warn") {
  TempDir tmp;
  SUBCASE("accounts") {
    std::string path = write_text(tmp.file("accounts.csv"),
                                  "id,handle,verified,cap,rbs,party\n"
                                  "a1,alpha,true,0.95,0.97,BJP\n"
                                  "a2,beta,false,,,\n"
                                  "a3,gamma,false,1.5,0.2,\n"   // cap out of range
                                  "a2,delta,false,,,INC\n");    // duplicate id
    auto [accounts, stats] = load_accounts(path);
    CHECK(accounts.accounts.size() == 2);
    CHECK(stats.skipped == 2);
    CHECK(accounts.find("a1")->cap.value() == doctest::Approx(0.95));
    CHECK(accounts.find("a1")->party.value() == Party::BJP);
    CHECK_FALSE(accounts.find("a2")->cap.has_value());
  }
  SUBCASE("bot scores") {
    std::string path = write_text(tmp.file("scores.csv"),
                                  "acct1,0.95,0.97\n"
                                  "acct2,0.5,0.4\n"
                                  "acct2,0.6,0.6\n"   // duplicate, first wins
                                  "acct3,1.2,0.4\n");  // out of range
    auto [scores, stats] = load_bot_scores(path);
    CHECK(scores.size() == 2);
    CHECK(scores.at("acct1") == std::make_pair(0.95, 0.97));
    CHECK(scores.at("acct2") == std::make_pair(0.5, 0.4));
    CHECK(stats.skipped == 2);
  }
  SUBCASE("domain list deduplicates") {
    std::string path = write_text(tmp.file("domains.txt"),
                                  "# comment line\n"
                                  "fake.example\n"
                                  "fake.example\n"
                                  "\n"
                                  "Other.Example\n");
    auto [domains, stats] = load_domain_list(path);
    CHECK(domains.size() == 2);
    CHECK(domains.count("fake.example") == 1);
    CHECK(domains.count("other.example") == 1);  // lowercased
    CHECK(stats.skipped == 1);
  }
  SUBCASE("keyword file of 20 lines loads 20 keywords") {
    std::string content;
    for (int i = 0; i < 20; ++i) content += "keyword" + std::to_string(i) + "\n";
    std::string path = write_text(tmp.file("keywords.txt"), content);
    auto [keywords, stats] = load_keywords(path);
    CHECK(keywords.size() == 20);
    CHECK(stats.loaded == 20);
  }
  SUBCASE("party labels") {
    std::string path = write_text(tmp.file("parties.csv"),
                                  "a1,BJP\na2,INC\na3,OTHER\na4,GREEN\n");
    auto [parties, stats] = load_party_labels(path);
    CHECK(parties.size() == 3);
    CHECK(parties.at("a1") == Party::BJP);
    CHECK(stats.skipped == 1);
  }
}
