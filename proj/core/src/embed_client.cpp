// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/embed_client.hpp"

#include <chrono>
#include <thread>

#include "dupscan/io_util.hpp"
#include "httplib.h"
#include "json.hpp"

namespace dupscan {

namespace {

using nlohmann::json;

struct Endpoint {
  std::string host_port;  // scheme://host:port for httplib::Client
  std::string path;
};

Endpoint parse_endpoint(const std::string& url) {
  if (url.rfind("https://", 0) == 0)
    throw DataError("embed client supports http endpoints only: " + url);
  if (url.rfind("http://", 0) != 0) throw DataError("bad endpoint url: " + url);
  size_t path_at = url.find('/', 7);
  if (path_at == std::string::npos) return {url, "/"};
  return {url.substr(0, path_at), url.substr(path_at)};
}

}  // namespace

std::pair<EmbeddingSet, EmbedStats> fetch_embeddings(const PostCollection& posts,
                                                     const EmbedServiceConfig& config,
                                                     const std::string& checkpoint_path) {
  if (config.batch_size == 0) throw DataError("fetch_embeddings: batch_size must be >= 1");
  Endpoint ep = parse_endpoint(config.endpoint);
  httplib::Client client(ep.host_port);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);

  EmbeddingSet set;
  EmbedStats stats;

  std::vector<const Post*> embeddable;
  std::vector<std::string> normalized;
  for (const Post& p : posts.posts) {
    std::string norm = normalize_text(p.text);
    if (norm.empty()) {
      ++stats.unembeddable;
      log_warn("post_unembeddable", p.id);
      continue;
    }
    embeddable.push_back(&p);
    normalized.push_back(std::move(norm));
  }

  auto checkpoint_and_fail = [&](const std::string& why) {
    if (!checkpoint_path.empty() && !set.empty()) {
      save_embeddings(set, checkpoint_path);
      log_warn("embed_checkpoint", checkpoint_path + " (" + std::to_string(set.size()) + " rows)");
    }
    throw DataError("fetch_embeddings: " + why);
  };

  for (size_t begin = 0; begin < embeddable.size(); begin += config.batch_size) {
    const size_t end = std::min(embeddable.size(), begin + config.batch_size);
    json req;
    req["texts"] = json::array();
    for (size_t i = begin; i < end; ++i) req["texts"].push_back(normalized[i]);
    const std::string body = req.dump();

    json vectors;
    bool ok = false;
    int delay = config.backoff_ms;
    for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
      httplib::Headers headers;
      if (!config.api_key.empty()) headers.emplace("Authorization", "Bearer " + config.api_key);
      auto res = client.Post(ep.path, headers, body, "application/json");
      std::string why;
      if (!res)
        why = "no response";
      else if (res->status != 200)
        why = "http " + std::to_string(res->status);
      else {
        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("vectors") || !parsed["vectors"].is_array())
          why = "malformed response";
        else if (parsed["vectors"].size() != end - begin)
          why = "wrong vector count: got " + std::to_string(parsed["vectors"].size()) +
                ", want " + std::to_string(end - begin);
        else {
          vectors = std::move(parsed["vectors"]);
          ok = true;
          break;
        }
      }
      log_warn("embed_batch_retry", "batch at " + std::to_string(begin) + " attempt " +
                                        std::to_string(attempt) + ": " + why);
      if (attempt < config.max_attempts) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        delay *= 2;
      }
    }
    if (!ok)
      checkpoint_and_fail("service failed after " + std::to_string(config.max_attempts) +
                          " attempts at batch offset " + std::to_string(begin));

    for (size_t i = begin; i < end; ++i) {
      const auto& row = vectors[i - begin];
      std::vector<double> v;
      v.reserve(row.size());
      for (const auto& c : row) {
        if (!c.is_number()) checkpoint_and_fail("non-numeric component in response");
        v.push_back(c.get<double>());
      }
      for (double c : v)
        if (!(c >= -1.0 && c <= 1.0)) checkpoint_and_fail("component outside [-1,1] in response");
      if (set.dim != 0 && static_cast<int>(v.size()) != set.dim)
        checkpoint_and_fail("inconsistent dimension in response");
      set.add(embeddable[i]->id, v);
      ++stats.embedded;
    }
  }
  return {std::move(set), stats};
}

}  // namespace dupscan
