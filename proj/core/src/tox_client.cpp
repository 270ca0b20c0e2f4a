// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/tox_client.hpp"

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "dupscan/io_util.hpp"
#include "httplib.h"
#include "json.hpp"

namespace dupscan {

namespace {

using nlohmann::json;

// attribute names on the wire, aligned with kToxicityDimensions
constexpr std::array<const char*, 6> kWireAttributes = {
    "TOXICITY", "SEVERE_TOXICITY", "IDENTITY_ATTACK", "THREAT", "INSULT", "PROFANITY"};

class Semaphore {
 public:
  explicit Semaphore(int n) : count_(n) {}
  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [this] { return count_ > 0; });
    --count_;
  }
  void release() {
    {
      std::lock_guard lock(mu_);
      ++count_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int count_;
};

}  // namespace

struct ToxicityServiceClient::Impl {
  ToxServiceConfig config;
  std::string host_port;
  std::string path;
  mutable Semaphore in_flight;

  explicit Impl(ToxServiceConfig cfg)
      : config(std::move(cfg)), in_flight(std::max(1, config.max_in_flight)) {
    if (config.endpoint.rfind("https://", 0) == 0)
      throw DataError("toxicity client supports http endpoints only: " + config.endpoint);
    if (config.endpoint.rfind("http://", 0) != 0)
      throw DataError("bad endpoint url: " + config.endpoint);
    size_t path_at = config.endpoint.find('/', 7);
    host_port = path_at == std::string::npos ? config.endpoint : config.endpoint.substr(0, path_at);
    path = path_at == std::string::npos ? "/" : config.endpoint.substr(path_at);
  }
};

ToxicityServiceClient::ToxicityServiceClient(ToxServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

ToxicityServiceClient::~ToxicityServiceClient() = default;

std::optional<ToxicityScores> ToxicityServiceClient::score(const std::string& text) const {
  json req;
  req["comment"]["text"] = text;
  for (const char* attr : kWireAttributes) req["requestedAttributes"][attr] = json::object();
  const std::string body = req.dump();

  impl_->in_flight.acquire();
  struct Release {
    Semaphore& s;
    ~Release() { s.release(); }
  } release{impl_->in_flight};

  httplib::Client client(impl_->host_port);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);

  int delay = impl_->config.backoff_ms;
  for (int attempt = 1; attempt <= impl_->config.max_attempts; ++attempt) {
    httplib::Headers headers;
    if (!impl_->config.api_key.empty())
      headers.emplace("Authorization", "Bearer " + impl_->config.api_key);
    auto res = client.Post(impl_->path, headers, body, "application/json");

    int wait_ms = delay;
    std::string why;
    if (!res) {
      why = "no response";
    } else if (res->status == 429) {
      why = "rate limited";
      if (res->has_header("Retry-After")) {
        try {
          wait_ms = std::stoi(res->get_header_value("Retry-After")) * 1000;
        } catch (...) {
        }
      }
    } else if (res->status != 200) {
      why = "http " + std::to_string(res->status);
    } else {
      json parsed = json::parse(res->body, nullptr, false);
      if (!parsed.is_discarded() && parsed.contains("attributeScores")) {
        ToxicityScores scores;
        bool complete = true;
        for (size_t i = 0; i < kWireAttributes.size(); ++i) {
          const auto& attrs = parsed["attributeScores"];
          if (!attrs.contains(kWireAttributes[i]) ||
              !attrs[kWireAttributes[i]].contains("summaryScore") ||
              !attrs[kWireAttributes[i]]["summaryScore"].contains("value") ||
              !attrs[kWireAttributes[i]]["summaryScore"]["value"].is_number()) {
            complete = false;
            break;
          }
          double v = attrs[kWireAttributes[i]]["summaryScore"]["value"].get<double>();
          if (!(v >= 0.0 && v <= 1.0)) {
            complete = false;
            break;
          }
          scores[i] = v;
        }
        if (complete) return scores;
      }
      why = "malformed response";
    }

    log_warn("tox_retry", "attempt " + std::to_string(attempt) + ": " + why);
    if (attempt < impl_->config.max_attempts) {
      std::this_thread::sleep_for(std::chrono::milliseconds(wait_ms));
      delay *= 2;
    }
  }
  return std::nullopt;
}

ToxicityScorer ToxicityServiceClient::scorer() const {
  return [this](const std::string& text) { return score(text); };
}

}  // namespace dupscan
