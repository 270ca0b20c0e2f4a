// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <memory>
#include <string>

#include "dupscan/screening.hpp"

namespace dupscan {

struct ToxServiceConfig {
  std::string endpoint;  // http://host[:port][/path]
  std::string api_key;
  int max_attempts = 3;
  int backoff_ms = 250;
  int max_in_flight = 4;  // concurrent requests across threads
};

/// Client for a toxicity-scoring service with the
/// {"comment":{"text":...},"requestedAttributes":{...}} wire shape. Honors
/// 429 Retry-After, retries transient failures with exponential backoff, and
/// bounds in-flight requests so concurrent callers respect service limits.
class ToxicityServiceClient {
 public:
  explicit ToxicityServiceClient(ToxServiceConfig config);
  ~ToxicityServiceClient();

  ToxicityServiceClient(const ToxicityServiceClient&) = delete;
  ToxicityServiceClient& operator=(const ToxicityServiceClient&) = delete;

  /// nullopt once retries are exhausted; the caller counts it unscored.
  std::optional<ToxicityScores> score(const std::string& text) const;

  /// Adapter for score_toxicity.
  ToxicityScorer scorer() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dupscan
