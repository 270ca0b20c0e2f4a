// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <string>

#include "dupscan/embedding.hpp"

namespace dupscan {

struct EmbedServiceConfig {
  std::string endpoint;   // http://host[:port][/path]
  std::string api_key;    // sent as Authorization: Bearer <key>
  size_t batch_size = 64;
  int max_attempts = 3;
  int backoff_ms = 250;   // doubled after each failed attempt
};

/// Fetches embeddings from a service speaking request {"texts": [str]} ->
/// response {"vectors": [[real]]}, order-preserving per batch. A batch
/// returning the wrong vector count is rejected and retried. After
/// max_attempts failures the completed batches are written to
/// checkpoint_path and a DataError is thrown.
std::pair<EmbeddingSet, EmbedStats> fetch_embeddings(const PostCollection& posts,
                                                     const EmbedServiceConfig& config,
                                                     const std::string& checkpoint_path);

}  // namespace dupscan
