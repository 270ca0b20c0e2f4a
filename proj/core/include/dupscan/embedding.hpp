// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dupscan/corpus.hpp"

namespace dupscan {

/// Fixed-dimension per-post vectors, components in [-1, 1], uniform dim.
struct EmbeddingSet {
  int dim = 0;
  std::vector<std::string> ids;   // one per row
  std::vector<double> data;       // row-major, ids.size() x dim
  std::unordered_map<std::string, size_t> index;

  size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  std::span<const double> vec(size_t row) const {
    return {data.data() + row * static_cast<size_t>(dim), static_cast<size_t>(dim)};
  }
  const std::string& id(size_t row) const { return ids[row]; }

  /// Appends a row. Throws DataError on dim mismatch, out-of-range component,
  /// or duplicate id.
  void add(const std::string& id, std::span<const double> v);
};

struct EmbedLoadStats {
  size_t loaded = 0;
  size_t rejected = 0;  // out-of-range component or duplicate id
};

/// JSONL rows {"id": str, "v": [real; d]} with uniform d. A component outside
/// [-1,1] rejects the row; an inconsistent dimension is fatal (DataError).
std::pair<EmbeddingSet, EmbedLoadStats> load_embeddings(const std::string& path);
void save_embeddings(const EmbeddingSet& set, const std::string& path);

// --- fallback embedder --------------------------------------------------------
// Deterministic character n-gram feature hashing with signed buckets, scaled
// to unit Euclidean norm. Lets the whole pipeline run without an external
// embedding model.

struct HashedNgramParams {
  int dim = 384;
  int n_lo = 3;
  int n_hi = 5;
  std::uint64_t seed = 0x5eed;
};

/// Pure function of (text, params). Empty text yields the zero vector, which
/// callers must treat as un-embeddable. Texts shorter than n_lo codepoints
/// hash as a single whole-text gram.
std::vector<double> hashed_ngram_embed(std::string_view normalized_text,
                                       const HashedNgramParams& params);

struct EmbedStats {
  size_t embedded = 0;
  size_t unembeddable = 0;  // empty after normalization, excluded
};

/// Normalizes each post's text and embeds it with hashed_ngram_embed.
std::pair<EmbeddingSet, EmbedStats> embed_posts(const PostCollection& posts,
                                                const HashedNgramParams& params);

// --- distances ----------------------------------------------------------------

/// Throws DataError on dimension mismatch.
double euclidean(std::span<const double> u, std::span<const double> v);

/// Returns NaN for a zero-norm input. Throws DataError on dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

/// Squared Euclidean distance with early exit once the partial sum exceeds
/// `bound`. Exact for the comparison d2 <= bound (partial sums of squares are
/// monotone). Vectorized when AVX2 is available.
double squared_distance_bounded(const double* u, const double* v, size_t d, double bound);

}  // namespace dupscan
