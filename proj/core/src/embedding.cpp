// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/embedding.hpp"

#include <cmath>
#include <sstream>

#include "dupscan/io_util.hpp"
#include "json.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace dupscan {

namespace {

using nlohmann::json;

// splitmix64; stable across platforms, unlike std::hash.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_gram(const char32_t* gram, size_t n, std::uint64_t seed) {
  std::uint64_t h = mix64(seed ^ 0x7ea7u);
  for (size_t i = 0; i < n; ++i) h = mix64(h ^ static_cast<std::uint64_t>(gram[i]));
  return h;
}

#if defined(__AVX2__)
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}
#endif

}  // namespace

void EmbeddingSet::add(const std::string& row_id, std::span<const double> v) {
  if (dim == 0) dim = static_cast<int>(v.size());
  if (static_cast<int>(v.size()) != dim)
    throw DataError("embedding dimension mismatch: got " + std::to_string(v.size()) +
                    ", expected " + std::to_string(dim));
  for (double c : v)
    if (!(c >= -1.0 && c <= 1.0))
      throw DataError("embedding component outside [-1,1] for id " + row_id);
  if (!index.emplace(row_id, ids.size()).second)
    throw DataError("duplicate embedding id " + row_id);
  ids.push_back(row_id);
  data.insert(data.end(), v.begin(), v.end());
}

std::pair<EmbeddingSet, EmbedLoadStats> load_embeddings(const std::string& path) {
  EmbeddingSet set;
  EmbedLoadStats stats;
  std::vector<std::string> lines = read_lines(path);
  std::vector<double> row;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    json j = json::parse(lines[i], nullptr, false);
    std::string why;
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("v") || !j["v"].is_array()) {
      why = "expected {\"id\", \"v\"}";
    }
    if (why.empty()) {
      row.clear();
      for (const auto& c : j["v"]) {
        if (!c.is_number()) {
          why = "non-numeric component";
          break;
        }
        row.push_back(c.get<double>());
      }
    }
    if (why.empty() && set.dim != 0 && static_cast<int>(row.size()) != set.dim)
      throw DataError(path + ":" + std::to_string(i + 1) + ": dimension " +
                      std::to_string(row.size()) + " inconsistent with " +
                      std::to_string(set.dim));
    if (why.empty()) {
      for (double c : row)
        if (!(c >= -1.0 && c <= 1.0)) {
          why = "component outside [-1,1]";
          break;
        }
    }
    if (why.empty() && set.index.count(j["id"].get<std::string>())) why = "duplicate id";
    if (!why.empty()) {
      ++stats.rejected;
      log_warn("embedding_rejected", path + ":" + std::to_string(i + 1) + " " + why);
      continue;
    }
    set.add(j["id"].get<std::string>(), row);
    ++stats.loaded;
  }
  return {std::move(set), stats};
}

void save_embeddings(const EmbeddingSet& set, const std::string& path) {
  std::ostringstream ss;
  for (size_t r = 0; r < set.size(); ++r) {
    json j;
    j["id"] = set.id(r);
    auto v = set.vec(r);
    j["v"] = std::vector<double>(v.begin(), v.end());
    ss << j.dump() << "\n";
  }
  write_file(path, ss.str());
}

std::vector<double> hashed_ngram_embed(std::string_view normalized_text,
                                       const HashedNgramParams& params) {
  std::vector<double> acc(static_cast<size_t>(params.dim), 0.0);
  std::u32string cps = utf8_decode(normalized_text);
  if (cps.empty()) return acc;  // zero vector: un-embeddable

  auto accumulate = [&](const char32_t* gram, size_t n) {
    std::uint64_t h = hash_gram(gram, n, params.seed);
    size_t bucket = static_cast<size_t>(h % static_cast<std::uint64_t>(params.dim));
    acc[bucket] += (h >> 63) ? -1.0 : 1.0;
  };

  const size_t len = cps.size();
  if (len < static_cast<size_t>(params.n_lo)) {
    accumulate(cps.data(), len);
  } else {
    for (int n = params.n_lo; n <= params.n_hi && static_cast<size_t>(n) <= len; ++n)
      for (size_t i = 0; i + n <= len; ++i) accumulate(cps.data() + i, n);
  }

  double norm2 = 0.0;
  for (double c : acc) norm2 += c * c;
  if (norm2 == 0.0) {
    // signed buckets cancelled out; re-hash with a tweaked seed so non-empty
    // text always embeds
    HashedNgramParams retry = params;
    retry.seed = mix64(params.seed ^ 0xdecafULL);
    return hashed_ngram_embed(normalized_text, retry);
  }
  double inv = 1.0 / std::sqrt(norm2);
  for (double& c : acc) c *= inv;
  return acc;
}

std::pair<EmbeddingSet, EmbedStats> embed_posts(const PostCollection& posts,
                                                const HashedNgramParams& params) {
  EmbeddingSet set;
  set.dim = params.dim;
  EmbedStats stats;
  for (const Post& p : posts.posts) {
    std::string norm = normalize_text(p.text);
    if (norm.empty()) {
      ++stats.unembeddable;
      log_warn("post_unembeddable", p.id);
      continue;
    }
    set.add(p.id, hashed_ngram_embed(norm, params));
    ++stats.embedded;
  }
  return {std::move(set), stats};
}

double squared_distance_bounded(const double* u, const double* v, size_t d, double bound) {
  size_t k = 0;
  double acc = 0.0;
#if defined(__AVX2__)
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  __m256d a3 = _mm256_setzero_pd();
  while (k + 16 <= d) {
    __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(u + k), _mm256_loadu_pd(v + k));
    __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(u + k + 4), _mm256_loadu_pd(v + k + 4));
    __m256d d2 = _mm256_sub_pd(_mm256_loadu_pd(u + k + 8), _mm256_loadu_pd(v + k + 8));
    __m256d d3 = _mm256_sub_pd(_mm256_loadu_pd(u + k + 12), _mm256_loadu_pd(v + k + 12));
#if defined(__FMA__)
    a0 = _mm256_fmadd_pd(d0, d0, a0);
    a1 = _mm256_fmadd_pd(d1, d1, a1);
    a2 = _mm256_fmadd_pd(d2, d2, a2);
    a3 = _mm256_fmadd_pd(d3, d3, a3);
#else
    a0 = _mm256_add_pd(a0, _mm256_mul_pd(d0, d0));
    a1 = _mm256_add_pd(a1, _mm256_mul_pd(d1, d1));
    a2 = _mm256_add_pd(a2, _mm256_mul_pd(d2, d2));
    a3 = _mm256_add_pd(a3, _mm256_mul_pd(d3, d3));
#endif
    k += 16;
    double partial = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
    if (partial > bound) return partial;
  }
  acc = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
#else
  while (k + 8 <= d) {
    double s = 0.0;
    for (size_t j = k; j < k + 8; ++j) {
      double t = u[j] - v[j];
      s += t * t;
    }
    acc += s;
    k += 8;
    if (acc > bound) return acc;
  }
#endif
  for (; k < d; ++k) {
    double t = u[k] - v[k];
    acc += t * t;
  }
  return acc;
}

double euclidean(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw DataError("euclidean: dimension mismatch " + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()));
  double acc = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    double t = u[i] - v[i];
    acc += t * t;
  }
  return std::sqrt(acc);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw DataError("cosine: dimension mismatch " + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()));
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace dupscan
