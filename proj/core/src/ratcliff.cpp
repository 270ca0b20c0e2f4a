// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include "dupscan/ratcliff.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "dupscan/detail/parallel.hpp"
#include "dupscan/io_util.hpp"

namespace dupscan {

namespace {

struct Region {
  size_t alo, ahi, blo, bhi;
};

// Leftmost-longest common substring of a[alo,ahi) x b[blo,bhi): maximal
// length, then smallest start in a, then smallest start in b.
struct Match {
  size_t a = 0, b = 0, len = 0;
};

Match longest_match(const std::u32string& a, const std::u32string& b, const Region& r,
                    std::vector<std::uint32_t>& prev, std::vector<std::uint32_t>& cur) {
  Match best;
  const size_t lb = r.bhi - r.blo;
  prev.assign(lb + 1, 0);
  cur.assign(lb + 1, 0);
  for (size_t i = r.alo; i < r.ahi; ++i) {
    for (size_t j = r.blo; j < r.bhi; ++j) {
      if (a[i] == b[j]) {
        std::uint32_t k = prev[j - r.blo] + 1;
        cur[j - r.blo + 1] = k;
        if (k > best.len) {
          best.len = k;
          best.a = i - k + 1;
          best.b = j - k + 1;
        }
      } else {
        cur[j - r.blo + 1] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

// The leftmost-longest tie break is order-sensitive, so arguments are put in
// canonical (lexicographic) order first; that makes the matched count, and
// hence the similarity, symmetric.
size_t matched_in(const std::u32string& a_in, const std::u32string& b_in) {
  const bool swap = b_in < a_in;
  const std::u32string& a = swap ? b_in : a_in;
  const std::u32string& b = swap ? a_in : b_in;
  size_t total = 0;
  std::vector<Region> stack;
  std::vector<std::uint32_t> prev, cur;
  stack.push_back({0, a.size(), 0, b.size()});
  while (!stack.empty()) {
    Region r = stack.back();
    stack.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    Match m = longest_match(a, b, r, prev, cur);
    if (m.len == 0) continue;
    total += m.len;
    stack.push_back({r.alo, m.a, r.blo, m.b});
    stack.push_back({m.a + m.len, r.ahi, m.b + m.len, r.bhi});
  }
  return total;
}

struct PostFeatures {
  std::u32string text;
  std::unordered_map<char32_t, std::uint32_t> counts;
};

// Cheap upper bound on 2M/(la+lb): matches cannot exceed the multiset
// character intersection.
double similarity_upper_bound(const PostFeatures& x, const PostFeatures& y) {
  const size_t la = x.text.size(), lb = y.text.size();
  if (la + lb == 0) return 1.0;
  const auto& small = x.counts.size() <= y.counts.size() ? x.counts : y.counts;
  const auto& large = x.counts.size() <= y.counts.size() ? y.counts : x.counts;
  std::uint64_t common = 0;
  for (const auto& [c, n] : small) {
    auto it = large.find(c);
    if (it != large.end()) common += std::min(n, it->second);
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(la + lb);
}

}  // namespace

size_t ratcliff_matched(const std::u32string& a, const std::u32string& b) {
  return matched_in(a, b);
}

double ratcliff_obershelp(std::string_view a, std::string_view b) {
  std::u32string ua = utf8_decode(a);
  std::u32string ub = utf8_decode(b);
  const size_t total = ua.size() + ub.size();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(matched_in(ua, ub)) / static_cast<double>(total);
}

DupPairSet ropm_scan(const PostCollection& posts, const RopmParams& params) {
  if (params.window < 1) throw DataError("ropm_scan: window must be >= 1");
  if (!(params.sim_threshold > 0.0 && params.sim_threshold <= 1.0))
    throw DataError("ropm_scan: sim_threshold must be in (0,1]");

  const size_t n = posts.size();
  DupPairSet out;
  if (n == 0) return out;

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    const Post& px = posts.posts[x];
    const Post& py = posts.posts[y];
    if (px.timestamp != py.timestamp) return px.timestamp < py.timestamp;
    return px.id < py.id;
  });

  std::vector<PostFeatures> feats(n);
  detail::parallel_chunks(n, params.threads, [&](int, size_t b, size_t e) {
    for (size_t r = b; r < e; ++r) {
      PostFeatures& f = feats[r];
      f.text = utf8_decode(normalize_text(posts.posts[order[r]].text));
      for (char32_t c : f.text) ++f.counts[c];
    }
  });

  const int width = detail::resolve_threads(params.threads);
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> found(
      static_cast<size_t>(width));
  detail::parallel_chunks(n, params.threads, [&](int chunk, size_t b, size_t e) {
    auto& hits = found[chunk];
    for (size_t i = b; i < e; ++i) {
      const size_t jmax = std::min(n, i + 1 + static_cast<size_t>(params.window));
      for (size_t j = i + 1; j < jmax; ++j) {
        if (similarity_upper_bound(feats[i], feats[j]) < params.sim_threshold) continue;
        const size_t total = feats[i].text.size() + feats[j].text.size();
        double sim = total == 0 ? 1.0
                                : 2.0 * static_cast<double>(matched_in(feats[i].text,
                                                                       feats[j].text)) /
                                      static_cast<double>(total);
        if (sim >= params.sim_threshold)
          hits.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    }
  });

  std::unordered_set<std::uint32_t> dup_rows;
  std::unordered_set<std::string> accounts;
  for (const auto& chunk : found)
    for (auto [i, j] : chunk) {
      const Post& pi = posts.posts[order[i]];
      const Post& pj = posts.posts[order[j]];
      out.pairs.emplace_back(std::min(pi.id, pj.id), std::max(pi.id, pj.id));
      dup_rows.insert(i);
      dup_rows.insert(j);
      accounts.insert(pi.account_id);
      accounts.insert(pj.account_id);
    }
  out.n_dup_posts = dup_rows.size();
  out.n_accounts = accounts.size();
  return out;
}

}  // namespace dupscan
