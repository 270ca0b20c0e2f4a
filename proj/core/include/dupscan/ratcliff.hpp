// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dupscan/corpus.hpp"

namespace dupscan {

/// Ratcliff/Obershelp similarity: 2*M / (|a| + |b|), where M is the total
/// matched character count of the recursive leftmost-longest common-substring
/// decomposition. Operates on codepoints. Both strings empty -> 1.
double ratcliff_obershelp(std::string_view a, std::string_view b);

/// Matched character count M of the decomposition (codepoint units).
size_t ratcliff_matched(const std::u32string& a, const std::u32string& b);

struct RopmParams {
  int window = 10;             // compare each post to the next `window` posts
  double sim_threshold = 0.9;  // in (0, 1]
  int threads = 0;
};

/// Duplicate pairs found by the chronological sliding-window baseline.
struct DupPairSet {
  std::vector<std::pair<std::string, std::string>> pairs;  // first < second
  size_t n_dup_posts = 0;   // posts appearing in at least one pair
  size_t n_accounts = 0;    // accounts owning those posts

  size_t n_pairs() const { return pairs.size(); }
};

/// Sorts posts chronologically (timestamp, then post id), normalizes each
/// text, and records a pair for posts i vs i+1..i+window whose similarity
/// reaches the threshold.
DupPairSet ropm_scan(const PostCollection& posts, const RopmParams& params);

}  // namespace dupscan
