#pragma once

// Test-only reference implementations. None of these reuse the library's
// matcher, fusion or miner code paths.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "oppminer/core.hpp"

namespace oppminer::testing {

inline const std::vector<double> kReferenceSeries = {11, 10, 21, 25, 12, 14, 18, 19,
                                              26, 13, 16, 20, 24, 30, 15, 17};

inline TimeSeries reference_series() { return TimeSeries(kReferenceSeries, "reference"); }

// Ranks by counting, with tie detection.
inline bool brute_ranks(const std::vector<double>& window, std::vector<Rank>& out) {
  out.assign(window.size(), 0);
  for (std::size_t i = 0; i < window.size(); ++i) {
    Rank r = 1;
    for (std::size_t j = 0; j < window.size(); ++j) {
      if (j != i && window[j] == window[i]) return false;
      if (window[j] < window[i]) ++r;
    }
    out[i] = r;
  }
  return true;
}

inline std::vector<Rank> brute_order(const std::vector<Rank>& window) {
  std::vector<Rank> out(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    out[i] = 1 + static_cast<Rank>(std::count_if(window.begin(), window.end(), [&](Rank r) { return r < window[i]; }));
  }
  return out;
}

/// Histogram of the relative orders of all tie-free windows of one length.
inline std::map<std::vector<Rank>, std::size_t> window_orders(const std::vector<double>& s, std::size_t m) {
  std::map<std::vector<Rank>, std::size_t> counts;
  std::vector<Rank> ranks;
  for (std::size_t j = 0; j + m <= s.size(); ++j) {
    std::vector<double> window(s.begin() + static_cast<std::ptrdiff_t>(j),
                               s.begin() + static_cast<std::ptrdiff_t>(j + m));
    if (brute_ranks(window, ranks)) ++counts[ranks];
  }
  return counts;
}

/// Frequent patterns straight from the occurrence definition, length by
/// length until a length has no frequent pattern.
inline std::map<Pattern, std::size_t> brute_force_frequent(const std::vector<double>& s, std::size_t minsup) {
  std::map<Pattern, std::size_t> out;
  for (std::size_t m = 2; m <= s.size(); ++m) {
    bool any = false;
    for (const auto& [ranks, count] : window_orders(s, m)) {
      if (count >= minsup) {
        out.emplace(Pattern(ranks), count);
        any = true;
      }
    }
    if (!any) break;
  }
  return out;
}

inline std::vector<Pattern> all_permutations(std::size_t m) {
  std::vector<Rank> r(m);
  for (std::size_t i = 0; i < m; ++i) r[i] = static_cast<Rank>(i + 1);
  std::vector<Pattern> out;
  do {
    out.emplace_back(r);
  } while (std::next_permutation(r.begin(), r.end()));
  return out;
}

/// Random series: real-valued draws, or small-integer draws that produce ties.
inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, bool with_ties) {
  std::vector<double> s(n);
  if (with_ties) {
    std::uniform_int_distribution<int> dist(0, 9);
    for (auto& v : s) v = dist(rng);
  } else {
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    for (auto& v : s) v = dist(rng);
  }
  return s;
}

inline Pattern random_pattern(std::mt19937_64& rng, std::size_t m) {
  std::vector<Rank> r(m);
  for (std::size_t i = 0; i < m; ++i) r[i] = static_cast<Rank>(i + 1);
  std::shuffle(r.begin(), r.end(), rng);
  return Pattern(r);
}

}  // namespace oppminer::testing
