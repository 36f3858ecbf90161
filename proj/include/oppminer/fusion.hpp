#pragma once

// Candidate generation for level-wise mining.
//
// Pattern fusion joins two length-m patterns p, q whose overlapping parts
// share the same relative order (suffixorder(p) == prefixorder(q)) into the
// length-(m+1) patterns c with prefixorder(c) == p and suffixorder(c) == q.
// The enumeration strategy appends every possible new last rank instead.

#include <map>
#include <set>
#include <vector>

#include "oppminer/core.hpp"

namespace oppminer {

namespace detail {

// Relative order of a length >= 1 rank window; the length-1 order is (1).
inline std::vector<Rank> order_of(std::span<const Rank> window) {
  std::vector<Rank> out(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    Rank r = 1;
    for (Rank other : window) r += other < window[i] ? 1 : 0;
    out[i] = r;
  }
  return out;
}

inline std::vector<Rank> prefix_order_ranks(const Pattern& p) {
  return order_of(p.ranks().first(p.size() - 1));
}

inline std::vector<Rank> suffix_order_ranks(const Pattern& p) {
  return order_of(p.ranks().last(p.size() - 1));
}

}  // namespace detail

/// Relative order of (p1, ..., p_{m-1}); requires m >= 3.
inline Pattern prefix_order(const Pattern& p) {
  if (p.size() < 3) throw Error(ErrorCode::TooShort, "prefix order of a length-2 pattern has length 1");
  return Pattern(detail::prefix_order_ranks(p));
}

/// Relative order of (p2, ..., p_m); requires m >= 3.
inline Pattern suffix_order(const Pattern& p) {
  if (p.size() < 3) throw Error(ErrorCode::TooShort, "suffix order of a length-2 pattern has length 1");
  return Pattern(detail::suffix_order_ranks(p));
}

/// Zero, one (general case) or two (special case) length-(m+1) candidates.
struct FusionResult {
  std::vector<Pattern> candidates;

  bool empty() const noexcept { return candidates.empty(); }
  std::size_t size() const noexcept { return candidates.size(); }
};

inline FusionResult fuse(const Pattern& p, const Pattern& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::LengthMismatch, "fusion needs patterns of equal length");
  }
  const std::size_t m = p.size();
  FusionResult result;
  if (detail::suffix_order_ranks(p) != detail::prefix_order_ranks(q)) return result;

  const Rank p1 = p[0];
  const Rank qm = q[m - 1];
  const bool overlap_equal = std::equal(p.begin() + 1, p.end(), q.begin());

  std::vector<Rank> x(m + 1);
  if (!overlap_equal) {
    if (p1 < qm) {
      x[0] = p1;
      x[m] = qm + 1;
      for (std::size_t u = 1; u < m; ++u) x[u] = p[u] > qm ? p[u] + 1 : p[u];
    } else if (p1 > qm) {
      x[0] = p1 + 1;
      x[m] = qm;
      for (std::size_t v = 0; v + 1 < m; ++v) x[v + 1] = q[v] > p1 ? q[v] + 1 : q[v];
    } else {
      // Equal end ranks force equal overlaps, so this branch cannot be reached.
      throw Error(ErrorCode::Internal, "general fusion case with p1 == q_m for " + to_string(p) +
                                           " and " + to_string(q));
    }
    result.candidates.emplace_back(std::move(x));
    return result;
  }

  // Special case: the first and last entries are adjacent in rank, so both
  // orders between them are valid candidates.
  for (std::size_t u = 1; u < m; ++u) x[u] = p[u] > p1 ? p[u] + 1 : p[u];
  std::vector<Rank> y = x;
  y[0] = p1 + 1;
  y[m] = p1;
  std::vector<Rank> k = std::move(x);
  k[0] = p1;
  k[m] = p1 + 1;
  result.candidates.emplace_back(std::move(y));
  result.candidates.emplace_back(std::move(k));
  return result;
}

/// The m+1 extensions t_1..t_{m+1}: t_i ends with rank i, earlier ranks >= i shift up.
inline std::vector<Pattern> enumerate_extensions(const Pattern& p) {
  const std::size_t m = p.size();
  std::vector<Pattern> out;
  out.reserve(m + 1);
  for (Rank i = 1; i <= static_cast<Rank>(m + 1); ++i) {
    std::vector<Rank> t(m + 1);
    for (std::size_t j = 0; j < m; ++j) t[j] = p[j] >= i ? p[j] + 1 : p[j];
    t[m] = i;
    out.emplace_back(std::move(t));
  }
  return out;
}

/// Fusion over all ordered pairs of a level, deduplicated and sorted.
inline std::vector<Pattern> level_candidates_fusion(const std::vector<Pattern>& level) {
  for (const Pattern& p : level) {
    if (p.size() != level.front().size()) {
      throw Error(ErrorCode::LengthMismatch, "level holds patterns of different lengths");
    }
  }
  // Bucket q by prefix order so each p only meets compatible partners.
  std::map<std::vector<Rank>, std::vector<const Pattern*>> by_prefix;
  for (const Pattern& q : level) by_prefix[detail::prefix_order_ranks(q)].push_back(&q);

  std::set<Pattern> out;
  for (const Pattern& p : level) {
    auto it = by_prefix.find(detail::suffix_order_ranks(p));
    if (it == by_prefix.end()) continue;
    for (const Pattern* q : it->second) {
      for (Pattern& c : fuse(p, *q).candidates) out.insert(std::move(c));
    }
  }
  return {out.begin(), out.end()};
}

inline std::vector<Pattern> level_candidates_fusion(const std::set<Pattern>& level) {
  return level_candidates_fusion(std::vector<Pattern>(level.begin(), level.end()));
}

/// Enumeration over a level, sorted.
inline std::vector<Pattern> level_candidates_enumeration(const std::vector<Pattern>& level) {
  std::set<Pattern> out;
  for (const Pattern& p : level) {
    for (Pattern& c : enumerate_extensions(p)) out.insert(std::move(c));
  }
  return {out.begin(), out.end()};
}

}  // namespace oppminer
