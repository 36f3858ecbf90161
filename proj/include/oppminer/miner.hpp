#pragma once

// Level-wise mining of frequent and maximal order-preserving patterns.
//
// mine_frequent seeds length 2 with (1,2) and (2,1), fuses the frequent
// patterns of each level into the next level's candidates and counts their
// support with filtration + verification. It stops at the first level with
// no frequent pattern: the support of a pattern never exceeds the support of
// its prefix order, so no longer pattern can be frequent after that.
//
// The baseline variants swap the support counter (BNDM filtration, no
// filtration) or the candidate generator (enumeration, depth- or
// breadth-first). All variants return the same frequent map.

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "oppminer/core.hpp"
#include "oppminer/fusion.hpp"
#include "oppminer/matcher.hpp"
#include "oppminer/parallel.hpp"

namespace oppminer {

enum class Variant {
  FusionFvp,
  FusionBndm,
  FusionNofilter,
  EnumDfs,
  EnumBfs,
};

inline constexpr std::array<Variant, 5> kAllVariants = {
    Variant::FusionFvp, Variant::FusionBndm, Variant::FusionNofilter, Variant::EnumDfs, Variant::EnumBfs};

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::FusionFvp: return "fusion_fvp";
    case Variant::FusionBndm: return "fusion_bndm";
    case Variant::FusionNofilter: return "fusion_nofilter";
    case Variant::EnumDfs: return "enum_dfs";
    case Variant::EnumBfs: return "enum_bfs";
  }
  return "unknown";
}

inline std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

using SupportMap = std::map<Pattern, std::size_t>;

/// Per-length progress record.
struct LevelStats {
  std::size_t level = 0;  // pattern length
  std::size_t frequent = 0;
  std::size_t candidates = 0;
  double cumulative_ms = 0.0;
};

struct MineOptions {
  unsigned threads = 1;
  /// Keep every (candidate, support) pair submitted to support counting.
  bool record_candidates = false;
  std::function<void(const LevelStats&)> on_level;
};

struct MiningResult {
  SupportMap frequent;
  std::size_t candidates_generated = 0;
  double elapsed_ms = 0.0;
  Variant variant = Variant::FusionFvp;
  std::size_t minsup = 0;
  std::vector<LevelStats> levels;
  std::vector<std::pair<Pattern, std::size_t>> evaluated;
};

struct MaximalResult {
  SupportMap maximal;
  std::size_t all_frequent_count = 0;
  double compression_rate = 0.0;
  MiningResult mining;
};

/// (|frequent| - |maximal|) / |frequent|; 0 for an empty frequent set.
inline double compression_rate(std::size_t frequent, std::size_t maximal) {
  if (frequent == 0) return 0.0;
  return static_cast<double>(frequent - maximal) / static_cast<double>(frequent);
}

/// Smallest absolute minsup covering `fraction` of the n-1 adjacent pairs.
inline std::size_t absolute_minsup(double fraction, std::size_t series_length) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidMinsup, "relative minsup must lie in (0, 1]");
  }
  const double pairs = series_length > 0 ? static_cast<double>(series_length - 1) : 0.0;
  const auto minsup = static_cast<std::size_t>(std::ceil(fraction * pairs - 1e-9));
  return std::max<std::size_t>(1, minsup);
}

namespace detail {

inline void check_mining_input(const TimeSeries& s, std::size_t minsup) {
  if (minsup < 1) throw Error(ErrorCode::InvalidMinsup, "minsup must be at least 1");
  if (s.size() < 2) throw Error(ErrorCode::TooShort, "mining needs a series of length >= 2");
}

inline SupportMethod support_method(Variant v) {
  switch (v) {
    case Variant::FusionBndm: return SupportMethod::FvpBndm;
    case Variant::FusionNofilter: return SupportMethod::Nofilter;
    default: return SupportMethod::Fvp;
  }
}

inline std::vector<Pattern> seed_level() { return {Pattern{1, 2}, Pattern{2, 1}}; }

class LevelMiner {
 public:
  using Clock = std::chrono::steady_clock;

  LevelMiner(const TimeSeries& s, std::size_t minsup, Variant variant, const MineOptions& options)
      : counter_(s), minsup_(minsup), method_(support_method(variant)), options_(options),
        start_(Clock::now()) {
    result_.variant = variant;
    result_.minsup = minsup;
  }

  std::vector<std::size_t> count(const std::vector<Pattern>& candidates) {
    std::vector<std::size_t> supports(candidates.size());
    parallel_for(candidates.size(), options_.threads,
                 [&](std::size_t i) { supports[i] = counter_.support(candidates[i], method_); });
    result_.candidates_generated += candidates.size();
    if (options_.record_candidates) {
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        result_.evaluated.emplace_back(candidates[i], supports[i]);
      }
    }
    return supports;
  }

  // Counts a level and returns its frequent patterns in candidate order.
  std::vector<Pattern> run_level(const std::vector<Pattern>& candidates) {
    const auto supports = count(candidates);
    std::vector<Pattern> frequent;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (supports[i] >= minsup_) {
        frequent.push_back(candidates[i]);
        result_.frequent.emplace(candidates[i], supports[i]);
      }
    }
    if (!candidates.empty()) {
      record_level(candidates.front().size(), frequent.size(), candidates.size());
    }
    return frequent;
  }

  void record_level(std::size_t length, std::size_t frequent, std::size_t candidates) {
    LevelStats stats{length, frequent, candidates, elapsed_ms()};
    result_.levels.push_back(stats);
    if (options_.on_level) options_.on_level(stats);
  }

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

  MiningResult finish() {
    result_.elapsed_ms = elapsed_ms();
    return std::move(result_);
  }

  std::size_t minsup() const noexcept { return minsup_; }
  MiningResult& result() noexcept { return result_; }

 private:
  SupportCounter counter_;
  std::size_t minsup_;
  SupportMethod method_;
  const MineOptions& options_;
  Clock::time_point start_;
  MiningResult result_;
};

// Breadth-first level loop; `parents` receives the fusion parents of every
// frequent fused candidate when non-null.
inline MiningResult mine_levels(const TimeSeries& s, std::size_t minsup, Variant variant,
                                const MineOptions& options, std::set<Pattern>* parents) {
  LevelMiner miner(s, minsup, variant, options);
  const bool enumerate = variant == Variant::EnumBfs;
  std::vector<Pattern> level = seed_level();
  while (!level.empty()) {
    std::vector<Pattern> frequent = miner.run_level(level);
    if (parents) {
      for (const Pattern& c : frequent) {
        if (c.size() < 3) continue;
        parents->insert(Pattern(prefix_order_ranks(c)));
        parents->insert(Pattern(suffix_order_ranks(c)));
      }
    }
    if (frequent.empty()) break;
    level = enumerate ? level_candidates_enumeration(frequent) : level_candidates_fusion(frequent);
  }
  return miner.finish();
}

inline MiningResult mine_depth_first(const TimeSeries& s, std::size_t minsup,
                                     const MineOptions& options) {
  // Progress is reported per length once the search completes.
  MineOptions quiet = options;
  quiet.on_level = nullptr;
  LevelMiner miner(s, minsup, Variant::EnumDfs, quiet);
  std::map<std::size_t, LevelStats> per_length;

  auto tally = [&](const std::vector<Pattern>& candidates, const std::vector<std::size_t>& supports) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      auto& stats = per_length[candidates[i].size()];
      stats.level = candidates[i].size();
      ++stats.candidates;
      if (supports[i] >= minsup) ++stats.frequent;
    }
  };

  std::vector<Pattern> stack;
  {
    const auto seeds = seed_level();
    const auto supports = miner.count(seeds);
    tally(seeds, supports);
    for (std::size_t i = seeds.size(); i-- > 0;) {
      if (supports[i] >= minsup) {
        miner.result().frequent.emplace(seeds[i], supports[i]);
        stack.push_back(seeds[i]);
      }
    }
  }
  while (!stack.empty()) {
    Pattern p = std::move(stack.back());
    stack.pop_back();
    const auto children = enumerate_extensions(p);
    const auto supports = miner.count(children);
    tally(children, supports);
    // Reverse push keeps the visiting order t_1, t_2, ...
    for (std::size_t i = children.size(); i-- > 0;) {
      if (supports[i] >= minsup) {
        miner.result().frequent.emplace(children[i], supports[i]);
        stack.push_back(children[i]);
      }
    }
  }
  MiningResult result = miner.finish();
  for (auto& [length, stats] : per_length) {
    stats.cumulative_ms = result.elapsed_ms;
    result.levels.push_back(stats);
    if (options.on_level) options.on_level(stats);
  }
  return result;
}

}  // namespace detail

/// All frequent patterns of length >= 2 (fusion candidates, SBNDM2 filtration).
inline MiningResult mine_frequent(const TimeSeries& s, std::size_t minsup, const MineOptions& options = {}) {
  detail::check_mining_input(s, minsup);
  return detail::mine_levels(s, minsup, Variant::FusionFvp, options, nullptr);
}

inline MiningResult mine_variant(const TimeSeries& s, std::size_t minsup, Variant variant,
                                 const MineOptions& options = {}) {
  detail::check_mining_input(s, minsup);
  if (variant == Variant::EnumDfs) return detail::mine_depth_first(s, minsup, options);
  return detail::mine_levels(s, minsup, variant, options, nullptr);
}

/// Maximal patterns by fusion-parent marking: the two parents of every
/// frequent fused candidate are non-maximal, the unmarked frequent patterns
/// are reported.
inline MaximalResult mine_maximal(const TimeSeries& s, std::size_t minsup, const MineOptions& options = {}) {
  detail::check_mining_input(s, minsup);
  std::set<Pattern> non_maximal;
  MaximalResult out;
  out.mining = detail::mine_levels(s, minsup, Variant::FusionFvp, options, &non_maximal);
  for (const auto& [p, support] : out.mining.frequent) {
    if (!non_maximal.contains(p)) out.maximal.emplace(p, support);
  }
  out.all_frequent_count = out.mining.frequent.size();
  out.compression_rate = compression_rate(out.all_frequent_count, out.maximal.size());
  return out;
}

/// Independent re-check of the marking strategy: p is kept iff no frequent
/// pattern one longer has p as its prefix order or suffix order.
inline SupportMap maximal_by_children(const SupportMap& frequent) {
  std::map<std::size_t, std::vector<const Pattern*>> by_length;
  for (const auto& [p, support] : frequent) by_length[p.size()].push_back(&p);
  SupportMap out;
  for (const auto& [p, support] : frequent) {
    bool has_child = false;
    auto it = by_length.find(p.size() + 1);
    if (it != by_length.end()) {
      for (const Pattern* c : it->second) {
        if (Pattern(detail::prefix_order_ranks(*c)) == p || Pattern(detail::suffix_order_ranks(*c)) == p) {
          has_child = true;
          break;
        }
      }
    }
    if (!has_child) out.emplace(p, support);
  }
  return out;
}

/// True iff `sub` is an order-preserving sub-pattern of `super` with
/// arbitrary index gaps.
inline bool is_order_preserving_subpattern(const Pattern& sub, const Pattern& super) {
  const std::size_t i = sub.size();
  const std::size_t j = super.size();
  if (i > j) return false;
  std::vector<std::size_t> pick(i);
  for (std::size_t k = 0; k < i; ++k) pick[k] = k;
  std::vector<Rank> chosen(i);
  while (true) {
    for (std::size_t k = 0; k < i; ++k) chosen[k] = super[pick[k]];
    if (detail::order_of(chosen) == std::vector<Rank>(sub.begin(), sub.end())) return true;
    // Next combination in lexicographic order.
    std::size_t k = i;
    while (k > 0 && pick[k - 1] == j - i + k - 1) --k;
    if (k == 0) return false;
    ++pick[k - 1];
    for (std::size_t t = k; t < i; ++t) pick[t] = pick[t - 1] + 1;
  }
}

/// Maximality checked against every longer frequent pattern with gapped
/// sub-pattern containment. Exponential in pattern length; for study on
/// small result sets only.
inline SupportMap maximal_by_gapped_superpatterns(const SupportMap& frequent) {
  SupportMap out;
  for (const auto& [p, support] : frequent) {
    bool dominated = false;
    for (const auto& [c, c_support] : frequent) {
      if (c.size() > p.size() && is_order_preserving_subpattern(p, c)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.emplace(p, support);
  }
  return out;
}

}  // namespace oppminer
