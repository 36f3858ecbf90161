#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oppminer/miner.hpp"
#include "oracles.hpp"

namespace oppminer {
namespace {

using testing::reference_series;

std::set<Pattern> keys(const SupportMap& m) {
  std::set<Pattern> out;
  for (const auto& [p, s] : m) out.insert(p);
  return out;
}

const std::set<Pattern> kReferenceSeriesFrequent{{1, 2}, {2, 1}, {1, 2, 3}, {2, 3, 1}, {3, 1, 2}, {1, 2, 3, 4}, {3, 4, 1, 2}};

TEST(MineFrequent, ReferenceSeries) {
  const auto result = mine_frequent(reference_series(), 3);
  EXPECT_EQ(keys(result.frequent), kReferenceSeriesFrequent);
  EXPECT_EQ(result.frequent.at(Pattern{3, 4, 1, 2}), 3u);
  EXPECT_EQ(result.frequent.at(Pattern{1, 2}), 11u);
  EXPECT_EQ(result.frequent.at(Pattern{2, 1}), 4u);
  EXPECT_EQ(result.minsup, 3u);
  for (const auto& [p, support] : result.frequent) EXPECT_GE(support, 3u);
}

TEST(MineFrequent, ThresholdAboveAllPairsIsEmpty) {
  const auto s = reference_series();
  const auto result = mine_frequent(s, s.size());
  EXPECT_TRUE(result.frequent.empty());
  EXPECT_EQ(result.candidates_generated, 2u);
}

TEST(MineFrequent, InvalidInput) {
  try {
    mine_frequent(reference_series(), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMinsup);
  }
  EXPECT_THROW(mine_frequent(TimeSeries{1.0}, 1), Error);
}

TEST(MineFrequent, OnlyTwoSeedsAtLengthTwo) {
  MineOptions options;
  options.record_candidates = true;
  const auto result = mine_frequent(TimeSeries{3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9}, 1, options);
  std::set<Pattern> length2;
  for (const auto& [p, s] : result.evaluated) {
    if (p.size() == 2) length2.insert(p);
  }
  EXPECT_EQ(length2, (std::set<Pattern>{{1, 2}, {2, 1}}));
}

TEST(MineFrequent, MinsupOneReachesFullLength) {
  // With minsup 1 every window order is frequent, up to the series itself.
  const TimeSeries s{5, 1, 4, 2, 3};
  const auto result = mine_frequent(s, 1);
  EXPECT_TRUE(result.frequent.contains(Pattern{5, 1, 4, 2, 3}));
  EXPECT_EQ(result.frequent, testing::brute_force_frequent({5, 1, 4, 2, 3}, 1));
}

TEST(MineFrequent, MatchesBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto values = testing::random_series(rng, 60, trial % 4 == 0);
    const auto result = mine_frequent(TimeSeries(values), 4);
    EXPECT_EQ(result.frequent, testing::brute_force_frequent(values, 4)) << "trial " << trial;
  }
}

TEST(MineFrequent, AprioriHolds) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const TimeSeries s(testing::random_series(rng, 120, false));
    const auto result = mine_frequent(s, 3);
    for (const auto& [p, support] : result.frequent) {
      if (p.size() < 3) continue;
      const Pattern prefix = prefix_order(p);
      const Pattern suffix = suffix_order(p);
      ASSERT_TRUE(result.frequent.contains(prefix));
      ASSERT_TRUE(result.frequent.contains(suffix));
      EXPECT_GE(result.frequent.at(prefix), support);
      EXPECT_GE(result.frequent.at(suffix), support);
    }
  }
}

TEST(MineVariant, AllVariantsAgree) {
  for (Variant v : kAllVariants) {
    EXPECT_EQ(keys(mine_variant(reference_series(), 3, v).frequent), kReferenceSeriesFrequent) << to_string(v);
  }
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const TimeSeries s(testing::random_series(rng, 10 + rng() % 150, trial % 5 == 0));
    const std::size_t minsup = 2 + rng() % 4;
    const auto reference = mine_frequent(s, minsup);
    for (Variant v : kAllVariants) {
      const auto result = mine_variant(s, minsup, v);
      EXPECT_EQ(result.frequent, reference.frequent) << to_string(v);
      EXPECT_EQ(result.variant, v);
    }
  }
}

TEST(MineVariant, CandidateCountsOnReferenceSeries) {
  // Level 3 of the reference series is exactly {(1,2,3),(2,3,1),(3,1,2)}.
  auto level_candidates = [](const MiningResult& r, std::size_t length) {
    for (const auto& stats : r.levels) {
      if (stats.level == length) return stats.candidates;
    }
    return std::size_t{0};
  };
  const auto fusion = mine_variant(reference_series(), 3, Variant::FusionFvp);
  const auto bfs = mine_variant(reference_series(), 3, Variant::EnumBfs);
  const auto dfs = mine_variant(reference_series(), 3, Variant::EnumDfs);
  EXPECT_EQ(level_candidates(fusion, 4), 8u);
  EXPECT_EQ(level_candidates(bfs, 4), 12u);
  EXPECT_EQ(level_candidates(dfs, 4), 12u);
  EXPECT_EQ(bfs.candidates_generated, dfs.candidates_generated);
  EXPECT_LE(fusion.candidates_generated, bfs.candidates_generated);
  EXPECT_EQ(fusion.candidates_generated, mine_variant(reference_series(), 3, Variant::FusionBndm).candidates_generated);
}

TEST(MineVariant, FusionNeverGeneratesMore) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const TimeSeries s(testing::random_series(rng, 200, false));
    const auto fusion = mine_variant(s, 3, Variant::FusionFvp);
    const auto bfs = mine_variant(s, 3, Variant::EnumBfs);
    // Fusion may run out of candidates a level before enumeration does.
    EXPECT_LE(fusion.levels.size(), bfs.levels.size());
    for (std::size_t i = 0; i < fusion.levels.size(); ++i) {
      ASSERT_EQ(fusion.levels[i].level, bfs.levels[i].level);
      EXPECT_LE(fusion.levels[i].candidates, bfs.levels[i].candidates);
    }
    EXPECT_LE(fusion.candidates_generated, bfs.candidates_generated);
  }
}

TEST(MineVariant, ParseNames) {
  for (Variant v : kAllVariants) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_FALSE(parse_variant("fusion").has_value());
}

TEST(MineFrequent, DeterministicAcrossThreads) {
  std::mt19937_64 rng(4);
  const TimeSeries s(testing::random_series(rng, 3000, false));
  MineOptions one;
  MineOptions many;
  many.threads = 4;
  for (Variant v : kAllVariants) {
    const auto a = mine_variant(s, 20, v, one);
    const auto b = mine_variant(s, 20, v, many);
    EXPECT_EQ(a.frequent, b.frequent);
    EXPECT_EQ(a.candidates_generated, b.candidates_generated);
  }
}

TEST(MineFrequent, ProgressCallbackPerLevel) {
  std::vector<LevelStats> seen;
  MineOptions options;
  options.on_level = [&](const LevelStats& s) { seen.push_back(s); };
  const auto result = mine_frequent(reference_series(), 3, options);
  ASSERT_EQ(seen.size(), 4u);  // lengths 2..5, the last one empty
  EXPECT_EQ(seen[0].level, 2u);
  EXPECT_EQ(seen[0].frequent, 2u);
  EXPECT_EQ(seen[3].frequent, 0u);
  for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_GE(seen[i].cumulative_ms, seen[i - 1].cumulative_ms);
}

// --- maximal -----------------------------------------------------------------

SupportMap recheck_maximal(const SupportMap& frequent) {
  SupportMap out;
  for (const auto& [p, support] : frequent) {
    const std::vector<Rank> pv(p.begin(), p.end());
    bool parent = false;
    for (const auto& [c, cs] : frequent) {
      if (c.size() != p.size() + 1) continue;
      const std::vector<Rank> cv(c.begin(), c.end());
      if (testing::brute_order({cv.begin(), cv.end() - 1}) == pv || testing::brute_order({cv.begin() + 1, cv.end()}) == pv) {
        parent = true;
      }
    }
    if (!parent) out.emplace(p, support);
  }
  return out;
}

TEST(MineMaximal, ReferenceSeries) {
  const auto result = mine_maximal(reference_series(), 3);
  EXPECT_EQ(keys(result.maximal), (std::set<Pattern>{{1, 2, 3, 4}, {3, 4, 1, 2}}));
  EXPECT_EQ(result.all_frequent_count, 7u);
  EXPECT_DOUBLE_EQ(result.compression_rate, 5.0 / 7.0);
}

TEST(MineMaximal, OnlyLengthTwoFrequent) {
  // Three rises then three falls: no length-3 order repeats three times.
  const TimeSeries s{1, 2, 3, 4, 3.5, 3.2, 3.1};
  const auto result = mine_maximal(s, 3);
  EXPECT_EQ(keys(result.mining.frequent), (std::set<Pattern>{{1, 2}, {2, 1}}));
  EXPECT_EQ(keys(result.maximal), (std::set<Pattern>{{1, 2}, {2, 1}}));
}

TEST(MineMaximal, MatchesRecheckOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const TimeSeries s(testing::random_series(rng, 60, trial % 3 == 0));
    const auto result = mine_maximal(s, 4);
    EXPECT_EQ(result.maximal, recheck_maximal(result.mining.frequent));
    EXPECT_EQ(result.maximal, maximal_by_children(result.mining.frequent));
    for (const auto& [p, support] : result.maximal) EXPECT_TRUE(result.mining.frequent.contains(p));
  }
}

TEST(MineMaximal, CompressionRate) {
  EXPECT_DOUBLE_EQ(compression_rate(7, 2), 5.0 / 7.0);
  EXPECT_NEAR(compression_rate(752, 118), 0.843, 5e-4);
  EXPECT_EQ(compression_rate(0, 0), 0.0);
}

TEST(Subpattern, GappedContainment) {
  EXPECT_TRUE(is_order_preserving_subpattern(Pattern{1, 2}, Pattern{2, 3, 1}));
  EXPECT_TRUE(is_order_preserving_subpattern(Pattern{2, 1}, Pattern{1, 2, 3, 4, 5}) == false);
  EXPECT_TRUE(is_order_preserving_subpattern(Pattern{2, 1}, Pattern{2, 3, 1}));
  EXPECT_TRUE(is_order_preserving_subpattern(Pattern{1, 3, 2}, Pattern{1, 4, 2, 3}));
  EXPECT_FALSE(is_order_preserving_subpattern(Pattern{1, 2, 3}, Pattern{3, 2, 1}));
  // the reference series: the definition-based check agrees with the marking strategy.
  const auto frequent = mine_frequent(reference_series(), 3).frequent;
  EXPECT_EQ(keys(maximal_by_gapped_superpatterns(frequent)), (std::set<Pattern>{{1, 2, 3, 4}, {3, 4, 1, 2}}));
}

TEST(RelativeMinsup, ConvertsFraction) {
  EXPECT_EQ(absolute_minsup(1.0, 16), 15u);
  EXPECT_EQ(absolute_minsup(0.2, 16), 3u);
  EXPECT_EQ(absolute_minsup(0.001, 16), 1u);
  EXPECT_THROW(absolute_minsup(0.0, 16), Error);
  EXPECT_THROW(absolute_minsup(1.5, 16), Error);
}

}  // namespace
}  // namespace oppminer
