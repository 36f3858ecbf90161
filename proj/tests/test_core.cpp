#include <gtest/gtest.h>

#include <random>

#include "oppminer/core.hpp"
#include "oracles.hpp"

namespace oppminer {
namespace {

TEST(RelativeOrder, RanksWindowValues) {
  EXPECT_EQ(relative_order({21, 25, 12, 14}), (Pattern{3, 4, 1, 2}));
  EXPECT_EQ(relative_order({10, 20, 30, 40}), (Pattern{1, 2, 3, 4}));
  EXPECT_EQ(relative_order({39, 46, 10, 21}), (Pattern{3, 4, 1, 2}));
}

TEST(RelativeOrder, RejectsTiesAndShortInput) {
  try {
    relative_order({1, 2, 2});
    FAIL() << "expected TiedValues";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TiedValues);
  }
  try {
    relative_order({1});
    FAIL() << "expected TooShort";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooShort);
  }
}

TEST(RelativeOrder, IdempotentOnPatterns) {
  for (std::size_t m = 2; m <= 6; ++m) {
    for (const Pattern& p : testing::all_permutations(m)) EXPECT_EQ(relative_order(p), p);
  }
}

TEST(RelativeOrder, RandomInputsGivePermutations) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto values = testing::random_series(rng, 2 + trial % 30, false);
    const Pattern p = relative_order(values);
    std::vector<Rank> expected;
    ASSERT_TRUE(testing::brute_ranks(values, expected));
    EXPECT_TRUE(std::equal(p.begin(), p.end(), expected.begin()));
  }
}

TEST(Pattern, ValidatesPermutation) {
  EXPECT_THROW(Pattern({1}), Error);
  EXPECT_THROW(Pattern({1, 1}), Error);
  EXPECT_THROW(Pattern({0, 1}), Error);
  EXPECT_THROW(Pattern({1, 3}), Error);
  EXPECT_NO_THROW(Pattern({2, 1, 3}));
}

TEST(Pattern, RendersAndParsesDashSeparated) {
  const Pattern p{3, 4, 5, 1, 2};
  EXPECT_EQ(to_string(p), "3-4-5-1-2");
  EXPECT_EQ(parse_pattern("3-4-5-1-2"), p);
  const Pattern long_pattern{10, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  EXPECT_EQ(parse_pattern(to_string(long_pattern)), long_pattern);
  for (const char* bad : {"", "3--4", "3-4-", "a-b", "1-1", "1", "1,2"}) {
    EXPECT_THROW(parse_pattern(bad), Error) << bad;
  }
}

TEST(OrderedTable, InvertsPattern) {
  const auto table = ordered_table(Pattern{3, 4, 5, 1, 2});
  EXPECT_EQ(std::vector<Rank>(table.index().begin(), table.index().end()), (std::vector<Rank>{4, 5, 1, 2, 3}));
  const auto identity = ordered_table(Pattern{1, 2});
  EXPECT_EQ(std::vector<Rank>(identity.index().begin(), identity.index().end()), (std::vector<Rank>{1, 2}));

  // (2,3,1): rank 1 sits at position 3, rank 2 at 1, rank 3 at 2.
  const Pattern p{2, 3, 1};
  const auto t = ordered_table(p);
  for (Rank r = 1; r <= 3; ++r) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == r) pos = i + 1;
    }
    EXPECT_EQ(t.at(static_cast<std::size_t>(r)), static_cast<Rank>(pos));
  }
}

TEST(OrderedTable, IndexedRanksAscend) {
  for (std::size_t m = 2; m <= 6; ++m) {
    for (const Pattern& p : testing::all_permutations(m)) {
      const auto t = ordered_table(p);
      for (std::size_t i = 1; i <= m; ++i) EXPECT_EQ(p.at(static_cast<std::size_t>(t.at(i))), static_cast<Rank>(i));
    }
  }
}

TEST(TimeSeries, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(TimeSeries(std::vector<double>{}), Error);
  EXPECT_THROW(TimeSeries(std::vector<double>{1.0, std::nan("")}), Error);
  EXPECT_THROW(TimeSeries(std::vector<double>{1.0, HUGE_VAL}), Error);
  const TimeSeries s{1, 2, 3};
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.at(1), 1.0);
  EXPECT_EQ(s.prefix(2).size(), 2u);
}

}  // namespace
}  // namespace oppminer
