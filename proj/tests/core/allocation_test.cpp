#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "braids/core/allocation.hpp"

namespace braids {
namespace {

// Independent of integer division: the largest k with k * sum <= w * page.
int floor_share_by_counting(int w, int page, int sum) {
  int k = 0;
  while ((k + 1) * sum <= w * page) ++k;
  return k;
}

CurationConfig feeds(PriorityLevel following, PriorityLevel local, PriorityLevel trending) {
  CurationConfig c;
  c.priorities = {following, local, trending};
  return c;
}

using L = PriorityLevel;

TEST(PriorityWeight, OrdinalMapping) {
  EXPECT_EQ(priority_weight(L::kNone), 0);
  EXPECT_EQ(priority_weight(L::kLow), 1);
  EXPECT_EQ(priority_weight(L::kMedium), 2);
  EXPECT_EQ(priority_weight(L::kHigh), 3);
}

TEST(AllocateFetchCounts, HighLowLow) {
  auto counts = allocate_fetch_counts(feeds(L::kHigh, L::kLow, L::kLow), 40);
  ASSERT_EQ(counts.size(), 3u);
  EXPECT_EQ(counts[SourceCategory::following()], 24);
  EXPECT_EQ(counts[SourceCategory::local()], 8);
  EXPECT_EQ(counts[SourceCategory::trending()], 8);
}

TEST(AllocateFetchCounts, AllHighLeavesRemainderUnallocated) {
  auto counts = allocate_fetch_counts(feeds(L::kHigh, L::kHigh, L::kHigh), 40);
  int total = 0;
  for (const auto& [source, n] : counts) {
    EXPECT_EQ(n, 13) << source.to_string();
    total += n;
  }
  EXPECT_EQ(total, 39);
}

TEST(AllocateFetchCounts, AllNoneIsEmpty) {
  EXPECT_TRUE(allocate_fetch_counts(feeds(L::kNone, L::kNone, L::kNone), 40).empty());
}

TEST(AllocateFetchCounts, SingleAccountFeed) {
  auto config = feeds(L::kNone, L::kNone, L::kNone);
  config.accounts.push_back({"@X@example.social", L::kMedium});
  auto counts = allocate_fetch_counts(config, 40);
  ASSERT_EQ(counts.size(), 1u);
  EXPECT_EQ(counts.at(SourceCategory::account("x@example.social")), 40);
}

TEST(AllocateFetchCounts, RejectsNonPositivePage) {
  EXPECT_THROW(allocate_fetch_counts(CurationConfig{}, 0), std::invalid_argument);
}

TEST(AllocateFetchCounts, RandomConfigsMatchCountingOracle) {
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> level(0, 3);
  std::uniform_int_distribution<int> n_accounts(0, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    CurationConfig c = feeds(static_cast<L>(level(gen)), static_cast<L>(level(gen)),
                             static_cast<L>(level(gen)));
    int accounts = n_accounts(gen);
    for (int i = 0; i < accounts; ++i) {
      c.accounts.push_back({"user" + std::to_string(i) + "@host", static_cast<L>(1 + level(gen) % 3)});
    }
    int sum = 0;
    for (const auto& ws : weighted_sources(c)) sum += ws.weight;
    auto counts = allocate_fetch_counts(c, 40);
    int total = 0;
    for (const auto& ws : weighted_sources(c)) {
      if (ws.weight == 0) {
        EXPECT_FALSE(counts.contains(ws.source));
        continue;
      }
      ASSERT_TRUE(counts.contains(ws.source));
      EXPECT_EQ(counts.at(ws.source), floor_share_by_counting(ws.weight, 40, sum));
      total += counts.at(ws.source);
    }
    EXPECT_LE(total, 40);
    if (sum == 0) EXPECT_TRUE(counts.empty());
  }
}

TEST(AllocateFetchCounts, EqualWeightsGetEqualCounts) {
  for (L level : {L::kLow, L::kMedium, L::kHigh}) {
    auto counts = allocate_fetch_counts(feeds(level, level, level), 40);
    EXPECT_EQ(counts[SourceCategory::following()], counts[SourceCategory::local()]);
    EXPECT_EQ(counts[SourceCategory::local()], counts[SourceCategory::trending()]);
  }
}

}  // namespace
}  // namespace braids
