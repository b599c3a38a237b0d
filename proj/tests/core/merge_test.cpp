#include <gtest/gtest.h>

#include "braids/core/merge.hpp"
#include "post_builders.hpp"

namespace braids {
namespace {

using testing::make_boost;
using testing::make_post;
using L = PriorityLevel;

CurationConfig feeds(L following, L local, L trending) {
  CurationConfig c;
  c.priorities = {following, local, trending};
  return c;
}

TEST(AssignBadge, FollowingSplitsOnAuthor) {
  FollowSet follows{"a@x.social"};
  EXPECT_EQ(assign_badge(make_post("1", "a@x.social", 0), SourceCategory::following(), follows),
            Badge::kUserYouFollow);
  EXPECT_EQ(assign_badge(make_post("2", "b@x.social", 0), SourceCategory::following(), follows),
            Badge::kHashtagYouFollow);
}

TEST(AssignBadge, CategoryDetermined) {
  FollowSet follows{"a@x.social"};
  auto p = make_post("1", "a@x.social", 0);
  EXPECT_EQ(assign_badge(p, SourceCategory::local(), follows), Badge::kLocalPost);
  EXPECT_EQ(assign_badge(p, SourceCategory::trending(), follows), Badge::kTrendingPost);
  EXPECT_EQ(assign_badge(p, SourceCategory::account("a@x.social"), follows),
            Badge::kPrioritizedAccount);
}

TEST(MatchesFilter, CaseInsensitiveSubstring) {
  EXPECT_TRUE(matches_filter(make_post("1", "a", 0, "I love CATS today"), {"cats"}));
  EXPECT_FALSE(matches_filter(make_post("1", "a", 0, "catalog of parts"), {"cats"}));
  EXPECT_FALSE(matches_filter(make_post("1", "a", 0, "anything"), {}));
  EXPECT_TRUE(matches_filter(make_post("1", "a", 0, "Buy CRYPTO now"), {"dogs", " Crypto "}));
}

TEST(DetectRanOut, FiniteSourceReturningNothing) {
  EXPECT_TRUE(detect_ran_out({{SourceCategory::following(), 13}},
                             {{SourceCategory::following(), 0}}));
  EXPECT_TRUE(detect_ran_out({{SourceCategory::account("m@x"), 5}},
                             {{SourceCategory::account("m@x"), 0}}));
}

TEST(DetectRanOut, InfiniteSourcesNeverTrigger) {
  EXPECT_FALSE(detect_ran_out({{SourceCategory::trending(), 10}, {SourceCategory::local(), 10}},
                              {{SourceCategory::trending(), 0}, {SourceCategory::local(), 0}}));
}

TEST(DetectRanOut, VacuousAndPartial) {
  EXPECT_FALSE(detect_ran_out({}, {}));
  EXPECT_FALSE(detect_ran_out({{SourceCategory::following(), 0}},
                              {{SourceCategory::following(), 0}}));
  EXPECT_FALSE(detect_ran_out({{SourceCategory::following(), 13}},
                              {{SourceCategory::following(), 4}}));
  // No response recorded (e.g. the fetch failed) is not exhaustion.
  EXPECT_FALSE(detect_ran_out({{SourceCategory::following(), 13}}, {}));
}

TEST(CombinePosts, SingleQueueIsIdentity) {
  std::vector<Post> trending;
  for (int i = 0; i < 5; ++i) trending.push_back(make_post("t" + std::to_string(i), "x", 100 - i));
  SeenSet seen;
  auto out = combine_posts({{SourceCategory::trending(), trending}},
                           feeds(L::kNone, L::kNone, L::kHigh), {}, seen, 42);
  ASSERT_EQ(out.posts.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(out.posts[i].post.id, trending[i].id);
    EXPECT_EQ(out.posts[i].badge, Badge::kTrendingPost);
  }
}

TEST(CombinePosts, DuplicateKeepsFirstSeenBadge) {
  auto shared = make_post("s1", "a@x", 50);
  SourceQueues queues{{SourceCategory::following(), {shared}},
                      {SourceCategory::trending(), {shared}}};
  auto config = feeds(L::kHigh, L::kNone, L::kLow);
  // Find a seed whose first draw is Following.
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    SeenSet seen;
    auto out = combine_posts(queues, config, FollowSet{"a@x"}, seen, seed);
    ASSERT_EQ(out.posts.size(), 1u);
    EXPECT_EQ(out.dropped_duplicate, 1u);
    EXPECT_EQ(out.posts[0].source, out.draws.front());
    if (out.draws.front() == SourceCategory::following()) {
      EXPECT_EQ(out.posts[0].badge, Badge::kUserYouFollow);
      return;
    }
  }
  FAIL() << "no seed drew Following first";
}

TEST(CombinePosts, BoostAndOriginalCollapse) {
  SourceQueues queues{{SourceCategory::following(), {make_boost("b1", "a@x", 60, "o1")}},
                      {SourceCategory::account("m@y"), {make_post("o1", "m@y", 10)}}};
  auto config = feeds(L::kHigh, L::kNone, L::kNone);
  config.accounts.push_back({"m@y", L::kHigh});
  SeenSet seen;
  auto out = combine_posts(queues, config, {}, seen, 3);
  EXPECT_EQ(out.posts.size(), 1u);
  EXPECT_EQ(out.dropped_duplicate, 1u);
  EXPECT_TRUE(seen.contains("o1"));
  EXPECT_FALSE(seen.contains("b1"));
}

TEST(CombinePosts, FilteredPostIsDropped) {
  SourceQueues queues{{SourceCategory::local(),
                       {make_post("1", "a", 3, "new crypto coin"), make_post("2", "a", 2, "birds")}}};
  auto config = feeds(L::kNone, L::kHigh, L::kNone);
  config.filters = {"crypto"};
  SeenSet seen;
  auto out = combine_posts(queues, config, {}, seen, 1);
  ASSERT_EQ(out.posts.size(), 1u);
  EXPECT_EQ(out.posts[0].post.id, "2");
  EXPECT_EQ(out.dropped_filtered, 1u);
  EXPECT_FALSE(seen.contains("1"));
}

TEST(CombinePosts, PreviouslySeenIdsAreSuppressed) {
  SourceQueues queues{{SourceCategory::local(), {make_post("1", "a", 3), make_post("2", "a", 2)}}};
  SeenSet seen{"1"};
  auto out = combine_posts(queues, feeds(L::kNone, L::kLow, L::kNone), {}, seen, 1);
  ASSERT_EQ(out.posts.size(), 1u);
  EXPECT_EQ(out.posts[0].post.id, "2");
}

TEST(CombinePosts, EmptyInput) {
  SeenSet seen;
  auto out = combine_posts({}, CurationConfig{}, {}, seen, 0);
  EXPECT_TRUE(out.posts.empty());
  EXPECT_TRUE(out.draws.empty());
}

TEST(CombinePosts, UnweightedQueueIsNotDrawn) {
  SourceQueues queues{{SourceCategory::local(), {make_post("1", "a", 3)}},
                      {SourceCategory::trending(), {make_post("2", "b", 3)}}};
  SeenSet seen;
  auto out = combine_posts(queues, feeds(L::kNone, L::kNone, L::kLow), {}, seen, 0);
  ASSERT_EQ(out.posts.size(), 1u);
  EXPECT_EQ(out.posts[0].post.id, "2");
  EXPECT_EQ(out.dropped_unweighted, 1u);
}

TEST(CombinePosts, QueuesAreReorderedChronologically) {
  // Trending arrives in score order; the merged feed shows it newest first.
  SourceQueues queues{{SourceCategory::trending(),
                       {make_post("a", "x", 1), make_post("b", "x", 9), make_post("c", "x", 5)}}};
  SeenSet seen;
  auto out = combine_posts(queues, feeds(L::kNone, L::kNone, L::kHigh), {}, seen, 0);
  ASSERT_EQ(out.posts.size(), 3u);
  EXPECT_EQ(out.posts[0].post.id, "b");
  EXPECT_EQ(out.posts[1].post.id, "c");
  EXPECT_EQ(out.posts[2].post.id, "a");
}

TEST(CombinePosts, EqualTimestampsBreakTiesByDescendingId) {
  SourceQueues queues{{SourceCategory::local(), {make_post("100", "x", 1), make_post("101", "x", 1)}}};
  SeenSet seen;
  auto out = combine_posts(queues, feeds(L::kNone, L::kLow, L::kNone), {}, seen, 0);
  ASSERT_EQ(out.posts.size(), 2u);
  EXPECT_EQ(out.posts[0].post.id, "101");
}

TEST(CombinePosts, StrictPriorityGroupsByWeight) {
  SourceQueues queues{
      {SourceCategory::following(), {make_post("f1", "a", 1), make_post("f2", "a", 0)}},
      {SourceCategory::local(), {make_post("l1", "b", 90)}},
      {SourceCategory::trending(), {make_post("t1", "c", 50)}},
      {SourceCategory::account("m@y"), {make_post("m1", "m@y", 70)}}};
  auto config = feeds(L::kMedium, L::kLow, L::kHigh);
  config.accounts.push_back({"m@y", L::kHigh});
  config.ordering_mode = OrderingMode::kStrictPriority;
  SeenSet seen;
  auto out = combine_posts(queues, config, {}, seen, 999);
  std::vector<std::string> ids;
  for (const auto& ap : out.posts) ids.push_back(ap.post.id);
  // Trending and the account tie at High; Trending comes first canonically.
  EXPECT_EQ(ids, (std::vector<std::string>{"t1", "m1", "f1", "f2", "l1"}));
}

TEST(CombinePosts, StrictPriorityTiesFollowConfigAccountOrder) {
  SourceQueues queues{{SourceCategory::account("zed@y"), {make_post("z", "zed@y", 1)}},
                      {SourceCategory::account("amy@y"), {make_post("a", "amy@y", 2)}}};
  auto config = feeds(L::kNone, L::kNone, L::kNone);
  config.accounts = {{"zed@y", L::kLow}, {"amy@y", L::kLow}};
  config.ordering_mode = OrderingMode::kStrictPriority;
  SeenSet seen;
  auto out = combine_posts(queues, config, {}, seen, 0);
  ASSERT_EQ(out.posts.size(), 2u);
  EXPECT_EQ(out.posts[0].post.id, "z");
}

TEST(CombinePosts, FirstDrawFrequencyMatchesWeights) {
  SourceQueues queues{{SourceCategory::following(), {make_post("f", "a", 1)}},
                      {SourceCategory::local(), {make_post("l", "b", 1)}}};
  auto config = feeds(L::kHigh, L::kLow, L::kNone);
  constexpr int kRuns = 10000;
  int heavy = 0;
  for (int seed = 0; seed < kRuns; ++seed) {
    SeenSet seen;
    auto out = combine_posts(queues, config, {}, seen, static_cast<std::uint64_t>(seed));
    if (out.draws.front() == SourceCategory::following()) ++heavy;
  }
  double freq = static_cast<double>(heavy) / kRuns;
  EXPECT_NEAR(freq, 0.75, 0.02);
}

}  // namespace
}  // namespace braids
