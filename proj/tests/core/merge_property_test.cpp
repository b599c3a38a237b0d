#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "braids/core/allocation.hpp"
#include "braids/core/merge.hpp"
#include "braids/core/wire.hpp"
#include "random_queues.hpp"

namespace braids {
namespace {

constexpr int kCases = 500;

int weight_of(const CurationConfig& c, const SourceCategory& s) {
  for (const auto& ws : weighted_sources(c)) {
    if (ws.source == s) return ws.weight;
  }
  return 0;
}

// Replays the recorded draw sequence against the input queues without using
// the merge code: pop the named queue, keep first sightings only.
std::vector<std::pair<std::string, SourceCategory>> replay_draws(const testing::RandomCase& rc,
                                                                 const MergeOutcome& out) {
  std::map<SourceCategory, std::deque<Post>> q;
  for (const auto& [s, posts] : rc.queues) q[s] = {posts.begin(), posts.end()};
  std::set<std::string> seen;
  std::vector<std::pair<std::string, SourceCategory>> kept;
  for (const auto& s : out.draws) {
    Post p = q[s].front();
    q[s].pop_front();
    std::string key = p.is_boost ? *p.boosted_id : p.id;
    if (seen.contains(key) || matches_filter(p, rc.config.filters)) continue;
    seen.insert(key);
    kept.emplace_back(p.id, s);
  }
  return kept;
}

TEST(CombinePostsProperty, Invariants) {
  std::mt19937_64 gen(20240301);
  for (int i = 0; i < kCases; ++i) {
    auto rc = testing::random_case(gen);
    std::size_t input = 0;
    for (const auto& [s, posts] : rc.queues) input += posts.size();

    SeenSet seen;
    const std::uint64_t seed = gen();
    auto out = combine_posts(rc.queues, rc.config, rc.follows, seen, seed);

    // Conservation.
    EXPECT_EQ(out.posts.size() + out.dropped_filtered + out.dropped_duplicate + out.dropped_unweighted,
              input);

    // Dedup on the normalized id.
    std::set<std::string> ids;
    for (const auto& ap : out.posts) EXPECT_TRUE(ids.insert(normalized_id(ap.post)).second);

    // Within-source chronology.
    std::map<SourceCategory, Timestamp> last;
    for (const auto& ap : out.posts) {
      auto it = last.find(ap.source);
      if (it != last.end()) EXPECT_GE(it->second, ap.post.created_at);
      last[ap.source] = ap.post.created_at;
    }

    // Badge consistent with source.
    for (const auto& ap : out.posts) {
      EXPECT_EQ(ap.badge, assign_badge(ap.post, ap.source, rc.follows));
    }

    // First-seen badging: replaying the draw log reproduces the output.
    auto kept = replay_draws(rc, out);
    ASSERT_EQ(kept.size(), out.posts.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
      EXPECT_EQ(kept[k].first, out.posts[k].post.id);
      EXPECT_EQ(kept[k].second, out.posts[k].source);
    }

    // Determinism.
    SeenSet seen2;
    auto again = combine_posts(rc.queues, rc.config, rc.follows, seen2, seed);
    FeedPage a{out.posts, false, kPageSize, seed, {}};
    FeedPage b{again.posts, false, kPageSize, seed, {}};
    EXPECT_EQ(wire::canonical(a), wire::canonical(b));
    EXPECT_EQ(seen, seen2);

    // StrictPriority: the first pop comes from a maximal-weight non-empty queue.
    if (rc.config.ordering_mode == OrderingMode::kStrictPriority && !out.draws.empty()) {
      int best = 0;
      for (const auto& [s, posts] : rc.queues) {
        if (!posts.empty()) best = std::max(best, weight_of(rc.config, s));
      }
      EXPECT_EQ(weight_of(rc.config, out.draws.front()), best);
    }
  }
}

TEST(CombinePostsProperty, FirstDrawWithinThreeStandardErrors) {
  // Weights 3, 2, 1, 2 (Following High, Local Medium, Trending Low, account Medium).
  CurationConfig c;
  c.priorities = {PriorityLevel::kHigh, PriorityLevel::kMedium, PriorityLevel::kLow};
  c.accounts = {{"a@b", PriorityLevel::kMedium}};
  SourceQueues queues;
  for (const auto& ws : weighted_sources(c)) {
    queues[ws.source] = {testing::make_post(ws.source.to_string(), "x", 0)};
  }
  constexpr int kRuns = 20000;
  std::map<SourceCategory, int> firsts;
  for (int seed = 0; seed < kRuns; ++seed) {
    SeenSet seen;
    auto out = combine_posts(queues, c, {}, seen, static_cast<std::uint64_t>(seed) * 7919 + 1);
    ++firsts[out.draws.front()];
  }
  const double total = total_weight(c);
  for (const auto& ws : weighted_sources(c)) {
    double p = ws.weight / total;
    double se = std::sqrt(p * (1 - p) / kRuns);
    double freq = static_cast<double>(firsts[ws.source]) / kRuns;
    EXPECT_LE(std::abs(freq - p), 3 * se) << ws.source.to_string();
  }
}

}  // namespace
}  // namespace braids
