#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "braids/core/types.hpp"

namespace braids {

using SourceQueues = std::map<SourceCategory, std::vector<Post>>;

/// Dedup key: the original status id for boosts, the post id otherwise, so
/// a boost and its original never both appear.
const std::string& normalized_id(const Post& post);

/// Newest first; equal timestamps fall back to descending id.
bool newer_first(const Post& a, const Post& b);
void sort_chronological(std::vector<Post>& posts);

Badge assign_badge(const Post& post, const SourceCategory& source, const FollowSet& follow_set);

/// Case-insensitive substring match of any phrase against the plain text.
bool matches_filter(const Post& post, const std::vector<std::string>& filters);

/// True iff a finite source was asked for posts and returned none. Sources
/// missing from `responses` are treated as unknown, not exhausted.
bool detect_ran_out(const std::map<SourceCategory, int>& requests,
                    const std::map<SourceCategory, int>& responses);

struct MergeOutcome {
  std::vector<AnnotatedPost> posts;
  /// Category of every pop, in order, including pops whose post was dropped.
  std::vector<SourceCategory> draws;
  std::size_t dropped_filtered = 0;
  std::size_t dropped_duplicate = 0;
  /// Posts in queues whose category carries no weight; never drawn.
  std::size_t dropped_unweighted = 0;
};

/// Merges per-source queues into one feed.
///
/// WeightedInterleave: until every queue is empty, pick a non-empty queue
/// with probability proportional to its weight and pop its newest post.
/// StrictPriority: drain queues by descending weight, ties in canonical
/// category order with accounts in config order.
///
/// In both modes a popped post is dropped if its normalized id is already in
/// `seen` or it matches a filter; a dropped pop still consumes its draw.
/// Kept posts are badged and recorded in `seen`. Queues are re-sorted newest
/// first on entry.
MergeOutcome combine_posts(SourceQueues queues, const CurationConfig& config,
                           const FollowSet& follow_set, SeenSet& seen, std::uint64_t seed);

}  // namespace braids
