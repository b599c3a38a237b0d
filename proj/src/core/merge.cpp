#include "braids/core/merge.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "braids/core/allocation.hpp"
#include "braids/core/rng.hpp"

namespace braids {

namespace {

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trimmed(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

struct LiveQueue {
  SourceCategory source;
  std::uint64_t weight;
  std::deque<Post> posts;
};

class Merger {
 public:
  Merger(const CurationConfig& config, const FollowSet& follow_set, SeenSet& seen)
      : follow_set_(follow_set), seen_(seen) {
    for (const auto& phrase : config.filters) {
      auto p = lowercase(trimmed(phrase));
      if (!p.empty()) filters_.push_back(std::move(p));
    }
  }

  void pop_from(LiveQueue& queue) {
    Post post = std::move(queue.posts.front());
    queue.posts.pop_front();
    outcome_.draws.push_back(queue.source);
    const std::string& key = normalized_id(post);
    if (seen_.contains(key)) {
      ++outcome_.dropped_duplicate;
      return;
    }
    if (matches_lowered(post)) {
      ++outcome_.dropped_filtered;
      return;
    }
    seen_.insert(key);
    Badge badge = assign_badge(post, queue.source, follow_set_);
    outcome_.posts.push_back(AnnotatedPost{std::move(post), badge, queue.source});
  }

  MergeOutcome& outcome() { return outcome_; }

 private:
  bool matches_lowered(const Post& post) const {
    if (filters_.empty()) return false;
    auto text = lowercase(post.content_text);
    return std::any_of(filters_.begin(), filters_.end(),
                       [&](const std::string& p) { return text.find(p) != std::string::npos; });
  }

  const FollowSet& follow_set_;
  SeenSet& seen_;
  std::vector<std::string> filters_;
  MergeOutcome outcome_;
};

}  // namespace

const std::string& normalized_id(const Post& post) {
  if (post.is_boost && post.boosted_id && !post.boosted_id->empty()) return *post.boosted_id;
  return post.id;
}

bool newer_first(const Post& a, const Post& b) {
  if (a.created_at != b.created_at) return a.created_at > b.created_at;
  return a.id > b.id;
}

void sort_chronological(std::vector<Post>& posts) {
  std::stable_sort(posts.begin(), posts.end(), newer_first);
}

Badge assign_badge(const Post& post, const SourceCategory& source, const FollowSet& follow_set) {
  switch (source.kind()) {
    case SourceKind::kFollowingAndHashtags:
      return follow_set.contains(normalize_handle(post.author_handle)) ? Badge::kUserYouFollow
                                                                       : Badge::kHashtagYouFollow;
    case SourceKind::kLocal: return Badge::kLocalPost;
    case SourceKind::kTrending: return Badge::kTrendingPost;
    case SourceKind::kPrioritizedAccount: return Badge::kPrioritizedAccount;
  }
  return Badge::kLocalPost;
}

bool matches_filter(const Post& post, const std::vector<std::string>& filters) {
  if (filters.empty()) return false;
  auto text = lowercase(post.content_text);
  for (const auto& phrase : filters) {
    auto p = lowercase(trimmed(phrase));
    if (!p.empty() && text.find(p) != std::string::npos) return true;
  }
  return false;
}

bool detect_ran_out(const std::map<SourceCategory, int>& requests,
                    const std::map<SourceCategory, int>& responses) {
  for (const auto& [source, requested] : requests) {
    if (!source.is_finite() || requested <= 0) continue;
    auto it = responses.find(source);
    if (it != responses.end() && it->second == 0) return true;
  }
  return false;
}

MergeOutcome combine_posts(SourceQueues queues, const CurationConfig& config,
                           const FollowSet& follow_set, SeenSet& seen, std::uint64_t seed) {
  Merger merger(config, follow_set, seen);

  // Canonical order, accounts in config order rather than map order.
  std::vector<LiveQueue> live;
  for (const auto& ws : weighted_sources(config)) {
    auto it = queues.find(ws.source);
    if (it == queues.end()) continue;
    if (ws.weight <= 0) continue;
    sort_chronological(it->second);
    if (!it->second.empty()) {
      live.push_back({ws.source, static_cast<std::uint64_t>(ws.weight),
                      std::deque<Post>(std::make_move_iterator(it->second.begin()),
                                       std::make_move_iterator(it->second.end()))});
    }
    queues.erase(it);
  }
  for (const auto& [source, posts] : queues) merger.outcome().dropped_unweighted += posts.size();

  if (config.ordering_mode == OrderingMode::kStrictPriority) {
    std::stable_sort(live.begin(), live.end(),
                     [](const LiveQueue& a, const LiveQueue& b) { return a.weight > b.weight; });
    for (auto& queue : live) {
      while (!queue.posts.empty()) merger.pop_from(queue);
    }
    return std::move(merger.outcome());
  }

  DrawRng rng(seed);
  std::uint64_t total = 0;
  for (const auto& q : live) total += q.weight;
  while (!live.empty()) {
    std::uint64_t r = rng.below(total);
    std::size_t pick = 0;
    while (r >= live[pick].weight) {
      r -= live[pick].weight;
      ++pick;
    }
    merger.pop_from(live[pick]);
    if (live[pick].posts.empty()) {
      total -= live[pick].weight;
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  return std::move(merger.outcome());
}

}  // namespace braids
