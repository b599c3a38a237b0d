#include "braids/mock/oracle.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace braids::mock {

namespace {

struct Window {
  SourceCategory source;
  int weight;
  std::vector<std::string> keys;  // normalized ids of unfiltered posts, window order
};

int level_value(PriorityLevel level) {
  // Slider stops are an ordinal scale starting at zero.
  return static_cast<int>(level);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool filtered(const Post& post, const std::vector<std::string>& phrases) {
  auto text = lower(post.content_text);
  for (const auto& phrase : phrases) {
    auto p = phrase;
    p.erase(0, p.find_first_not_of(" \t"));
    p.erase(p.find_last_not_of(" \t") + 1);
    if (!p.empty() && text.find(lower(p)) != std::string::npos) return true;
  }
  return false;
}

std::vector<Window> first_page_windows(const CurationConfig& config, const Corpus& corpus) {
  std::vector<std::pair<SourceCategory, int>> sources{
      {SourceCategory::following(), level_value(config.priorities.following)},
      {SourceCategory::local(), level_value(config.priorities.local)},
      {SourceCategory::trending(), level_value(config.priorities.trending)}};
  for (const auto& a : config.accounts) {
    sources.emplace_back(SourceCategory::account(a.handle), level_value(a.level));
  }
  int sum = 0;
  for (const auto& [s, w] : sources) sum += w;

  std::vector<Window> windows;
  if (sum == 0) return windows;
  for (const auto& [source, weight] : sources) {
    if (weight == 0) continue;
    const int share = weight * kPageSize / sum;
    std::vector<const CorpusPost*> timeline;
    switch (source.kind()) {
      case SourceKind::kFollowingAndHashtags: timeline = home_timeline(corpus); break;
      case SourceKind::kLocal: timeline = local_timeline(corpus); break;
      case SourceKind::kTrending: timeline = trending_timeline(corpus); break;
      case SourceKind::kPrioritizedAccount:
        if (const auto* acc = corpus.find_account_by_handle(source.account_handle());
            acc && !acc->suspended) {
          timeline = account_timeline(corpus, acc->id);
        }
        break;
    }
    Window w{source, weight, {}};
    for (int i = 0; i < share && i < static_cast<int>(timeline.size()); ++i) {
      Post post = to_post(corpus, *timeline[i]);
      if (filtered(post, config.filters)) continue;
      w.keys.push_back(post.is_boost ? *post.boosted_id : post.id);
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace

std::map<SourceCategory, int> oracle_expected_counts(const CurationConfig& config,
                                                     const Corpus& corpus) {
  auto windows = first_page_windows(config, corpus);
  std::map<SourceCategory, int> counts;
  if (config.ordering_mode == OrderingMode::kStrictPriority) {
    std::stable_sort(windows.begin(), windows.end(),
                     [](const Window& a, const Window& b) { return a.weight > b.weight; });
    std::set<std::string> claimed;
    for (const auto& w : windows) {
      int n = 0;
      for (const auto& key : w.keys) n += claimed.insert(key).second ? 1 : 0;
      counts[w.source] = n;
    }
    return counts;
  }
  for (const auto& w : windows) {
    std::set<std::string> own(w.keys.begin(), w.keys.end());
    counts[w.source] = static_cast<int>(own.size());
  }
  return counts;
}

bool first_page_windows_disjoint(const CurationConfig& config, const Corpus& corpus) {
  std::set<std::string> all;
  for (const auto& w : first_page_windows(config, corpus)) {
    std::set<std::string> own(w.keys.begin(), w.keys.end());
    for (const auto& key : own) {
      if (!all.insert(key).second) return false;
    }
  }
  return true;
}

}  // namespace braids::mock
