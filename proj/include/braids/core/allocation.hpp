#pragma once

#include <map>
#include <vector>

#include "braids/core/types.hpp"

namespace braids {

/// None→0, Low→1, Medium→2, High→3.
constexpr int priority_weight(PriorityLevel level) {
  switch (level) {
    case PriorityLevel::kNone: return 0;
    case PriorityLevel::kLow: return 1;
    case PriorityLevel::kMedium: return 2;
    case PriorityLevel::kHigh: return 3;
  }
  return 0;
}

struct WeightedSource {
  SourceCategory source;
  int weight = 0;
};

/// Every configured source with its weight, zero weights included, in the
/// canonical order: Following, Local, Trending, then accounts in config order.
std::vector<WeightedSource> weighted_sources(const CurationConfig& config);

/// Sum of all weights, feed sources and prioritized accounts alike.
int total_weight(const CurationConfig& config);

/// Number of posts to request from each source: floor(w * page_size / S).
/// Zero-weight sources are absent; an all-None config yields an empty map.
/// The counts may sum to less than page_size; the remainder is not handed
/// out. Throws std::invalid_argument when page_size <= 0.
std::map<SourceCategory, int> allocate_fetch_counts(const CurationConfig& config, int page_size);

}  // namespace braids
