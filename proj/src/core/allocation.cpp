#include "braids/core/allocation.hpp"

#include <stdexcept>

namespace braids {

std::vector<WeightedSource> weighted_sources(const CurationConfig& config) {
  std::vector<WeightedSource> out;
  out.reserve(3 + config.accounts.size());
  out.push_back({SourceCategory::following(), priority_weight(config.priorities.following)});
  out.push_back({SourceCategory::local(), priority_weight(config.priorities.local)});
  out.push_back({SourceCategory::trending(), priority_weight(config.priorities.trending)});
  for (const auto& account : config.accounts) {
    out.push_back({SourceCategory::account(account.handle), priority_weight(account.level)});
  }
  return out;
}

int total_weight(const CurationConfig& config) {
  int sum = 0;
  for (const auto& ws : weighted_sources(config)) sum += ws.weight;
  return sum;
}

std::map<SourceCategory, int> allocate_fetch_counts(const CurationConfig& config, int page_size) {
  if (page_size <= 0) throw std::invalid_argument("page_size must be positive");
  std::map<SourceCategory, int> counts;
  const auto sources = weighted_sources(config);
  long long sum = 0;
  for (const auto& ws : sources) sum += ws.weight;
  if (sum == 0) return counts;
  for (const auto& ws : sources) {
    if (ws.weight == 0) continue;
    counts[ws.source] = static_cast<int>(static_cast<long long>(ws.weight) * page_size / sum);
  }
  return counts;
}

}  // namespace braids
