#include "braids/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace braids {

namespace {

std::string trim(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

bool is_handle_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

}  // namespace

std::string_view to_string(PriorityLevel level) {
  switch (level) {
    case PriorityLevel::kNone: return "none";
    case PriorityLevel::kLow: return "low";
    case PriorityLevel::kMedium: return "medium";
    case PriorityLevel::kHigh: return "high";
  }
  return "none";
}

std::optional<PriorityLevel> parse_priority_level(std::string_view text) {
  if (text == "none") return PriorityLevel::kNone;
  if (text == "low") return PriorityLevel::kLow;
  if (text == "medium") return PriorityLevel::kMedium;
  if (text == "high") return PriorityLevel::kHigh;
  return std::nullopt;
}

SourceCategory SourceCategory::account(std::string_view handle) {
  return SourceCategory{SourceKind::kPrioritizedAccount, normalize_handle(handle)};
}

std::string SourceCategory::to_string() const {
  switch (kind_) {
    case SourceKind::kFollowingAndHashtags: return "following";
    case SourceKind::kLocal: return "local";
    case SourceKind::kTrending: return "trending";
    case SourceKind::kPrioritizedAccount: return "account:" + handle_;
  }
  return {};
}

std::optional<SourceCategory> SourceCategory::parse(std::string_view text) {
  if (text == "following") return following();
  if (text == "local") return local();
  if (text == "trending") return trending();
  constexpr std::string_view kPrefix = "account:";
  if (text.starts_with(kPrefix) && text.size() > kPrefix.size()) {
    return account(text.substr(kPrefix.size()));
  }
  return std::nullopt;
}

std::string_view badge_code(Badge badge) {
  switch (badge) {
    case Badge::kUserYouFollow: return "user_you_follow";
    case Badge::kHashtagYouFollow: return "hashtag_you_follow";
    case Badge::kTrendingPost: return "trending_post";
    case Badge::kLocalPost: return "local_post";
    case Badge::kPrioritizedAccount: return "prioritized_account";
  }
  return {};
}

std::string_view badge_label(Badge badge) {
  switch (badge) {
    case Badge::kUserYouFollow: return "Users you follow";
    case Badge::kHashtagYouFollow: return "Hashtag you follow";
    case Badge::kTrendingPost: return "Trending post";
    case Badge::kLocalPost: return "Local post";
    case Badge::kPrioritizedAccount: return "Prioritized account";
  }
  return {};
}

std::optional<Badge> parse_badge(std::string_view code) {
  for (Badge b : {Badge::kUserYouFollow, Badge::kHashtagYouFollow, Badge::kTrendingPost,
                  Badge::kLocalPost, Badge::kPrioritizedAccount}) {
    if (badge_code(b) == code) return b;
  }
  return std::nullopt;
}

std::string_view to_string(OrderingMode mode) {
  return mode == OrderingMode::kStrictPriority ? "strict_priority" : "weighted_interleave";
}

std::optional<OrderingMode> parse_ordering_mode(std::string_view text) {
  if (text == "weighted_interleave") return OrderingMode::kWeightedInterleave;
  if (text == "strict_priority") return OrderingMode::kStrictPriority;
  return std::nullopt;
}

std::string normalize_handle(std::string_view handle) {
  std::string out = trim(handle);
  if (!out.empty() && out.front() == '@') out.erase(0, 1);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_well_formed_handle(std::string_view normalized) {
  auto at = normalized.find('@');
  auto user = normalized.substr(0, at);
  if (user.empty() || !std::all_of(user.begin(), user.end(), is_handle_char)) return false;
  if (at == std::string_view::npos) return true;
  auto domain = normalized.substr(at + 1);
  if (domain.empty() || domain.front() == '.' || domain.back() == '.') return false;
  return std::all_of(domain.begin(), domain.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-';
  });
}

std::vector<ConfigIssue> validate(const CurationConfig& config) {
  std::vector<ConfigIssue> issues;
  std::set<std::string> handles;
  for (std::size_t i = 0; i < config.accounts.size(); ++i) {
    const auto& account = config.accounts[i];
    std::string field = "accounts[" + std::to_string(i) + "]";
    std::string handle = normalize_handle(account.handle);
    if (!is_well_formed_handle(handle)) {
      issues.push_back({field + ".handle", "malformed account handle '" + account.handle + "'"});
    } else if (!handles.insert(handle).second) {
      issues.push_back({field + ".handle", "duplicate account handle '" + handle + "'"});
    }
    if (account.level == PriorityLevel::kNone) {
      issues.push_back({field + ".level", "prioritized accounts need a level above none"});
    }
  }
  for (std::size_t i = 0; i < config.filters.size(); ++i) {
    if (trim(config.filters[i]).empty()) {
      issues.push_back({"filters[" + std::to_string(i) + "]", "filter phrase is empty"});
    }
  }
  return issues;
}

}  // namespace braids
