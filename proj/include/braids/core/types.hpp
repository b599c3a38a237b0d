#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "braids/core/timestamp.hpp"

namespace braids {

/// Four-stop ordinal setting a user assigns to each data source.
enum class PriorityLevel { kNone, kLow, kMedium, kHigh };

/// Wire codes: "none", "low", "medium", "high".
std::string_view to_string(PriorityLevel level);
std::optional<PriorityLevel> parse_priority_level(std::string_view text);

enum class SourceKind {
  kFollowingAndHashtags,
  kLocal,
  kTrending,
  kPrioritizedAccount,
};

/// The data source a post was drawn from. Prioritized accounts carry a
/// normalized, fully qualified handle ("user@domain"); the other kinds carry
/// nothing. The defaulted ordering (kind, then handle) is the canonical
/// category order used for tie-breaking.
class SourceCategory {
 public:
  static SourceCategory following() { return SourceCategory{SourceKind::kFollowingAndHashtags, {}}; }
  static SourceCategory local() { return SourceCategory{SourceKind::kLocal, {}}; }
  static SourceCategory trending() { return SourceCategory{SourceKind::kTrending, {}}; }
  static SourceCategory account(std::string_view handle);

  SourceKind kind() const { return kind_; }
  const std::string& account_handle() const { return handle_; }

  /// Following and prioritized accounts can run dry; Local and Trending can't.
  bool is_finite() const {
    return kind_ == SourceKind::kFollowingAndHashtags || kind_ == SourceKind::kPrioritizedAccount;
  }

  /// "following", "local", "trending" or "account:user@domain".
  std::string to_string() const;
  static std::optional<SourceCategory> parse(std::string_view text);

  auto operator<=>(const SourceCategory&) const = default;

 private:
  SourceCategory(SourceKind kind, std::string handle) : kind_(kind), handle_(std::move(handle)) {}

  SourceKind kind_;
  std::string handle_;
};

struct InteractionCounts {
  std::int64_t boosts = 0;
  std::int64_t favorites = 0;

  bool operator==(const InteractionCounts&) const = default;
};

struct Post {
  std::string id;
  std::string author_id;
  std::string author_handle;
  Timestamp created_at{};
  std::string content_text;
  std::string content_html;
  bool is_boost = false;
  std::optional<std::string> boosted_id;
  std::vector<std::string> hashtags;
  InteractionCounts counts;

  bool operator==(const Post&) const = default;
};

enum class Badge {
  kUserYouFollow,
  kHashtagYouFollow,
  kTrendingPost,
  kLocalPost,
  kPrioritizedAccount,
};

/// Machine code used on the wire ("user_you_follow", ...).
std::string_view badge_code(Badge badge);
/// Human label shown next to a post ("Users you follow", ...).
std::string_view badge_label(Badge badge);
std::optional<Badge> parse_badge(std::string_view code);

struct AnnotatedPost {
  Post post;
  Badge badge = Badge::kLocalPost;
  SourceCategory source = SourceCategory::local();

  bool operator==(const AnnotatedPost&) const = default;
};

enum class OrderingMode { kWeightedInterleave, kStrictPriority };

std::string_view to_string(OrderingMode mode);
std::optional<OrderingMode> parse_ordering_mode(std::string_view text);

struct FeedPriorities {
  PriorityLevel following = PriorityLevel::kHigh;
  PriorityLevel local = PriorityLevel::kLow;
  PriorityLevel trending = PriorityLevel::kLow;

  bool operator==(const FeedPriorities&) const = default;
};

struct PrioritizedAccount {
  std::string handle;
  PriorityLevel level = PriorityLevel::kLow;

  bool operator==(const PrioritizedAccount&) const = default;
};

/// A default-constructed config is the out-of-the-box setting: Following
/// High, Local Low, Trending Low, no accounts, no filters.
struct CurationConfig {
  FeedPriorities priorities;
  std::vector<PrioritizedAccount> accounts;
  std::vector<std::string> filters;
  OrderingMode ordering_mode = OrderingMode::kWeightedInterleave;

  bool operator==(const CurationConfig&) const = default;
};

struct ConfigIssue {
  std::string field;
  std::string message;
};

/// Returns every invariant violation; empty means the config is valid.
std::vector<ConfigIssue> validate(const CurationConfig& config);

/// Strips leading '@' and lowercases. Does not check the shape.
std::string normalize_handle(std::string_view handle);

/// True for "user", "user@domain" (after normalization).
bool is_well_formed_handle(std::string_view normalized);

inline constexpr int kPageSize = 40;

struct FeedPage {
  std::vector<AnnotatedPost> posts;
  bool ran_out = false;
  int page_size_requested = kPageSize;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  bool operator==(const FeedPage&) const = default;
};

using FollowSet = std::unordered_set<std::string>;
using SeenSet = std::unordered_set<std::string>;

}  // namespace braids
