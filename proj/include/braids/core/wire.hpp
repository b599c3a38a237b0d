#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "braids/core/types.hpp"

namespace braids::wire {

// JSON shapes served by the curation API.
//
//   FeedPage  {posts: [Post], ran_out, seed, warnings: [string]}
//   Post      {id, author, created_at, html, badge, badge_label, source, boost_of}
//   Config    {priorities: {following, local, trending},
//              accounts: [{handle, level}], filters: [string], ordering_mode}
//
// The seed is a decimal string: a 64-bit value does not survive a round trip
// through a JavaScript number.

nlohmann::json to_json(const AnnotatedPost& post);
nlohmann::json to_json(const FeedPage& page);
nlohmann::json to_json(const CurationConfig& config);

/// Inverse of to_json(FeedPage) for the fields the wire carries. Throws
/// nlohmann::json::exception or std::invalid_argument on malformed input.
FeedPage feed_page_from_json(const nlohmann::json& j);

struct ConfigParse {
  std::optional<CurationConfig> config;
  std::vector<ConfigIssue> issues;
};

/// Parses and validates. On any issue `config` is empty. Missing fields take
/// the defaults of CurationConfig.
ConfigParse config_from_json(const nlohmann::json& j);

/// Stable byte representation (sorted keys, no whitespace).
std::string canonical(const FeedPage& page);

}  // namespace braids::wire
