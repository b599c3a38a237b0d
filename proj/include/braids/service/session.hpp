#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "braids/client/mastodon_client.hpp"
#include "braids/core/types.hpp"
#include "braids/service/token_cipher.hpp"

namespace braids::service {

struct FollowEntry {
  std::string handle;
  bool following = false;
  Timestamp checked_at{};

  bool operator==(const FollowEntry&) const = default;
};

/// Everything the service keeps per login. Cursors and seen_ids describe
/// the feed the user is currently scrolling and are reset together.
struct SessionState {
  std::string session_id;
  client::InstanceCredentials credentials;
  CurationConfig config;
  std::map<SourceCategory, client::PageCursor> cursors;
  SeenSet seen_ids;
  /// Keyed by author id.
  std::map<std::string, FollowEntry> follow_cache;
  /// Normalized handle → account id on the session's instance.
  std::map<std::string, std::string> account_ids;
  Timestamp created_at{};

  void reset_feed() {
    cursors.clear();
    seen_ids.clear();
  }
};

/// Secrets (client secret, access token) are sealed with `cipher`.
nlohmann::json to_json(const SessionState& s, const TokenCipher& cipher);
/// Throws std::invalid_argument if the record is malformed or its secrets
/// do not open under `cipher`.
SessionState session_from_json(const nlohmann::json& j, const TokenCipher& cipher);

}  // namespace braids::service
