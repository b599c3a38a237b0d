#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "braids/client/mastodon_client.hpp"
#include "braids/core/types.hpp"
#include "braids/service/session_store.hpp"

namespace braids::service {

/// An error with the HTTP status the API should answer with.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& message, nlohmann::json detail = nullptr)
      : std::runtime_error(message), status_(status), detail_(std::move(detail)) {}
  int status() const { return status_; }
  const nlohmann::json& detail() const { return detail_; }

 private:
  int status_;
  nlohmann::json detail_;
};

struct FeedServiceOptions {
  std::string redirect_uri;
  client::ClientOptions client;
  std::chrono::seconds follow_cache_ttl = std::chrono::minutes{10};
};

struct ConfigAck {
  /// Prioritized handles the instance could not resolve; they keep their
  /// weight but contribute no posts.
  std::vector<std::string> unresolved;
};

/// Sessions, configuration and the paged unified feed. Calls for one
/// session are serialized; different sessions run concurrently.
class FeedService {
 public:
  FeedService(SessionStore& store, FeedServiceOptions options);

  /// Registers with the instance if needed and returns its authorization
  /// URL. Errors: 400 bad instance URL, 502 instance unreachable.
  std::string begin_login(const std::string& instance);

  /// Returns the new session id. Errors: 400 unknown or expired state,
  /// 401 code refused, 502 instance unreachable.
  std::string complete_login(const std::string& code, const std::string& state);

  /// One page of the unified feed. first_page resets cursors and seen ids.
  /// `seed` replays a recorded page; without it a fresh seed is drawn.
  /// Errors: 401 unknown session or token refused, 502 every source failed.
  FeedPage get_feed(const std::string& session_id, bool first_page,
                    std::optional<std::uint64_t> seed = std::nullopt);

  /// Errors: 401 unknown session, 422 invalid config (detail lists issues).
  ConfigAck put_config(const std::string& session_id, const CurationConfig& config);
  CurationConfig get_config(const std::string& session_id);

  /// Creates a session directly from already-issued credentials.
  std::string adopt_credentials(const client::InstanceCredentials& credentials);

 private:
  std::shared_ptr<std::mutex> session_mutex(const std::string& session_id);
  SessionState load(const std::string& session_id);

  SessionStore& store_;
  FeedServiceOptions options_;
  std::mutex locks_mu_;
  std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

}  // namespace braids::service
