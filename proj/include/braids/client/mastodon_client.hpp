#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "braids/client/errors.hpp"
#include "braids/core/types.hpp"

namespace braids::client {

/// The only scope this client ever requests.
inline constexpr std::string_view kReadScope = "read";

struct AppRegistration {
  std::string client_id;
  std::string client_secret;
  std::string redirect_uri;
};

struct InstanceCredentials {
  std::string instance_base_url;
  std::string client_id;
  std::string client_secret;
  std::string redirect_uri;
  std::optional<std::string> access_token;
};

/// Where the next page of a source starts. Trending pages by offset; every
/// other source pages by max_id.
struct PageCursor {
  SourceCategory source = SourceCategory::following();
  std::optional<std::string> max_id;
  std::optional<int> offset;

  static PageCursor start(const SourceCategory& source);
  bool operator==(const PageCursor&) const = default;
};

struct TimelinePage {
  std::vector<Post> posts;
  PageCursor next;
};

struct ClientOptions {
  std::chrono::milliseconds timeout{10'000};
  int max_rate_limit_retries = 2;
  /// Used for retry-after waits; tests substitute a recorder.
  std::function<void(std::chrono::milliseconds)> sleep;
  std::string client_name = "braids";
  std::string website;
};

/// Registrations keyed by (instance, redirect_uri). Implementations must be
/// safe to call from several threads.
class AppRegistrationCache {
 public:
  virtual ~AppRegistrationCache() = default;
  virtual std::optional<AppRegistration> find(const std::string& instance,
                                              const std::string& redirect_uri) = 0;
  virtual void store(const std::string& instance, const AppRegistration& app) = 0;
};

class InMemoryAppCache : public AppRegistrationCache {
 public:
  std::optional<AppRegistration> find(const std::string& instance,
                                      const std::string& redirect_uri) override;
  void store(const std::string& instance, const AppRegistration& app) override;

 private:
  std::mutex mu_;
  std::map<std::pair<std::string, std::string>, AppRegistration> apps_;
};

/// "https://Example.social/" → "https://example.social". Throws
/// PreconditionError for anything that is not an http(s) URL.
std::string normalize_instance_url(std::string_view url);

/// POST /api/v1/apps with scope "read".
AppRegistration register_app(const std::string& instance_base_url, const std::string& redirect_uri,
                             const ClientOptions& options = {});

/// The instance's /oauth/authorize URL for the authorization-code flow.
std::string authorization_url(const std::string& instance_base_url, const AppRegistration& app,
                              const std::string& state);

struct AuthorizationStart {
  std::string url;
  AppRegistration app;
};

/// Registers the app on first use per (instance, redirect_uri), then builds
/// the authorization URL.
AuthorizationStart begin_authorization(const std::string& instance_base_url,
                                       const std::string& redirect_uri, const std::string& state,
                                       AppRegistrationCache& cache,
                                       const ClientOptions& options = {});

/// Read-only client for one Mastodon-compatible instance. Not mutated after
/// exchange_code, so one authenticated client may serve concurrent fetches.
class MastodonClient {
 public:
  explicit MastodonClient(InstanceCredentials credentials, ClientOptions options = {});

  const InstanceCredentials& credentials() const { return credentials_; }
  const std::string& instance_host() const { return host_; }

  /// POST /oauth/token. Stores and returns the bearer token.
  std::string exchange_code(const std::string& code);

  TimelinePage fetch_home(const PageCursor& cursor, int limit) const;
  TimelinePage fetch_local(const PageCursor& cursor, int limit) const;
  TimelinePage fetch_trending(const PageCursor& cursor, int limit) const;
  TimelinePage fetch_account_statuses(const std::string& account_id, const PageCursor& cursor,
                                      int limit) const;

  /// Account id on this instance for "user@domain" or a local "user".
  std::string resolve_account(const std::string& handle) const;

  /// Subset of `author_ids` the session user follows; batched 40 per call.
  std::set<std::string> check_follows(const std::vector<std::string>& author_ids) const;

 private:
  nlohmann::json get_json(const std::string& path,
                          const std::multimap<std::string, std::string>& params) const;
  TimelinePage fetch_by_max_id(const std::string& path,
                               std::multimap<std::string, std::string> params,
                               const PageCursor& cursor, int limit) const;

  InstanceCredentials credentials_;
  ClientOptions options_;
  std::string host_;
};

}  // namespace braids::client
