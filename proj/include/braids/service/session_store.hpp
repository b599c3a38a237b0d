#pragma once

#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <string>

#include "braids/client/mastodon_client.hpp"
#include "braids/service/session.hpp"
#include "braids/service/token_cipher.hpp"

struct sqlite3;

namespace braids::service {

using Clock = std::function<Timestamp()>;
Timestamp system_now();

/// An authorization the user has started but not yet returned from.
struct PendingLogin {
  std::string instance;
  client::AppRegistration app;
  Timestamp created_at{};
};

struct StoreOptions {
  std::chrono::seconds session_ttl = std::chrono::hours{24 * 30};
  std::chrono::seconds login_ttl = std::chrono::minutes{10};
  Clock now = system_now;
};

/// Single-file SQLite store for sessions, pending logins and app
/// registrations. ":memory:" works for tests. All methods are thread-safe.
class SessionStore : public client::AppRegistrationCache {
 public:
  SessionStore(const std::string& path, TokenCipher cipher, StoreOptions options = {});
  ~SessionStore() override;

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  /// 128 random bits, hex.
  static std::string new_token();

  void put(const SessionState& session);
  /// nullopt for unknown or expired sessions.
  std::optional<SessionState> get(const std::string& session_id);
  void erase(const std::string& session_id);

  void put_login(const std::string& state, const PendingLogin& login);
  /// nullopt for unknown or expired states.
  std::optional<PendingLogin> find_login(const std::string& state);

  std::optional<client::AppRegistration> find(const std::string& instance,
                                              const std::string& redirect_uri) override;
  void store(const std::string& instance, const client::AppRegistration& app) override;

  Timestamp now() const { return options_.now(); }

 private:
  void exec(const char* sql);

  sqlite3* db_ = nullptr;
  TokenCipher cipher_;
  StoreOptions options_;
  std::mutex mu_;
};

}  // namespace braids::service
