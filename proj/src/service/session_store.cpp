#include "braids/service/session_store.hpp"

#include <stdexcept>

#include <sodium.h>
#include <spdlog/spdlog.h>
#include <sqlite3.h>

namespace braids::service {

using nlohmann::json;

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS sessions (
  id TEXT PRIMARY KEY,
  body TEXT NOT NULL,
  created_ms INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS logins (
  state TEXT PRIMARY KEY,
  body TEXT NOT NULL,
  created_ms INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS apps (
  instance TEXT NOT NULL,
  redirect_uri TEXT NOT NULL,
  client_id TEXT NOT NULL,
  client_secret TEXT NOT NULL,
  PRIMARY KEY (instance, redirect_uri)
);
)sql";

std::int64_t millis(Timestamp t) { return t.time_since_epoch().count(); }

// Prepared statement with RAII finalize and positional text/int binds.
class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) fail("prepare");
  }
  ~Statement() { sqlite3_finalize(stmt_); }

  Statement& bind(int i, const std::string& text) {
    sqlite3_bind_text(stmt_, i, text.c_str(), static_cast<int>(text.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(int i, std::int64_t value) {
    sqlite3_bind_int64(stmt_, i, value);
    return *this;
  }

  /// True while a row is available.
  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc != SQLITE_DONE) fail("step");
    return false;
  }

  std::string text(int col) const {
    auto* p = sqlite3_column_text(stmt_, col);
    return p ? reinterpret_cast<const char*>(p) : "";
  }
  std::int64_t int64(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  [[noreturn]] void fail(const char* what) {
    throw std::runtime_error(std::string("sqlite ") + what + ": " + sqlite3_errmsg(db_));
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace

Timestamp system_now() {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

SessionStore::SessionStore(const std::string& path, TokenCipher cipher, StoreOptions options)
    : cipher_(std::move(cipher)), options_(std::move(options)) {
  if (sqlite3_open(path.c_str(), &db_) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw std::runtime_error("cannot open session store " + path + ": " + msg);
  }
  exec("PRAGMA journal_mode=WAL;");
  exec(kSchema);
}

SessionStore::~SessionStore() { sqlite3_close(db_); }

void SessionStore::exec(const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw std::runtime_error("sqlite: " + msg);
  }
}

std::string SessionStore::new_token() {
  if (sodium_init() < 0) throw std::runtime_error("libsodium failed to initialise");
  unsigned char raw[16];
  randombytes_buf(raw, sizeof raw);
  char hex[sizeof raw * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, raw, sizeof raw);
  return hex;
}

void SessionStore::put(const SessionState& session) {
  auto body = to_json(session, cipher_).dump();
  std::lock_guard lock(mu_);
  Statement(db_, "INSERT OR REPLACE INTO sessions (id, body, created_ms) VALUES (?, ?, ?)")
      .bind(1, session.session_id)
      .bind(2, body)
      .bind(3, millis(session.created_at))
      .step();
}

std::optional<SessionState> SessionStore::get(const std::string& session_id) {
  std::string body;
  {
    std::lock_guard lock(mu_);
    Statement st(db_, "SELECT body, created_ms FROM sessions WHERE id = ?");
    st.bind(1, session_id);
    if (!st.step()) return std::nullopt;
    auto created = Timestamp{std::chrono::milliseconds{st.int64(1)}};
    if (options_.now() - created > options_.session_ttl) return std::nullopt;
    body = st.text(0);
  }
  try {
    return session_from_json(json::parse(body), cipher_);
  } catch (const std::exception& e) {
    // Most likely BRAIDS_SECRET changed since the session was written.
    spdlog::warn("discarding unreadable session record: {}", e.what());
    return std::nullopt;
  }
}

void SessionStore::erase(const std::string& session_id) {
  std::lock_guard lock(mu_);
  Statement(db_, "DELETE FROM sessions WHERE id = ?").bind(1, session_id).step();
}

void SessionStore::put_login(const std::string& state, const PendingLogin& login) {
  json body{{"instance", login.instance},
            {"client_id", login.app.client_id},
            {"client_secret", cipher_.seal(login.app.client_secret)},
            {"redirect_uri", login.app.redirect_uri}};
  std::lock_guard lock(mu_);
  Statement(db_, "DELETE FROM logins WHERE created_ms < ?")
      .bind(1, millis(options_.now() - options_.login_ttl))
      .step();
  Statement(db_, "INSERT OR REPLACE INTO logins (state, body, created_ms) VALUES (?, ?, ?)")
      .bind(1, state)
      .bind(2, body.dump())
      .bind(3, millis(login.created_at))
      .step();
}

std::optional<PendingLogin> SessionStore::find_login(const std::string& state) {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT body, created_ms FROM logins WHERE state = ?");
  st.bind(1, state);
  if (!st.step()) return std::nullopt;
  PendingLogin login;
  login.created_at = Timestamp{std::chrono::milliseconds{st.int64(1)}};
  if (options_.now() - login.created_at > options_.login_ttl) return std::nullopt;
  auto body = json::parse(st.text(0), nullptr, false);
  if (!body.is_object()) return std::nullopt;
  auto secret = cipher_.open(body.value("client_secret", ""));
  if (!secret) return std::nullopt;
  login.instance = body.value("instance", "");
  login.app = {body.value("client_id", ""), *secret, body.value("redirect_uri", "")};
  return login;
}

std::optional<client::AppRegistration> SessionStore::find(const std::string& instance,
                                                          const std::string& redirect_uri) {
  std::lock_guard lock(mu_);
  Statement st(db_,
               "SELECT client_id, client_secret FROM apps WHERE instance = ? AND redirect_uri = ?");
  st.bind(1, instance).bind(2, redirect_uri);
  if (!st.step()) return std::nullopt;
  auto secret = cipher_.open(st.text(1));
  if (!secret) return std::nullopt;
  return client::AppRegistration{st.text(0), *secret, redirect_uri};
}

void SessionStore::store(const std::string& instance, const client::AppRegistration& app) {
  auto sealed = cipher_.seal(app.client_secret);
  std::lock_guard lock(mu_);
  Statement(db_,
            "INSERT OR REPLACE INTO apps (instance, redirect_uri, client_id, client_secret) "
            "VALUES (?, ?, ?, ?)")
      .bind(1, instance)
      .bind(2, app.redirect_uri)
      .bind(3, app.client_id)
      .bind(4, sealed)
      .step();
}

}  // namespace braids::service
