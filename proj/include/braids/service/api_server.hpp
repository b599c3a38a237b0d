#pragma once

#include <memory>
#include <string>
#include <thread>

#include "braids/service/feed_service.hpp"

namespace httplib {
class Server;
}

namespace braids::service {

inline constexpr const char* kSessionCookie = "braids_session";

struct ApiServerOptions {
  /// Directory holding the built UI bundle; empty or missing serves a
  /// placeholder page at /.
  std::string ui_dir;
  /// Adds "Secure" to the session cookie; turn on behind https.
  bool secure_cookie = false;
};

/// The /api/v1 JSON endpoints plus static UI serving.
class ApiServer {
 public:
  ApiServer(FeedService& service, ApiServerOptions options = {});
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Serves on a background thread; port 0 picks a free one. Returns the
  /// bound port, throws std::runtime_error if binding fails.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks until stop() is called from another thread.
  void listen(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

 private:
  void install_routes();

  FeedService& service_;
  ApiServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace braids::service
