#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "braids/service/api_server.hpp"
#include "braids/service/feed_service.hpp"
#include "braids/service/session_store.hpp"
#include "braids/service/token_cipher.hpp"

using namespace braids::service;

int main(int argc, char** argv) {
  CLI::App app{"braids curation service"};
  std::string listen = "127.0.0.1:8080";
  std::string store_path = "braids.db";
  std::string redirect_uri;
  std::string log_level = "info";
  std::string ui_dir;
  bool secure_cookie = false;
  app.add_option("--listen", listen, "addr:port to serve on")->capture_default_str();
  app.add_option("--session-store", store_path, "SQLite file for sessions")->capture_default_str();
  app.add_option("--redirect-uri", redirect_uri,
                 "OAuth redirect URI registered with instances "
                 "(default http://<listen>/api/v1/auth/callback)");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}))
      ->capture_default_str();
  app.add_option("--ui-dir", ui_dir, "built UI bundle to serve at /");
  app.add_flag("--secure-cookie", secure_cookie, "mark the session cookie Secure");
  CLI11_PARSE(app, argc, argv);

  spdlog::set_level(spdlog::level::from_str(log_level));

  auto colon = listen.rfind(':');
  int port = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(listen);
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    std::cerr << "--listen must look like addr:port\n";
    return 2;
  }
  const auto host = listen.substr(0, colon);
  if (redirect_uri.empty()) redirect_uri = "http://" + listen + "/api/v1/auth/callback";

  const char* secret = std::getenv("BRAIDS_SECRET");
  if (!secret || !*secret) {
    spdlog::warn("BRAIDS_SECRET unset: using a random key, stored sessions will not survive a restart");
  }
  try {
    SessionStore store(store_path, secret && *secret ? TokenCipher(secret) : TokenCipher::ephemeral());
    FeedService service(store, {redirect_uri, {}, std::chrono::minutes{10}});
    ApiServer server(service, {ui_dir, secure_cookie});
    spdlog::info("listening on {} (redirect uri {})", listen, redirect_uri);
    server.listen(host, port);
  } catch (const std::exception& e) {
    spdlog::critical("{}", e.what());
    return 1;
  }
  return 0;
}
