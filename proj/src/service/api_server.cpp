#include "braids/service/api_server.hpp"

#include <charconv>
#include <filesystem>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "braids/core/wire.hpp"

namespace braids::service {

using nlohmann::json;

namespace {

constexpr const char* kPlaceholderPage = R"html(<!doctype html>
<html><head><meta charset="utf-8"><title>braids</title></head>
<body>
<h1>braids</h1>
<p>The UI bundle is not installed. Start the server with <code>--ui-dir</code>
pointing at the built bundle, or use the JSON API under <code>/api/v1</code>.</p>
<p><a href="/api/v1/auth/login?instance=https://mastodon.social">Log in</a></p>
</body></html>
)html";

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const json& detail = nullptr) {
  json body{{"error", message}};
  if (!detail.is_null()) body["detail"] = detail;
  send_json(res, body, status);
}

std::string session_cookie(const httplib::Request& req) {
  const auto header = req.get_header_value("Cookie");
  const std::string key = std::string(kSessionCookie) + "=";
  std::size_t pos = 0;
  while (pos < header.size()) {
    auto end = header.find(';', pos);
    if (end == std::string::npos) end = header.size();
    auto part = header.substr(pos, end - pos);
    part.erase(0, part.find_first_not_of(' '));
    if (part.starts_with(key)) return part.substr(key.size());
    pos = end + 1;
  }
  return {};
}

std::optional<bool> parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  return std::nullopt;
}

// Runs a handler, turning ServiceError into its status and anything else
// into a 500.
template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    send_error(res, e.status(), e.what(), e.detail());
  } catch (const std::exception& e) {
    spdlog::error("unhandled: {}", e.what());
    send_error(res, 500, "internal error");
  }
}

}  // namespace

ApiServer::ApiServer(FeedService& service, ApiServerOptions options)
    : service_(service), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::start(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host)
                        : (server_->bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  port_ = bound;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void ApiServer::listen(const std::string& host, int port) {
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  port_ = port;
  server_->listen_after_bind();
}

void ApiServer::stop() {
  if (server_->is_running()) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void ApiServer::install_routes() {
  auto& s = *server_;
  s.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });

  s.Get("/api/v1/healthz", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, {{"status", "ok"}});
  });

  s.Get("/api/v1/auth/login", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("instance")) throw ServiceError(400, "instance parameter is required");
      res.set_redirect(service_.begin_login(req.get_param_value("instance")));
    });
  });

  s.Get("/api/v1/auth/callback", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("state")) throw ServiceError(400, "state parameter is required");
      if (req.has_param("error")) {
        throw ServiceError(401, "authorization declined: " + req.get_param_value("error"));
      }
      auto id = service_.complete_login(req.get_param_value("code"), req.get_param_value("state"));
      std::string cookie = std::string(kSessionCookie) + "=" + id +
                           "; Path=/; HttpOnly; SameSite=Lax";
      if (options_.secure_cookie) cookie += "; Secure";
      res.set_header("Set-Cookie", cookie);
      res.set_redirect("/");
    });
  });

  s.Post("/api/v1/auth/logout", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Set-Cookie", std::string(kSessionCookie) + "=; Path=/; Max-Age=0");
    send_json(res, {{"ok", true}});
  });

  s.Get("/api/v1/feed", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      bool first_page = true;
      if (req.has_param("first_page")) {
        auto b = parse_bool(req.get_param_value("first_page"));
        if (!b) throw ServiceError(400, "first_page must be true or false");
        first_page = *b;
      }
      std::optional<std::uint64_t> seed;
      if (req.has_param("seed")) {
        const auto text = req.get_param_value("seed");
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
          throw ServiceError(400, "seed must be an unsigned 64-bit decimal");
        }
        seed = v;
      }
      send_json(res, wire::to_json(service_.get_feed(session_cookie(req), first_page, seed)));
    });
  });

  s.Get("/api/v1/config", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, wire::to_json(service_.get_config(session_cookie(req)))); });
  });

  s.Put("/api/v1/config", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto body = json::parse(req.body, nullptr, false);
      if (body.is_discarded()) throw ServiceError(400, "body is not JSON");
      auto parsed = wire::config_from_json(body);
      if (!parsed.config) {
        json issues = json::array();
        for (const auto& i : parsed.issues) {
          issues.push_back({{"field", i.field}, {"message", i.message}});
        }
        throw ServiceError(422, "invalid config", issues);
      }
      auto ack = service_.put_config(session_cookie(req), *parsed.config);
      send_json(res, {{"ok", true}, {"unresolved", ack.unresolved}});
    });
  });

  namespace fs = std::filesystem;
  if (!options_.ui_dir.empty() && fs::is_directory(options_.ui_dir)) {
    s.set_mount_point("/", options_.ui_dir);
  } else {
    if (!options_.ui_dir.empty()) spdlog::warn("ui dir {} not found, serving placeholder", options_.ui_dir);
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
}

}  // namespace braids::service
