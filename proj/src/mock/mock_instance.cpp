#include "braids/mock/mock_instance.hpp"

#include <algorithm>
#include <stdexcept>

#include <httplib.h>

namespace braids::mock {

using nlohmann::json;

namespace {

constexpr int kDefaultLimit = 20;
constexpr int kMaxLimit = 40;

int limit_param(const httplib::Request& req) {
  if (!req.has_param("limit")) return kDefaultLimit;
  try {
    return std::clamp(std::stoi(req.get_param_value("limit")), 1, kMaxLimit);
  } catch (const std::exception&) {
    return kDefaultLimit;
  }
}

std::optional<std::string> max_id_param(const httplib::Request& req) {
  if (!req.has_param("max_id") || req.get_param_value("max_id").empty()) return std::nullopt;
  return req.get_param_value("max_id");
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& error,
                const std::string& description = {}) {
  json body{{"error", error}};
  if (!description.empty()) body["error_description"] = description;
  send_json(res, body, status);
}

json account_json(const CorpusAccount& a, const std::string& instance_domain) {
  const bool local = a.domain() == instance_domain;
  return {{"id", a.id},
          {"username", a.username()},
          {"acct", local ? a.username() : a.handle},
          {"display_name", a.username()},
          {"url", "https://" + a.domain() + "/@" + a.username()}};
}

json status_json(const Corpus& corpus, const CorpusPost& p) {
  const auto* author = corpus.find_account(p.account_id);
  json tags = json::array();
  for (const auto& t : p.tags) {
    tags.push_back({{"name", t}, {"url", "https://" + corpus.domain + "/tags/" + t}});
  }
  json j{{"id", p.id},
         {"created_at", format_timestamp(p.created_at)},
         {"visibility", "public"},
         {"uri", "https://" + (author ? author->domain() : corpus.domain) + "/statuses/" + p.id},
         {"account", author ? account_json(*author, corpus.domain) : json(nullptr)},
         {"reblog", nullptr},
         {"content", p.boost_of ? "" : p.content_html},
         {"tags", p.boost_of ? json::array() : tags},
         {"reblogs_count", p.boost_of ? 0 : p.boosts},
         {"favourites_count", p.boost_of ? 0 : p.favorites}};
  if (p.boost_of) {
    if (const auto* original = corpus.find_post(*p.boost_of)) {
      j["reblog"] = status_json(corpus, *original);
    }
  }
  return j;
}

json statuses_json(const Corpus& corpus, const std::vector<const CorpusPost*>& posts) {
  json arr = json::array();
  for (const auto* p : posts) arr.push_back(status_json(corpus, *p));
  return arr;
}

}  // namespace

MockInstance::MockInstance(Corpus corpus)
    : corpus_(std::move(corpus)), server_(std::make_unique<httplib::Server>()) {
  corpus_.validate();
  server_->new_task_queue = [] { return new httplib::ThreadPool(1); };
  // httplib's default also sets SO_REUSEPORT, which lets two instances
  // share a port silently.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  install_routes();
}

MockInstance::~MockInstance() { stop(); }

int MockInstance::start(int port) {
  int bound = port == 0 ? server_->bind_to_any_port("127.0.0.1")
                        : (server_->bind_to_port("127.0.0.1", port) ? port : -1);
  if (bound <= 0) throw std::runtime_error("mock instance cannot bind port " + std::to_string(port));
  port_ = bound;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void MockInstance::serve_forever(const std::string& host, int port) {
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("mock instance cannot bind " + host + ":" + std::to_string(port));
  }
  port_ = port;
  server_->listen_after_bind();
}

void MockInstance::stop() {
  if (server_->is_running()) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockInstance::base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

std::vector<RecordedRequest> MockInstance::request_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

int MockInstance::call_count(const std::string& path) const {
  std::lock_guard lock(mu_);
  auto it = calls_.find(path);
  return it == calls_.end() ? 0 : it->second;
}

void MockInstance::clear_log() {
  std::lock_guard lock(mu_);
  log_.clear();
}

void MockInstance::record(const httplib::Request& req, const httplib::Response& res) {
  std::lock_guard lock(mu_);
  RecordedRequest r;
  r.method = req.method;
  r.path = req.path;
  r.params = {req.params.begin(), req.params.end()};
  r.authorization = req.get_header_value("Authorization");
  r.status = res.status;
  log_.push_back(std::move(r));
}

bool MockInstance::inject_fault(const httplib::Request& req, httplib::Response& res) {
  std::lock_guard lock(mu_);
  const int n = ++calls_[req.path];
  for (const auto& f : corpus_.faults) {
    if (f.endpoint != req.path || n < f.on_call || n >= f.on_call + f.times) continue;
    if (f.status == 429) res.set_header("Retry-After", std::to_string(f.retry_after));
    send_error(res, f.status, "scripted fault");
    return true;
  }
  return false;
}

bool MockInstance::authorized(const httplib::Request& req) const {
  if (corpus_.oauth.token.empty()) return false;
  return req.get_header_value("Authorization") == "Bearer " + corpus_.oauth.token;
}

void MockInstance::install_routes() {
  auto& s = *server_;
  s.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    return inject_fault(req, res) ? httplib::Server::HandlerResponse::Handled
                                  : httplib::Server::HandlerResponse::Unhandled;
  });
  // Recorded before the response is written, so a client that has its
  // answer can rely on the log already containing the request.
  s.set_post_routing_handler(
      [this](const httplib::Request& req, httplib::Response& res) { record(req, res); });

  s.Post("/api/v1/apps", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("client_name") || !req.has_param("redirect_uris")) {
      send_error(res, 422, "client_name and redirect_uris are required");
      return;
    }
    std::lock_guard lock(mu_);
    const auto n = std::to_string(apps_.size() + 1);
    App app{"secret-" + n, req.get_param_value("redirect_uris")};
    apps_["client-" + n] = app;
    send_json(res, {{"id", n},
                    {"name", req.get_param_value("client_name")},
                    {"client_id", "client-" + n},
                    {"client_secret", app.client_secret},
                    {"redirect_uri", app.redirect_uri}});
  });

  // Stands in for the user's browser consent: approves at once and hands
  // out the next unissued scripted code.
  s.Get("/oauth/authorize", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mu_);
    auto app = apps_.find(req.get_param_value("client_id"));
    if (app == apps_.end() || app->second.redirect_uri != req.get_param_value("redirect_uri")) {
      send_error(res, 400, "invalid_client");
      return;
    }
    if (next_code_ >= corpus_.oauth.valid_codes.size()) {
      send_error(res, 400, "access_denied", "no scripted codes left");
      return;
    }
    std::string location = app->second.redirect_uri +
                           (app->second.redirect_uri.find('?') == std::string::npos ? "?" : "&") +
                           "code=" + corpus_.oauth.valid_codes[next_code_++];
    if (req.has_param("state")) {
      location += "&state=" + httplib::detail::encode_query_param(req.get_param_value("state"));
    }
    res.set_redirect(location);
  });

  s.Post("/oauth/token", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mu_);
    if (req.get_param_value("grant_type") != "authorization_code") {
      send_error(res, 400, "unsupported_grant_type");
      return;
    }
    auto app = apps_.find(req.get_param_value("client_id"));
    if (app == apps_.end() || app->second.client_secret != req.get_param_value("client_secret")) {
      send_error(res, 401, "invalid_client");
      return;
    }
    if (app->second.redirect_uri != req.get_param_value("redirect_uri")) {
      send_error(res, 400, "invalid_grant", "redirect_uri mismatch");
      return;
    }
    const auto code = req.get_param_value("code");
    const auto& codes = corpus_.oauth.valid_codes;
    if (std::find(codes.begin(), codes.end(), code) == codes.end() || used_codes_.contains(code)) {
      send_error(res, 400, "invalid_grant", "code is invalid or already used");
      return;
    }
    used_codes_.insert(code);
    send_json(res, {{"access_token", corpus_.oauth.token},
                    {"token_type", "Bearer"},
                    {"scope", corpus_.oauth.granted_scope},
                    {"created_at", 0}});
  });

  s.Get("/api/v1/timelines/home", [this](const httplib::Request& req, httplib::Response& res) {
    if (!authorized(req)) return send_error(res, 401, "The access token is invalid");
    send_json(res, statuses_json(corpus_, page_after(corpus_, home_timeline(corpus_),
                                                     max_id_param(req), limit_param(req))));
  });

  s.Get("/api/v1/timelines/public", [this](const httplib::Request& req, httplib::Response& res) {
    if (corpus_.require_auth_for_public && !authorized(req)) {
      return send_error(res, 401, "This API requires an authenticated user");
    }
    const bool local = req.get_param_value("local") == "true";
    auto timeline = local ? local_timeline(corpus_) : federated_timeline(corpus_);
    send_json(res, statuses_json(corpus_, page_after(corpus_, timeline, max_id_param(req),
                                                     limit_param(req))));
  });

  s.Get("/api/v1/trends/statuses", [this](const httplib::Request& req, httplib::Response& res) {
    int offset = 0;
    try {
      offset = req.has_param("offset") ? std::max(0, std::stoi(req.get_param_value("offset"))) : 0;
    } catch (const std::exception&) {
      return send_error(res, 400, "bad offset");
    }
    auto all = trending_timeline(corpus_);
    std::vector<const CorpusPost*> page;
    for (int i = offset; i < static_cast<int>(all.size()) &&
                         static_cast<int>(page.size()) < limit_param(req);
         ++i) {
      page.push_back(all[i]);
    }
    send_json(res, statuses_json(corpus_, page));
  });

  s.Get(R"(/api/v1/accounts/([^/]+)/statuses)",
        [this](const httplib::Request& req, httplib::Response& res) {
          const auto* account = corpus_.find_account(req.matches[1]);
          if (!account) return send_error(res, 404, "Record not found");
          if (account->suspended) return send_error(res, 410, "Account is suspended");
          send_json(res, statuses_json(corpus_, page_after(corpus_, account_timeline(corpus_, account->id),
                                                           max_id_param(req), limit_param(req))));
        });

  s.Get("/api/v1/accounts/relationships", [this](const httplib::Request& req, httplib::Response& res) {
    if (!authorized(req)) return send_error(res, 401, "The access token is invalid");
    json arr = json::array();
    const auto n = req.get_param_value_count("id[]");
    for (std::size_t i = 0; i < n; ++i) {
      auto id = req.get_param_value("id[]", i);
      const auto* account = corpus_.find_account(id);
      arr.push_back({{"id", id}, {"following", account != nullptr && account->followed}});
    }
    send_json(res, arr);
  });

  s.Get("/api/v2/search", [this](const httplib::Request& req, httplib::Response& res) {
    if (req.get_param_value("resolve") == "true" && !authorized(req)) {
      return send_error(res, 401, "resolve requires an authenticated user");
    }
    json accounts = json::array();
    const auto type = req.get_param_value("type");
    if (type.empty() || type == "accounts") {
      if (const auto* a = corpus_.find_account_by_handle(req.get_param_value("q"))) {
        accounts.push_back(account_json(*a, corpus_.domain));
      }
    }
    send_json(res, {{"accounts", accounts}, {"statuses", json::array()}, {"hashtags", json::array()}});
  });
}

}  // namespace braids::mock
