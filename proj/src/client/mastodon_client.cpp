#include "braids/client/mastodon_client.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "braids/client/status_parser.hpp"

namespace braids::client {

using nlohmann::json;
using Params = std::multimap<std::string, std::string>;

namespace {

constexpr int kMaxLimit = 40;
constexpr int kRelationshipBatch = 40;
constexpr std::chrono::milliseconds kBaseBackoff{250};

std::unique_ptr<httplib::Client> make_http(const std::string& base, const ClientOptions& options) {
  auto cli = std::make_unique<httplib::Client>(base);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  cli->set_connection_timeout(secs.count(), usecs.count());
  cli->set_read_timeout(secs.count(), usecs.count());
  cli->set_write_timeout(secs.count(), usecs.count());
  return cli;
}

std::string snippet(const std::string& body) {
  return body.size() > 200 ? body.substr(0, 200) + "..." : body;
}

std::string oauth_error(const std::string& body) {
  auto j = json::parse(body, nullptr, false);
  if (j.is_object()) {
    std::string out;
    if (j.contains("error") && j["error"].is_string()) out = j["error"].get<std::string>();
    if (j.contains("error_description") && j["error_description"].is_string()) {
      out += ": " + j["error_description"].get<std::string>();
    }
    if (!out.empty()) return out;
  }
  return snippet(body);
}

std::chrono::seconds parse_retry_after(const httplib::Result& res) {
  if (res->has_header("Retry-After")) {
    try {
      return std::chrono::seconds{std::max(0, std::stoi(res->get_header_value("Retry-After")))};
    } catch (const std::exception&) {
    }
  }
  return std::chrono::seconds{1};
}

void check_limit(int limit) {
  if (limit < 1 || limit > kMaxLimit) {
    throw PreconditionError("limit must be in [1, 40], got " + std::to_string(limit));
  }
}

bool has_read_scope(const std::string& granted) {
  std::istringstream in(granted);
  std::string scope;
  while (in >> scope) {
    if (scope == kReadScope) return true;
  }
  return false;
}

}  // namespace

PageCursor PageCursor::start(const SourceCategory& source) {
  PageCursor c;
  c.source = source;
  if (source.kind() == SourceKind::kTrending) c.offset = 0;
  return c;
}

std::optional<AppRegistration> InMemoryAppCache::find(const std::string& instance,
                                                      const std::string& redirect_uri) {
  std::lock_guard lock(mu_);
  auto it = apps_.find({instance, redirect_uri});
  if (it == apps_.end()) return std::nullopt;
  return it->second;
}

void InMemoryAppCache::store(const std::string& instance, const AppRegistration& app) {
  std::lock_guard lock(mu_);
  apps_[{instance, app.redirect_uri}] = app;
}

std::string normalize_instance_url(std::string_view url) {
  std::string s(url);
  while (!s.empty() && s.back() == '/') s.pop_back();
  std::string scheme;
  if (s.starts_with("https://")) scheme = "https://";
  else if (s.starts_with("http://")) scheme = "http://";
  if (scheme.empty() || s.size() == scheme.size()) {
    throw PreconditionError("instance must be an http(s) URL, got '" + std::string(url) + "'");
  }
  std::string rest = s.substr(scheme.size());
  if (rest.find('/') != std::string::npos || rest.find('?') != std::string::npos) {
    throw PreconditionError("instance URL must not carry a path: '" + std::string(url) + "'");
  }
  std::transform(rest.begin(), rest.end(), rest.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return scheme + rest;
}

AppRegistration register_app(const std::string& instance_base_url, const std::string& redirect_uri,
                             const ClientOptions& options) {
  auto base = normalize_instance_url(instance_base_url);
  auto cli = make_http(base, options);
  httplib::Params form{{"client_name", options.client_name},
                       {"redirect_uris", redirect_uri},
                       {"scopes", std::string(kReadScope)}};
  if (!options.website.empty()) form.emplace("website", options.website);
  auto res = cli->Post("/api/v1/apps", form);
  if (!res) throw NetworkError(base, httplib::to_string(res.error()));
  if (res->status != 200) {
    throw UpstreamError(res->status, "instance rejected app registration: " + snippet(res->body));
  }
  auto j = json::parse(res->body, nullptr, false);
  if (!j.is_object() || !j.contains("client_id") || !j.contains("client_secret")) {
    throw UpstreamError(res->status, "malformed app registration response");
  }
  return AppRegistration{j["client_id"].get<std::string>(), j["client_secret"].get<std::string>(),
                         redirect_uri};
}

std::string authorization_url(const std::string& instance_base_url, const AppRegistration& app,
                              const std::string& state) {
  std::string url = normalize_instance_url(instance_base_url) + "/oauth/authorize" +
                    "?response_type=code" + "&client_id=" + url_encode(app.client_id) +
                    "&redirect_uri=" + url_encode(app.redirect_uri) +
                    "&scope=" + std::string(kReadScope);
  if (!state.empty()) url += "&state=" + url_encode(state);
  return url;
}

AuthorizationStart begin_authorization(const std::string& instance_base_url,
                                       const std::string& redirect_uri, const std::string& state,
                                       AppRegistrationCache& cache, const ClientOptions& options) {
  auto base = normalize_instance_url(instance_base_url);
  auto app = cache.find(base, redirect_uri);
  if (!app) {
    app = register_app(base, redirect_uri, options);
    cache.store(base, *app);
  }
  return AuthorizationStart{authorization_url(base, *app, state), *app};
}

MastodonClient::MastodonClient(InstanceCredentials credentials, ClientOptions options)
    : credentials_(std::move(credentials)), options_(std::move(options)) {
  credentials_.instance_base_url = normalize_instance_url(credentials_.instance_base_url);
  host_ = host_of(credentials_.instance_base_url);
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string MastodonClient::exchange_code(const std::string& code) {
  if (code.empty()) throw PreconditionError("authorization code is empty");
  auto cli = make_http(credentials_.instance_base_url, options_);
  httplib::Params form{{"grant_type", "authorization_code"},
                       {"code", code},
                       {"client_id", credentials_.client_id},
                       {"client_secret", credentials_.client_secret},
                       {"redirect_uri", credentials_.redirect_uri},
                       {"scope", std::string(kReadScope)}};
  auto res = cli->Post("/oauth/token", form);
  if (!res) throw NetworkError(credentials_.instance_base_url, httplib::to_string(res.error()));
  if (res->status == 400 || res->status == 401 || res->status == 403) {
    throw AuthError("code exchange refused: " + oauth_error(res->body));
  }
  if (res->status != 200) throw UpstreamError(res->status, snippet(res->body));
  auto j = json::parse(res->body, nullptr, false);
  if (!j.is_object() || !j.contains("access_token") || !j["access_token"].is_string()) {
    throw UpstreamError(res->status, "token response without access_token");
  }
  if (j.contains("scope") && j["scope"].is_string() &&
      !has_read_scope(j["scope"].get<std::string>())) {
    throw ConfigurationError("server granted scope '" + j["scope"].get<std::string>() +
                             "' instead of read");
  }
  credentials_.access_token = j["access_token"].get<std::string>();
  return *credentials_.access_token;
}

json MastodonClient::get_json(const std::string& path, const Params& params) const {
  httplib::Headers headers;
  if (credentials_.access_token) {
    headers.emplace("Authorization", "Bearer " + *credentials_.access_token);
  }
  for (int attempt = 0;; ++attempt) {
    auto cli = make_http(credentials_.instance_base_url, options_);
    auto res = cli->Get(path, params, headers);
    if (!res) throw NetworkError(credentials_.instance_base_url, httplib::to_string(res.error()));
    if (res->status == 429) {
      auto retry_after = parse_retry_after(res);
      if (attempt >= options_.max_rate_limit_retries) {
        throw RateLimitError(retry_after, path + " rate limited");
      }
      options_.sleep(std::max<std::chrono::milliseconds>(retry_after, kBaseBackoff * (1 << attempt)));
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError(path + " refused credentials (HTTP " + std::to_string(res->status) + ")");
    }
    if (res->status != 200) throw UpstreamError(res->status, path + ": " + snippet(res->body));
    auto j = json::parse(res->body, nullptr, false);
    if (j.is_discarded()) throw UpstreamError(res->status, path + ": response is not JSON");
    return j;
  }
}

TimelinePage MastodonClient::fetch_by_max_id(const std::string& path, Params params,
                                             const PageCursor& cursor, int limit) const {
  check_limit(limit);
  params.emplace("limit", std::to_string(limit));
  if (cursor.max_id) params.emplace("max_id", *cursor.max_id);
  auto j = get_json(path, params);
  if (!j.is_array()) throw UpstreamError(200, path + ": expected an array of statuses");
  TimelinePage page;
  page.next = cursor;
  for (const auto& status : j) {
    try {
      page.posts.push_back(parse_status(status, host_));
    } catch (const std::invalid_argument& e) {
      throw UpstreamError(200, path + ": " + e.what());
    }
  }
  if (!page.posts.empty()) page.next.max_id = page.posts.back().id;
  return page;
}

TimelinePage MastodonClient::fetch_home(const PageCursor& cursor, int limit) const {
  return fetch_by_max_id("/api/v1/timelines/home", {}, cursor, limit);
}

TimelinePage MastodonClient::fetch_local(const PageCursor& cursor, int limit) const {
  return fetch_by_max_id("/api/v1/timelines/public", {{"local", "true"}}, cursor, limit);
}

TimelinePage MastodonClient::fetch_account_statuses(const std::string& account_id,
                                                    const PageCursor& cursor, int limit) const {
  if (account_id.empty()) throw PreconditionError("account id is empty");
  return fetch_by_max_id("/api/v1/accounts/" + url_encode(account_id) + "/statuses", {}, cursor,
                         limit);
}

TimelinePage MastodonClient::fetch_trending(const PageCursor& cursor, int limit) const {
  check_limit(limit);
  const int offset = cursor.offset.value_or(0);
  if (offset < 0) throw PreconditionError("negative trending offset");
  auto j = get_json("/api/v1/trends/statuses",
                    {{"limit", std::to_string(limit)}, {"offset", std::to_string(offset)}});
  if (!j.is_array()) throw UpstreamError(200, "trends: expected an array of statuses");
  TimelinePage page;
  page.next = cursor;
  for (const auto& status : j) {
    try {
      page.posts.push_back(parse_status(status, host_));
    } catch (const std::invalid_argument& e) {
      throw UpstreamError(200, std::string("trends: ") + e.what());
    }
  }
  page.next.offset = offset + static_cast<int>(page.posts.size());
  return page;
}

std::string MastodonClient::resolve_account(const std::string& handle) const {
  const std::string wanted = normalize_handle(handle);
  if (!is_well_formed_handle(wanted)) {
    throw PreconditionError("malformed account handle '" + handle + "'");
  }
  auto j = get_json("/api/v2/search", {{"q", "@" + wanted},
                                       {"type", "accounts"},
                                       {"resolve", "true"},
                                       {"limit", "5"}});
  if (!j.is_object() || !j.contains("accounts") || !j["accounts"].is_array()) {
    throw UpstreamError(200, "search: malformed response");
  }
  const bool qualified = wanted.find('@') != std::string::npos;
  for (const auto& account : j["accounts"]) {
    if (!account.is_object() || !account.contains("id") || !account.contains("acct")) continue;
    auto acct = account["acct"].get<std::string>();
    auto url = account.value("url", std::string{});
    bool match = qualified ? qualify_handle(acct, url, host_) == wanted : normalize_handle(acct) == wanted;
    if (match) return account["id"].get<std::string>();
  }
  throw ResolutionError(handle);
}

std::set<std::string> MastodonClient::check_follows(const std::vector<std::string>& author_ids) const {
  std::vector<std::string> ids(author_ids.begin(), author_ids.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  ids.erase(std::remove(ids.begin(), ids.end(), std::string{}), ids.end());

  std::set<std::string> followed;
  for (std::size_t start = 0; start < ids.size(); start += kRelationshipBatch) {
    Params params;
    auto end = std::min(ids.size(), start + kRelationshipBatch);
    for (std::size_t i = start; i < end; ++i) params.emplace("id[]", ids[i]);
    auto j = get_json("/api/v1/accounts/relationships", params);
    if (!j.is_array()) throw UpstreamError(200, "relationships: expected an array");
    for (const auto& rel : j) {
      if (rel.is_object() && rel.value("following", false) && rel.contains("id")) {
        followed.insert(rel["id"].get<std::string>());
      }
    }
  }
  return followed;
}

}  // namespace braids::client
