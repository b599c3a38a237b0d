#include "braids/service/feed_service.hpp"

#include <algorithm>
#include <future>
#include <random>

#include <spdlog/spdlog.h>

#include "braids/core/allocation.hpp"
#include "braids/core/merge.hpp"
#include "braids/core/wire.hpp"

namespace braids::service {

using client::MastodonClient;
using client::PageCursor;
using client::TimelinePage;
using nlohmann::json;

namespace {

struct SourceResult {
  std::optional<TimelinePage> page;
  std::optional<std::string> resolved_id;
  bool unresolved = false;
  bool auth_failed = false;
  std::string error;
};

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

SourceResult fetch_source(const MastodonClient& client, const PageCursor& cursor, int count,
                          std::optional<std::string> account_id) {
  SourceResult r;
  try {
    const auto& source = cursor.source;
    switch (source.kind()) {
      case SourceKind::kFollowingAndHashtags: r.page = client.fetch_home(cursor, count); break;
      case SourceKind::kLocal: r.page = client.fetch_local(cursor, count); break;
      case SourceKind::kTrending: r.page = client.fetch_trending(cursor, count); break;
      case SourceKind::kPrioritizedAccount:
        if (!account_id) {
          try {
            account_id = client.resolve_account(source.account_handle());
            r.resolved_id = account_id;
          } catch (const client::ResolutionError&) {
            r.unresolved = true;
            return r;
          }
        }
        r.page = client.fetch_account_statuses(*account_id, cursor, count);
        break;
    }
  } catch (const client::AuthError& e) {
    r.auth_failed = true;
    r.error = e.what();
  } catch (const client::ClientError& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

FeedService::FeedService(SessionStore& store, FeedServiceOptions options)
    : store_(store), options_(std::move(options)) {}

std::shared_ptr<std::mutex> FeedService::session_mutex(const std::string& session_id) {
  std::lock_guard lock(locks_mu_);
  auto& m = locks_[session_id];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

SessionState FeedService::load(const std::string& session_id) {
  if (session_id.empty()) throw ServiceError(401, "not logged in");
  auto s = store_.get(session_id);
  if (!s) throw ServiceError(401, "unknown or expired session");
  return std::move(*s);
}

std::string FeedService::begin_login(const std::string& instance) {
  const auto state = SessionStore::new_token();
  try {
    auto base = client::normalize_instance_url(instance);
    auto start = client::begin_authorization(base, options_.redirect_uri, state, store_,
                                             options_.client);
    store_.put_login(state, {base, start.app, store_.now()});
    return start.url;
  } catch (const client::PreconditionError& e) {
    throw ServiceError(400, e.what());
  } catch (const client::ClientError& e) {
    throw ServiceError(502, e.what());
  }
}

std::string FeedService::complete_login(const std::string& code, const std::string& state) {
  // The state stays valid until it expires; a replayed callback is refused
  // by the instance, which will not honour a code twice.
  auto login = store_.find_login(state);
  if (!login) throw ServiceError(400, "unknown or expired login state");
  MastodonClient client({login->instance, login->app.client_id, login->app.client_secret,
                         login->app.redirect_uri, std::nullopt},
                        options_.client);
  try {
    client.exchange_code(code);
  } catch (const client::PreconditionError& e) {
    throw ServiceError(401, e.what());
  } catch (const client::AuthError& e) {
    throw ServiceError(401, e.what());
  } catch (const client::ConfigurationError& e) {
    throw ServiceError(401, e.what());
  } catch (const client::ClientError& e) {
    throw ServiceError(502, e.what());
  }
  return adopt_credentials(client.credentials());
}

std::string FeedService::adopt_credentials(const client::InstanceCredentials& credentials) {
  SessionState s;
  s.session_id = SessionStore::new_token();
  s.credentials = credentials;
  s.created_at = store_.now();
  store_.put(s);
  spdlog::debug("new session for {}", credentials.instance_base_url);
  return s.session_id;
}

CurationConfig FeedService::get_config(const std::string& session_id) {
  auto mu = session_mutex(session_id);
  std::lock_guard lock(*mu);
  return load(session_id).config;
}

ConfigAck FeedService::put_config(const std::string& session_id, const CurationConfig& config) {
  auto mu = session_mutex(session_id);
  std::lock_guard lock(*mu);
  auto s = load(session_id);
  if (auto issues = validate(config); !issues.empty()) {
    json detail = json::array();
    for (const auto& i : issues) detail.push_back({{"field", i.field}, {"message", i.message}});
    throw ServiceError(422, "invalid config", detail);
  }

  MastodonClient client(s.credentials, options_.client);
  ConfigAck ack;
  for (const auto& a : config.accounts) {
    const auto handle = normalize_handle(a.handle);
    if (s.account_ids.contains(handle)) continue;
    try {
      s.account_ids[handle] = client.resolve_account(handle);
    } catch (const client::ClientError& e) {
      spdlog::info("prioritized account {} unresolved: {}", handle, e.what());
      ack.unresolved.push_back(handle);
    }
  }
  s.config = config;
  s.reset_feed();
  store_.put(s);
  return ack;
}

FeedPage FeedService::get_feed(const std::string& session_id, bool first_page,
                               std::optional<std::uint64_t> seed) {
  auto mu = session_mutex(session_id);
  std::lock_guard lock(*mu);
  auto s = load(session_id);
  if (first_page) s.reset_feed();

  FeedPage page;
  page.seed = seed.value_or(fresh_seed());
  if (total_weight(s.config) == 0) {
    store_.put(s);
    return page;
  }

  std::map<SourceCategory, int> requests;
  for (const auto& [source, n] : allocate_fetch_counts(s.config, kPageSize)) {
    if (n > 0) requests[source] = n;
  }

  MastodonClient client(s.credentials, options_.client);
  std::map<SourceCategory, std::future<SourceResult>> pending;
  for (const auto& [source, n] : requests) {
    auto it = s.cursors.find(source);
    PageCursor cursor = it != s.cursors.end() ? it->second : PageCursor::start(source);
    std::optional<std::string> account_id;
    if (source.kind() == SourceKind::kPrioritizedAccount) {
      if (auto a = s.account_ids.find(source.account_handle()); a != s.account_ids.end()) {
        account_id = a->second;
      }
    }
    pending[source] = std::async(std::launch::async, fetch_source, std::cref(client), cursor, n,
                                 account_id);
  }

  SourceQueues queues;
  std::map<SourceCategory, int> responses;
  std::map<SourceCategory, PageCursor> next_cursors;
  json failures = json::object();
  bool any_auth_failure = false;
  for (auto& [source, fut] : pending) {
    auto r = fut.get();
    if (r.resolved_id) s.account_ids[source.account_handle()] = *r.resolved_id;
    if (r.unresolved) {
      page.warnings.push_back("could not resolve prioritized account " + source.account_handle());
      responses[source] = 0;
      continue;
    }
    if (!r.page) {
      any_auth_failure |= r.auth_failed;
      failures[source.to_string()] = r.error;
      page.warnings.push_back(source.to_string() + " unavailable: " + r.error);
      spdlog::warn("source {} failed: {}", source.to_string(), r.error);
      continue;
    }
    responses[source] = static_cast<int>(r.page->posts.size());
    next_cursors[source] = r.page->next;
    queues[source] = std::move(r.page->posts);
  }
  if (!failures.empty() && failures.size() == pending.size()) {
    if (any_auth_failure) throw ServiceError(401, "instance refused the session's token", failures);
    throw ServiceError(502, "every source failed", failures);
  }

  // Following-queue authors decide between the two following badges.
  FollowSet follow_set;
  if (auto home = queues.find(SourceCategory::following()); home != queues.end()) {
    const auto now = store_.now();
    std::vector<std::string> stale;
    for (const auto& p : home->second) {
      auto f = s.follow_cache.find(p.author_id);
      if (f == s.follow_cache.end() || now - f->second.checked_at > options_.follow_cache_ttl) {
        stale.push_back(p.author_id);
      }
    }
    try {
      auto followed = client.check_follows(stale);
      for (const auto& p : home->second) {
        if (std::find(stale.begin(), stale.end(), p.author_id) == stale.end()) continue;
        s.follow_cache[p.author_id] = {normalize_handle(p.author_handle),
                                       followed.contains(p.author_id), now};
      }
    } catch (const client::ClientError& e) {
      page.warnings.push_back(std::string("follow check failed, badges may be approximate: ") +
                              e.what());
    }
    for (const auto& [id, f] : s.follow_cache) {
      if (f.following) follow_set.insert(f.handle);
    }
  }

  auto merged = combine_posts(std::move(queues), s.config, follow_set, s.seen_ids, page.seed);
  page.posts = std::move(merged.posts);
  page.ran_out = detect_ran_out(requests, responses);
  for (auto& [source, c] : next_cursors) s.cursors[source] = std::move(c);
  store_.put(s);
  return page;
}

}  // namespace braids::service
