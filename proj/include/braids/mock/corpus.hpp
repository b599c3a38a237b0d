#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "braids/core/types.hpp"

namespace braids::mock {

enum class Origin { kLocal, kRemote };

struct CorpusAccount {
  std::string id;
  /// Fully qualified "user@domain".
  std::string handle;
  bool followed = false;
  bool suspended = false;

  std::string username() const { return handle.substr(0, handle.find('@')); }
  std::string domain() const { return handle.substr(handle.find('@') + 1); }
};

struct CorpusPost {
  std::string id;
  std::string account_id;
  Timestamp created_at{};
  std::string content_html;
  std::vector<std::string> tags;
  std::int64_t boosts = 0;
  std::int64_t favorites = 0;
  /// Set for a boost; the boosted status must also be in the corpus.
  std::optional<std::string> boost_of;
  Origin origin = Origin::kRemote;
};

struct OAuthScript {
  std::vector<std::string> valid_codes;
  std::string token;
  std::string granted_scope = "read";
};

/// Starting at the `on_call`-th request to `endpoint` (1-based), the next
/// `times` requests answer `status` instead of being served.
struct Fault {
  std::string endpoint;
  int status = 500;
  int on_call = 1;
  int times = 1;
  int retry_after = 0;
};

/// A frozen fake instance: who exists, what they posted, whom the test user
/// follows, and how the instance misbehaves.
///
/// Fixture file format (JSON):
///
///   {
///     "domain": "example.social",
///     "now": "2024-03-02T00:00:00.000Z",
///     "require_auth_for_public": false,
///     "followed_hashtags": ["birds"],
///     "accounts": [{"id": "a1", "handle": "alice@example.social",
///                   "followed": true, "suspended": false}],
///     "posts": [{"id": "...", "account_id": "a1",
///                "created_at": "...", "content": "<p>...</p>",
///                "tags": ["birds"], "boosts": 0, "favorites": 0,
///                "boost_of": null, "origin": "local"}],
///     "oauth": {"valid_codes": ["code-1"], "token": "tok",
///               "granted_scope": "read"},
///     "faults": [{"endpoint": "/api/v1/timelines/home", "status": 429,
///                 "on_call": 3, "times": 1, "retry_after": 0}]
///   }
///
/// "origin" defaults to local when the author's domain equals "domain".
struct Corpus {
  std::string domain = "example.social";
  Timestamp now{};
  bool require_auth_for_public = false;
  std::vector<std::string> followed_hashtags;
  std::vector<CorpusAccount> accounts;
  std::vector<CorpusPost> posts;
  OAuthScript oauth;
  std::vector<Fault> faults;

  static Corpus from_json(const nlohmann::json& j);
  static Corpus load(const std::string& path);
  nlohmann::json to_json() const;

  /// Throws std::invalid_argument when ids repeat, a post names an unknown
  /// account or boosted status, or an author has two posts at one instant.
  void validate() const;

  const CorpusAccount* find_account(const std::string& id) const;
  const CorpusAccount* find_account_by_handle(const std::string& handle) const;
  const CorpusPost* find_post(const std::string& id) const;
};

/// The Post a correct client would parse out of this status.
Post to_post(const Corpus& corpus, const CorpusPost& post);

// Timeline views. All newest first (created_at, then id, descending) except
// trending, which is in trending order.

/// Posts and boosts by followed accounts, plus original posts carrying a
/// followed hashtag.
std::vector<const CorpusPost*> home_timeline(const Corpus& corpus);
/// Original posts from this instance's users.
std::vector<const CorpusPost*> local_timeline(const Corpus& corpus);
/// Every original post, local or remote.
std::vector<const CorpusPost*> federated_timeline(const Corpus& corpus);
/// Original posts with at least one interaction, by descending
/// trending_score; ties by descending id.
std::vector<const CorpusPost*> trending_timeline(const Corpus& corpus);
std::vector<const CorpusPost*> account_timeline(const Corpus& corpus, const std::string& account_id);

/// Up to `limit` posts of a chronological `timeline` strictly older than the
/// corpus post `max_id`. An unknown max_id yields nothing.
std::vector<const CorpusPost*> page_after(const Corpus& corpus,
                                          const std::vector<const CorpusPost*>& timeline,
                                          const std::optional<std::string>& max_id, int limit);

}  // namespace braids::mock
