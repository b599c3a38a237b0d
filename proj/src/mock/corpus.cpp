#include "braids/mock/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "braids/mock/trending.hpp"

namespace braids::mock {

using nlohmann::json;

namespace {

Timestamp required_time(const json& j, const char* key) {
  auto ts = parse_timestamp(j.at(key).get<std::string>());
  if (!ts) throw std::invalid_argument(std::string("bad timestamp in field ") + key);
  return *ts;
}

bool newest_first(const CorpusPost* a, const CorpusPost* b) {
  if (a->created_at != b->created_at) return a->created_at > b->created_at;
  return a->id > b->id;
}

std::vector<const CorpusPost*> sorted(std::vector<const CorpusPost*> v) {
  std::sort(v.begin(), v.end(), newest_first);
  return v;
}

// Good enough for fixture bodies, which are simple <p> markup.
std::string text_of(const std::string& html) {
  std::string out;
  bool in_tag = false;
  for (char c : html) {
    if (c == '<') in_tag = true;
    else if (c == '>') in_tag = false;
    else if (!in_tag) out += c;
  }
  return out;
}

}  // namespace

Corpus Corpus::from_json(const json& j) {
  Corpus c;
  c.domain = j.value("domain", c.domain);
  c.now = required_time(j, "now");
  c.require_auth_for_public = j.value("require_auth_for_public", false);
  c.followed_hashtags = j.value("followed_hashtags", std::vector<std::string>{});
  for (const auto& ja : j.at("accounts")) {
    CorpusAccount a;
    a.id = ja.at("id").get<std::string>();
    a.handle = normalize_handle(ja.at("handle").get<std::string>());
    if (a.handle.find('@') == std::string::npos) a.handle += "@" + c.domain;
    a.followed = ja.value("followed", false);
    a.suspended = ja.value("suspended", false);
    c.accounts.push_back(std::move(a));
  }
  for (const auto& jp : j.at("posts")) {
    CorpusPost p;
    p.id = jp.at("id").get<std::string>();
    p.account_id = jp.at("account_id").get<std::string>();
    p.created_at = required_time(jp, "created_at");
    p.content_html = jp.value("content", std::string{});
    p.tags = jp.value("tags", std::vector<std::string>{});
    p.boosts = jp.value("boosts", 0LL);
    p.favorites = jp.value("favorites", 0LL);
    if (jp.contains("boost_of") && !jp["boost_of"].is_null()) {
      p.boost_of = jp["boost_of"].get<std::string>();
    }
    if (jp.contains("origin")) {
      p.origin = jp["origin"].get<std::string>() == "local" ? Origin::kLocal : Origin::kRemote;
    } else {
      const auto* author = c.find_account(p.account_id);
      p.origin = author && author->domain() == c.domain ? Origin::kLocal : Origin::kRemote;
    }
    c.posts.push_back(std::move(p));
  }
  if (j.contains("oauth")) {
    const auto& jo = j["oauth"];
    c.oauth.valid_codes = jo.value("valid_codes", std::vector<std::string>{});
    c.oauth.token = jo.value("token", std::string{});
    c.oauth.granted_scope = jo.value("granted_scope", std::string{"read"});
  }
  for (const auto& jf : j.value("faults", json::array())) {
    Fault f;
    f.endpoint = jf.at("endpoint").get<std::string>();
    f.status = jf.value("status", 500);
    f.on_call = jf.value("on_call", 1);
    f.times = jf.value("times", 1);
    f.retry_after = jf.value("retry_after", 0);
    c.faults.push_back(std::move(f));
  }
  c.validate();
  return c;
}

Corpus Corpus::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  return from_json(json::parse(in));
}

json Corpus::to_json() const {
  json j;
  j["domain"] = domain;
  j["now"] = format_timestamp(now);
  j["require_auth_for_public"] = require_auth_for_public;
  j["followed_hashtags"] = followed_hashtags;
  j["accounts"] = json::array();
  for (const auto& a : accounts) {
    j["accounts"].push_back(
        {{"id", a.id}, {"handle", a.handle}, {"followed", a.followed}, {"suspended", a.suspended}});
  }
  j["posts"] = json::array();
  for (const auto& p : posts) {
    j["posts"].push_back({{"id", p.id},
                          {"account_id", p.account_id},
                          {"created_at", format_timestamp(p.created_at)},
                          {"content", p.content_html},
                          {"tags", p.tags},
                          {"boosts", p.boosts},
                          {"favorites", p.favorites},
                          {"boost_of", p.boost_of ? json(*p.boost_of) : json(nullptr)},
                          {"origin", p.origin == Origin::kLocal ? "local" : "remote"}});
  }
  j["oauth"] = {{"valid_codes", oauth.valid_codes},
                {"token", oauth.token},
                {"granted_scope", oauth.granted_scope}};
  j["faults"] = json::array();
  for (const auto& f : faults) {
    j["faults"].push_back({{"endpoint", f.endpoint},
                           {"status", f.status},
                           {"on_call", f.on_call},
                           {"times", f.times},
                           {"retry_after", f.retry_after}});
  }
  return j;
}

void Corpus::validate() const {
  std::set<std::string> account_ids;
  for (const auto& a : accounts) {
    if (!account_ids.insert(a.id).second) throw std::invalid_argument("duplicate account id " + a.id);
  }
  std::set<std::string> post_ids;
  for (const auto& p : posts) {
    if (p.id.empty()) throw std::invalid_argument("post with empty id");
    if (!post_ids.insert(p.id).second) throw std::invalid_argument("duplicate post id " + p.id);
    if (!account_ids.contains(p.account_id)) {
      throw std::invalid_argument("post " + p.id + " names unknown account " + p.account_id);
    }
  }
  std::map<std::string, std::set<Timestamp>> stream_times;
  for (const auto& p : posts) {
    if (p.boost_of && !post_ids.contains(*p.boost_of)) {
      throw std::invalid_argument("post " + p.id + " boosts unknown status " + *p.boost_of);
    }
    if (!stream_times[p.account_id].insert(p.created_at).second) {
      throw std::invalid_argument("account " + p.account_id + " has two posts at " +
                                  format_timestamp(p.created_at));
    }
  }
}

const CorpusAccount* Corpus::find_account(const std::string& id) const {
  for (const auto& a : accounts) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

const CorpusAccount* Corpus::find_account_by_handle(const std::string& handle) const {
  std::string wanted = normalize_handle(handle);
  if (wanted.find('@') == std::string::npos) wanted += "@" + domain;
  for (const auto& a : accounts) {
    if (a.handle == wanted) return &a;
  }
  return nullptr;
}

const CorpusPost* Corpus::find_post(const std::string& id) const {
  for (const auto& p : posts) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

Post to_post(const Corpus& corpus, const CorpusPost& cp) {
  Post p;
  p.id = cp.id;
  p.author_id = cp.account_id;
  if (const auto* author = corpus.find_account(cp.account_id)) p.author_handle = author->handle;
  p.created_at = cp.created_at;
  const CorpusPost* body = &cp;
  if (cp.boost_of) {
    p.is_boost = true;
    p.boosted_id = *cp.boost_of;
    body = corpus.find_post(*cp.boost_of);
  }
  p.content_html = body->content_html;
  p.content_text = text_of(body->content_html);
  for (const auto& t : body->tags) {
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    p.hashtags.push_back(lower);
  }
  p.counts = {body->boosts, body->favorites};
  return p;
}

std::vector<const CorpusPost*> home_timeline(const Corpus& corpus) {
  std::set<std::string> followed;
  for (const auto& a : corpus.accounts) {
    if (a.followed) followed.insert(a.id);
  }
  std::set<std::string> tags(corpus.followed_hashtags.begin(), corpus.followed_hashtags.end());
  std::vector<const CorpusPost*> out;
  for (const auto& p : corpus.posts) {
    bool by_followed = followed.contains(p.account_id);
    bool tagged = !p.boost_of && std::any_of(p.tags.begin(), p.tags.end(),
                                             [&](const std::string& t) { return tags.contains(t); });
    if (by_followed || tagged) out.push_back(&p);
  }
  return sorted(std::move(out));
}

std::vector<const CorpusPost*> local_timeline(const Corpus& corpus) {
  std::vector<const CorpusPost*> out;
  for (const auto& p : corpus.posts) {
    if (!p.boost_of && p.origin == Origin::kLocal) out.push_back(&p);
  }
  return sorted(std::move(out));
}

std::vector<const CorpusPost*> federated_timeline(const Corpus& corpus) {
  std::vector<const CorpusPost*> out;
  for (const auto& p : corpus.posts) {
    if (!p.boost_of) out.push_back(&p);
  }
  return sorted(std::move(out));
}

std::vector<const CorpusPost*> trending_timeline(const Corpus& corpus) {
  std::vector<std::pair<double, const CorpusPost*>> scored;
  for (const auto& p : corpus.posts) {
    if (p.boost_of || p.boosts + p.favorites == 0) continue;
    scored.emplace_back(trending_score(p.boosts, p.favorites, p.created_at, corpus.now), &p);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->id > b.second->id;
  });
  std::vector<const CorpusPost*> out;
  for (const auto& [score, p] : scored) out.push_back(p);
  return out;
}

std::vector<const CorpusPost*> account_timeline(const Corpus& corpus, const std::string& account_id) {
  std::vector<const CorpusPost*> out;
  for (const auto& p : corpus.posts) {
    if (p.account_id == account_id) out.push_back(&p);
  }
  return sorted(std::move(out));
}

std::vector<const CorpusPost*> page_after(const Corpus& corpus,
                                          const std::vector<const CorpusPost*>& timeline,
                                          const std::optional<std::string>& max_id, int limit) {
  const CorpusPost* boundary = nullptr;
  if (max_id) {
    boundary = corpus.find_post(*max_id);
    if (!boundary) return {};
  }
  std::vector<const CorpusPost*> out;
  for (const auto* p : timeline) {
    if (static_cast<int>(out.size()) >= limit) break;
    if (boundary && !newest_first(boundary, p)) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace braids::mock
