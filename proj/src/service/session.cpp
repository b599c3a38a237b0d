#include "braids/service/session.hpp"

#include <algorithm>
#include <stdexcept>

#include "braids/core/wire.hpp"

namespace braids::service {

using nlohmann::json;

namespace {

std::string open_or_throw(const TokenCipher& cipher, const json& j, const char* field) {
  auto plain = cipher.open(j.at(field).get<std::string>());
  if (!plain) throw std::invalid_argument(std::string("cannot open sealed ") + field);
  return *plain;
}

Timestamp timestamp_field(const json& j, const char* field) {
  auto t = parse_timestamp(j.at(field).get<std::string>());
  if (!t) throw std::invalid_argument(std::string("bad timestamp in ") + field);
  return *t;
}

}  // namespace

json to_json(const SessionState& s, const TokenCipher& cipher) {
  json creds{{"instance", s.credentials.instance_base_url},
             {"client_id", s.credentials.client_id},
             {"client_secret", cipher.seal(s.credentials.client_secret)},
             {"redirect_uri", s.credentials.redirect_uri}};
  if (s.credentials.access_token) creds["access_token"] = cipher.seal(*s.credentials.access_token);

  json cursors = json::object();
  for (const auto& [source, c] : s.cursors) {
    json jc = json::object();
    if (c.max_id) jc["max_id"] = *c.max_id;
    if (c.offset) jc["offset"] = *c.offset;
    cursors[source.to_string()] = jc;
  }
  json follows = json::object();
  for (const auto& [id, f] : s.follow_cache) {
    follows[id] = {{"handle", f.handle},
                   {"following", f.following},
                   {"checked_at", format_timestamp(f.checked_at)}};
  }
  std::vector<std::string> seen(s.seen_ids.begin(), s.seen_ids.end());
  std::sort(seen.begin(), seen.end());
  return {{"session_id", s.session_id},
          {"credentials", creds},
          {"config", wire::to_json(s.config)},
          {"cursors", cursors},
          {"seen_ids", seen},
          {"follow_cache", follows},
          {"account_ids", s.account_ids},
          {"created_at", format_timestamp(s.created_at)}};
}

SessionState session_from_json(const json& j, const TokenCipher& cipher) {
  try {
    SessionState s;
    s.session_id = j.at("session_id").get<std::string>();
    const auto& creds = j.at("credentials");
    s.credentials.instance_base_url = creds.at("instance").get<std::string>();
    s.credentials.client_id = creds.at("client_id").get<std::string>();
    s.credentials.client_secret = open_or_throw(cipher, creds, "client_secret");
    s.credentials.redirect_uri = creds.at("redirect_uri").get<std::string>();
    if (creds.contains("access_token")) {
      s.credentials.access_token = open_or_throw(cipher, creds, "access_token");
    }

    auto parsed = wire::config_from_json(j.at("config"));
    if (!parsed.config) throw std::invalid_argument("stored config no longer validates");
    s.config = *parsed.config;

    for (const auto& [key, jc] : j.at("cursors").items()) {
      auto source = SourceCategory::parse(key);
      if (!source) throw std::invalid_argument("unknown cursor source " + key);
      client::PageCursor c;
      c.source = *source;
      if (jc.contains("max_id")) c.max_id = jc["max_id"].get<std::string>();
      if (jc.contains("offset")) c.offset = jc["offset"].get<int>();
      s.cursors[*source] = c;
    }
    for (const auto& id : j.at("seen_ids")) s.seen_ids.insert(id.get<std::string>());
    for (const auto& [id, f] : j.at("follow_cache").items()) {
      s.follow_cache[id] = {f.at("handle").get<std::string>(), f.at("following").get<bool>(),
                            timestamp_field(f, "checked_at")};
    }
    s.account_ids = j.at("account_ids").get<std::map<std::string, std::string>>();
    s.created_at = timestamp_field(j, "created_at");
    return s;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed session record: ") + e.what());
  }
}

}  // namespace braids::service
