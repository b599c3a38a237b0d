#include "braids/core/wire.hpp"

#include <stdexcept>

namespace braids::wire {

using nlohmann::json;

json to_json(const AnnotatedPost& ap) {
  const Post& p = ap.post;
  json j;
  j["id"] = p.id;
  j["author"] = p.author_handle;
  j["created_at"] = format_timestamp(p.created_at);
  j["html"] = p.content_html;
  j["badge"] = badge_code(ap.badge);
  j["badge_label"] = badge_label(ap.badge);
  j["source"] = ap.source.to_string();
  j["boost_of"] = (p.is_boost && p.boosted_id) ? json(*p.boosted_id) : json(nullptr);
  return j;
}

json to_json(const FeedPage& page) {
  json posts = json::array();
  for (const auto& ap : page.posts) posts.push_back(to_json(ap));
  return json{{"posts", std::move(posts)},
              {"ran_out", page.ran_out},
              {"seed", std::to_string(page.seed)},
              {"warnings", page.warnings}};
}

json to_json(const CurationConfig& config) {
  json accounts = json::array();
  for (const auto& a : config.accounts) {
    accounts.push_back({{"handle", a.handle}, {"level", to_string(a.level)}});
  }
  return json{{"priorities",
               {{"following", to_string(config.priorities.following)},
                {"local", to_string(config.priorities.local)},
                {"trending", to_string(config.priorities.trending)}}},
              {"accounts", std::move(accounts)},
              {"filters", config.filters},
              {"ordering_mode", to_string(config.ordering_mode)}};
}

FeedPage feed_page_from_json(const json& j) {
  FeedPage page;
  page.ran_out = j.at("ran_out").get<bool>();
  page.seed = std::stoull(j.at("seed").get<std::string>());
  page.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& jp : j.at("posts")) {
    AnnotatedPost ap;
    ap.post.id = jp.at("id").get<std::string>();
    ap.post.author_handle = jp.at("author").get<std::string>();
    auto ts = parse_timestamp(jp.at("created_at").get<std::string>());
    if (!ts) throw std::invalid_argument("bad created_at in feed page");
    ap.post.created_at = *ts;
    ap.post.content_html = jp.at("html").get<std::string>();
    const auto& boost = jp.at("boost_of");
    if (!boost.is_null()) {
      ap.post.is_boost = true;
      ap.post.boosted_id = boost.get<std::string>();
    }
    auto badge = parse_badge(jp.at("badge").get<std::string>());
    auto source = SourceCategory::parse(jp.at("source").get<std::string>());
    if (!badge || !source) throw std::invalid_argument("bad badge or source in feed page");
    ap.badge = *badge;
    ap.source = *source;
    page.posts.push_back(std::move(ap));
  }
  return page;
}

namespace {

void read_level(const json& parent, const char* key, const std::string& field,
                PriorityLevel& out, std::vector<ConfigIssue>& issues) {
  if (!parent.contains(key)) return;
  const auto& v = parent.at(key);
  if (!v.is_string()) {
    issues.push_back({field, "level must be a string"});
    return;
  }
  auto level = parse_priority_level(v.get<std::string>());
  if (!level) {
    issues.push_back({field, "unknown level '" + v.get<std::string>() +
                                 "' (expected none, low, medium or high)"});
    return;
  }
  out = *level;
}

}  // namespace

ConfigParse config_from_json(const json& j) {
  ConfigParse result;
  auto& issues = result.issues;
  if (!j.is_object()) {
    issues.push_back({"", "config must be a JSON object"});
    return result;
  }
  CurationConfig config;
  if (j.contains("priorities")) {
    const auto& pr = j.at("priorities");
    if (!pr.is_object()) {
      issues.push_back({"priorities", "must be an object"});
    } else {
      read_level(pr, "following", "priorities.following", config.priorities.following, issues);
      read_level(pr, "local", "priorities.local", config.priorities.local, issues);
      read_level(pr, "trending", "priorities.trending", config.priorities.trending, issues);
    }
  }
  if (j.contains("accounts")) {
    const auto& accounts = j.at("accounts");
    if (!accounts.is_array()) {
      issues.push_back({"accounts", "must be an array"});
    } else {
      for (std::size_t i = 0; i < accounts.size(); ++i) {
        const auto& a = accounts[i];
        std::string field = "accounts[" + std::to_string(i) + "]";
        if (!a.is_object() || !a.contains("handle") || !a.at("handle").is_string()) {
          issues.push_back({field + ".handle", "account entry needs a string handle"});
          continue;
        }
        PrioritizedAccount account{a.at("handle").get<std::string>(), PriorityLevel::kLow};
        read_level(a, "level", field + ".level", account.level, issues);
        config.accounts.push_back(std::move(account));
      }
    }
  }
  if (j.contains("filters")) {
    const auto& filters = j.at("filters");
    if (!filters.is_array()) {
      issues.push_back({"filters", "must be an array"});
    } else {
      for (std::size_t i = 0; i < filters.size(); ++i) {
        if (!filters[i].is_string()) {
          issues.push_back({"filters[" + std::to_string(i) + "]", "must be a string"});
          continue;
        }
        config.filters.push_back(filters[i].get<std::string>());
      }
    }
  }
  if (j.contains("ordering_mode")) {
    const auto& m = j.at("ordering_mode");
    auto mode = m.is_string() ? parse_ordering_mode(m.get<std::string>()) : std::nullopt;
    if (!mode) {
      issues.push_back({"ordering_mode", "expected weighted_interleave or strict_priority"});
    } else {
      config.ordering_mode = *mode;
    }
  }
  if (!issues.empty()) return result;
  issues = validate(config);
  if (issues.empty()) result.config = std::move(config);
  return result;
}

std::string canonical(const FeedPage& page) { return to_json(page).dump(); }

}  // namespace braids::wire
