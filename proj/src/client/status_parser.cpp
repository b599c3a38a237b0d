#include "braids/client/status_parser.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace braids::client {

using nlohmann::json;

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x110000) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Decodes the entity starting at html[pos] == '&'. Returns false to emit '&'.
bool decode_entity(std::string_view html, std::size_t& pos, std::string& out) {
  auto end = html.find(';', pos);
  if (end == std::string_view::npos || end - pos > 10) return false;
  auto name = html.substr(pos + 1, end - pos - 1);
  if (name == "amp") out += '&';
  else if (name == "lt") out += '<';
  else if (name == "gt") out += '>';
  else if (name == "quot") out += '"';
  else if (name == "apos") out += '\'';
  else if (name == "nbsp") out += ' ';
  else if (name.size() > 1 && name[0] == '#') {
    try {
      unsigned long cp = (name[1] == 'x' || name[1] == 'X')
                             ? std::stoul(std::string(name.substr(2)), nullptr, 16)
                             : std::stoul(std::string(name.substr(1)));
      append_utf8(out, cp);
    } catch (const std::exception&) {
      return false;
    }
  } else {
    return false;
  }
  pos = end + 1;
  return true;
}

std::string string_or_empty(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

std::int64_t count_or_zero(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) return 0;
  return std::max<std::int64_t>(0, it->get<std::int64_t>());
}

}  // namespace

std::string strip_html(std::string_view html) {
  std::string out;
  out.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    char c = html[i];
    if (c == '<') {
      auto close = html.find('>', i);
      if (close == std::string_view::npos) break;
      auto tag = lowercase(html.substr(i + 1, close - i - 1));
      if (tag.starts_with("br")) {
        out += '\n';
      } else if (tag == "/p" && close + 1 < html.size()) {
        out += "\n\n";
      }
      i = close + 1;
    } else if (c == '&') {
      if (!decode_entity(html, i, out)) {
        out += '&';
        ++i;
      }
    } else {
      out += c;
      ++i;
    }
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
  return out;
}

std::string host_of(std::string_view url) {
  auto scheme = url.find("://");
  auto rest = scheme == std::string_view::npos ? url : url.substr(scheme + 3);
  auto slash = rest.find('/');
  auto authority = rest.substr(0, slash);
  auto colon = authority.find(':');
  return lowercase(authority.substr(0, colon));
}

std::string qualify_handle(std::string_view acct, std::string_view profile_url,
                           std::string_view instance_host) {
  std::string handle = normalize_handle(acct);
  if (handle.find('@') != std::string::npos) return handle;
  std::string domain = profile_url.empty() ? std::string{} : host_of(profile_url);
  if (domain.empty()) domain = lowercase(instance_host);
  return handle + "@" + domain;
}

std::string url_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

Post parse_status(const json& status, std::string_view instance_host) {
  Post post;
  post.id = string_or_empty(status, "id");
  if (post.id.empty()) throw std::invalid_argument("status without id");
  auto created = parse_timestamp(string_or_empty(status, "created_at"));
  if (!created) throw std::invalid_argument("status " + post.id + " has bad created_at");
  post.created_at = *created;

  if (auto acc = status.find("account"); acc != status.end() && acc->is_object()) {
    post.author_id = string_or_empty(*acc, "id");
    post.author_handle =
        qualify_handle(string_or_empty(*acc, "acct"), string_or_empty(*acc, "url"), instance_host);
  }

  const json* body = &status;
  if (auto reblog = status.find("reblog"); reblog != status.end() && reblog->is_object()) {
    post.is_boost = true;
    post.boosted_id = string_or_empty(*reblog, "id");
    body = &*reblog;
  }
  post.content_html = string_or_empty(*body, "content");
  post.content_text = strip_html(post.content_html);
  if (auto tags = body->find("tags"); tags != body->end() && tags->is_array()) {
    for (const auto& tag : *tags) {
      auto name = tag.is_object() ? string_or_empty(tag, "name") : std::string{};
      if (!name.empty()) post.hashtags.push_back(lowercase(name));
    }
  }
  post.counts.boosts = count_or_zero(*body, "reblogs_count");
  post.counts.favorites = count_or_zero(*body, "favourites_count");
  return post;
}

}  // namespace braids::client
