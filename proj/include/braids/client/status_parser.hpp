#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "braids/core/types.hpp"

namespace braids::client {

/// Plain-text rendering of a status body: tags removed, paragraph and line
/// breaks become newlines, common entities decoded.
std::string strip_html(std::string_view html);

/// "user@domain", lowercase. Local accounts report a bare acct; their domain
/// is taken from the profile URL, falling back to `instance_host`.
std::string qualify_handle(std::string_view acct, std::string_view profile_url,
                           std::string_view instance_host);

/// Maps a Mastodon status entity onto Post. A reblog's body, tags and counts
/// come from the boosted status; author and timestamp stay the booster's.
/// Throws std::invalid_argument on a missing id or unparseable created_at.
Post parse_status(const nlohmann::json& status, std::string_view instance_host);

/// Scheme and authority only, e.g. "https://example.social" → "example.social".
std::string host_of(std::string_view url);

std::string url_encode(std::string_view text);

}  // namespace braids::client
