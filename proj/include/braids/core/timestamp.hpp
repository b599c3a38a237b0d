#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace braids {

/// UTC instant with millisecond precision.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses RFC 3339 timestamps as emitted by Mastodon, e.g.
/// "2024-03-01T12:30:00.000Z". Offsets other than Z/+00:00 are applied.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_timestamp(Timestamp ts);

}  // namespace braids
