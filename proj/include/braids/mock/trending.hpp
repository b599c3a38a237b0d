#pragma once

#include "braids/core/timestamp.hpp"

namespace braids::mock {

/// Mock-only popularity score, monotone in interactions and decaying with
/// age: (boosts + favorites + 1) / (age_hours + 2)^1.5. Not Mastodon's
/// formula. Posts from the future are scored as age 0.
double trending_score(long long boosts, long long favorites, Timestamp created_at, Timestamp now);

}  // namespace braids::mock
