#include <gtest/gtest.h>

#include "braids/core/timestamp.hpp"

namespace braids {
namespace {

TEST(Timestamp, ParsesMastodonFormat) {
  auto ts = parse_timestamp("2024-03-01T12:30:05.250Z");
  ASSERT_TRUE(ts);
  EXPECT_EQ(format_timestamp(*ts), "2024-03-01T12:30:05.250Z");
  // 2024-03-01 is day 19783 since the epoch.
  EXPECT_EQ(ts->time_since_epoch().count(), 19783LL * 86400000 + (12 * 3600 + 30 * 60 + 5) * 1000LL + 250);
}

TEST(Timestamp, AppliesOffsetAndPadsFraction) {
  auto a = parse_timestamp("2024-03-01T14:30:05.5+02:00");
  auto b = parse_timestamp("2024-03-01T12:30:05.500Z");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(*a, *b);
  EXPECT_TRUE(parse_timestamp("2024-03-01T12:30:05Z"));
}

TEST(Timestamp, RejectsGarbage) {
  EXPECT_FALSE(parse_timestamp(""));
  EXPECT_FALSE(parse_timestamp("2024-13-01T00:00:00Z"));
  EXPECT_FALSE(parse_timestamp("2024-02-30T00:00:00Z"));
  EXPECT_FALSE(parse_timestamp("2024-03-01T00:00:00"));
  EXPECT_FALSE(parse_timestamp("2024-03-01T00:00:00Zjunk"));
}

}  // namespace
}  // namespace braids
