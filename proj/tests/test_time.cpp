#include <gtest/gtest.h>

#include <random>

#include "lfm/time.hpp"

namespace lfm {
namespace {

constexpr std::int64_t kSec = kNanosPerSec;
constexpr std::int64_t kMsec = kNanosPerMsec;

TEST(TagOrder, MicrostepBreaksTies) {
  EXPECT_LT((Tag{5 * kSec, 0}), (Tag{5 * kSec, 1}));
  EXPECT_EQ(compare(Tag{5 * kSec, 0}, Tag{5 * kSec, 1}), Ordering::Less);
}

TEST(TagOrder, TimeDominatesMicrostep) {
  EXPECT_LT((Tag{1 * kSec, 9}), (Tag{2 * kSec, 0}));
  EXPECT_EQ(compare(Tag{1 * kSec, 9}, Tag{2 * kSec, 0}), Ordering::Less);
}

TEST(TagOrder, Reflexive) {
  EXPECT_EQ((Tag{3 * kSec, 4}), (Tag{3 * kSec, 4}));
  EXPECT_EQ(compare(Tag{3 * kSec, 4}, Tag{3 * kSec, 4}), Ordering::Equal);
}

TEST(Shift, PositiveTimeOffsetTakesOffsetMicrostep) {
  EXPECT_EQ(shift(Tag{5 * kSec, 2}, Tag{3 * kSec, 1}), (Tag{8 * kSec, 1}));
}

TEST(Shift, ZeroTimeOffsetAdvancesMicrostep) {
  EXPECT_EQ(shift(Tag{5 * kSec, 2}, Tag{0, 0}), (Tag{5 * kSec, 3}));
}

TEST(Shift, ZeroTimeCaseAppliedLiterally) {
  EXPECT_EQ(shift(Tag{0, 0}, Tag{0, 4}), (Tag{0, 5}));
}

TEST(Shift, StrictlyFutureOverRandomPairs) {
  std::mt19937_64 rng(0xA11CE);
  std::uniform_int_distribution<std::int64_t> time_dist(0, 4'000'000'000'000);
  std::uniform_int_distribution<std::uint64_t> micro_dist(0, 1'000'000);
  for (int i = 0; i < 10'000; ++i) {
    const Tag base{time_dist(rng), micro_dist(rng)};
    const Tag offset{time_dist(rng), micro_dist(rng)};
    const Tag shifted = shift(base, offset);
    ASSERT_GT(shifted, base) << "base " << to_string(base) << " offset " << to_string(offset);
  }
}

TEST(Shift, PositiveTimeOffsetDiscardsBaseMicrostep) {
  std::mt19937_64 rng(0xBEEF);
  std::uniform_int_distribution<std::int64_t> time_dist(1, 4'000'000'000'000);
  std::uniform_int_distribution<std::uint64_t> micro_dist(0, 1'000'000);
  for (int i = 0; i < 10'000; ++i) {
    const std::int64_t t = time_dist(rng);
    const Tag offset{time_dist(rng), micro_dist(rng)};
    const Tag a = shift(Tag{t, micro_dist(rng)}, offset);
    const Tag b = shift(Tag{t, micro_dist(rng)}, offset);
    ASSERT_EQ(a, b);
    ASSERT_EQ(a.microstep, offset.microstep);
  }
}

TEST(Shift, TimeOverflowIsFatal) {
  const Tag huge{std::numeric_limits<std::int64_t>::max() - 5, 0};
  EXPECT_THROW(shift(huge, Tag{10, 0}), std::overflow_error);
}

TEST(TagDelta, RemainingDelayOfSuspendedAction) {
  // An action due at 1350 msec suspended when its mode was left at 1 sec
  // keeps a remainder of 350 msec.
  EXPECT_EQ(tag_delta(Tag{1350 * kMsec, 0}, Tag{1 * kSec, 0}), (Tag{350 * kMsec, 0}));
}

TEST(TagDelta, EqualTagsYieldZeroZero) {
  // Zero remainder: re-enqueued one microstep after re-entry.
  const Tag leave{2 * kSec, 1};
  EXPECT_EQ(tag_delta(leave, leave), (Tag{0, 0}));
  EXPECT_EQ(shift(leave, Tag{0, 0}), (Tag{2 * kSec, 2}));
}

TEST(TagDelta, MicrostepOnlyDifference) {
  // due (2 sec,3) with leave (2 sec,1): offset (0,1) shifts two microsteps.
  const Tag due{2 * kSec, 3};
  const Tag leave{2 * kSec, 1};
  const Tag delta = tag_delta(due, leave);
  EXPECT_EQ(delta, (Tag{0, 1}));
  EXPECT_EQ(shift(leave, delta), due);
}

TEST(TagDelta, ShiftInverseOverRandomPairs) {
  // For every strictly ordered pair, tag_delta is the exact inverse of shift.
  std::mt19937_64 rng(0xD00D);
  std::uniform_int_distribution<std::int64_t> time_dist(0, 4'000'000'000'000);
  std::uniform_int_distribution<std::uint64_t> micro_dist(0, 1'000'000);
  for (int i = 0; i < 10'000; ++i) {
    Tag a{time_dist(rng), micro_dist(rng)};
    Tag b{time_dist(rng), micro_dist(rng)};
    if (b < a) {
      std::swap(a, b);
    }
    if (a == b) {
      continue;
    }
    ASSERT_EQ(shift(a, tag_delta(b, a)), b)
        << "leave " << to_string(a) << " due " << to_string(b);
  }
}

TEST(DurationParse, UnitsScaleExactly) {
  EXPECT_EQ(parse_duration("1 sec")->nanos, kSec);
  EXPECT_EQ(parse_duration("250 msec")->nanos, 250 * kMsec);
  EXPECT_EQ(parse_duration("7 usec")->nanos, 7 * kNanosPerUsec);
  EXPECT_EQ(parse_duration("42 nsec")->nanos, 42);
  EXPECT_EQ(parse_duration("100msec")->nanos, 100 * kMsec);
}

TEST(DurationParse, RejectsMalformedInput) {
  EXPECT_FALSE(parse_duration("").has_value());
  EXPECT_FALSE(parse_duration("12").has_value());
  EXPECT_FALSE(parse_duration("sec").has_value());
  EXPECT_FALSE(parse_duration("-5 msec").has_value());
  EXPECT_FALSE(parse_duration("1.5 sec").has_value());
  EXPECT_FALSE(parse_duration("3 hours").has_value());
}

}  // namespace
}  // namespace lfm
