#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lfm {

/// Superdense logical time: a (time, microstep) pair ordered
/// lexicographically. Time is integer nanoseconds since program start,
/// so comparisons are total and traces are exactly reproducible.
struct Tag {
  std::int64_t time_ns{0};
  std::uint64_t microstep{0};

  friend auto operator<=>(const Tag&, const Tag&) = default;
};

/// Non-negative time interval in integer nanoseconds.
struct Duration {
  std::int64_t nanos{0};

  static constexpr Duration zero() noexcept { return Duration{0}; }
  friend auto operator<=>(const Duration&, const Duration&) = default;
};

constexpr std::int64_t kNanosPerUsec = 1000;
constexpr std::int64_t kNanosPerMsec = 1000 * 1000;
constexpr std::int64_t kNanosPerSec = 1000 * 1000 * 1000;

enum class Ordering { Less, Equal, Greater };

Ordering compare(const Tag& a, const Tag& b) noexcept;

/// Shifts `base` into the future by `offset`. A zero time offset still
/// advances: the result lands `offset.microstep + 1` microsteps later at the
/// same time value, so the result is always strictly greater than `base`.
/// Throws std::overflow_error if the time addition overflows.
Tag shift(const Tag& base, const Tag& offset);

/// Offset such that shift(leave_time, result) == due when due lies strictly
/// in leave_time's future; at equal tags the result is (0,0), which shifts to
/// one microstep after re-entry. Requires due >= leave_time.
Tag tag_delta(const Tag& due, const Tag& leave_time);

/// Renders a tag as `t=<nanos> m=<microstep>`.
std::string to_string(const Tag& tag);

/// Parses `<int> (nsec|usec|msec|sec)`; whitespace between the number and
/// unit is optional. Returns nullopt on malformed or negative input.
std::optional<Duration> parse_duration(std::string_view text);

std::string to_string(const Duration& d);

}  // namespace lfm
