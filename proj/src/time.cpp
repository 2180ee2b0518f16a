#include "lfm/time.hpp"

#include <cctype>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace lfm {

Ordering compare(const Tag& a, const Tag& b) noexcept {
  if (a < b) {
    return Ordering::Less;
  }
  if (b < a) {
    return Ordering::Greater;
  }
  return Ordering::Equal;
}

Tag shift(const Tag& base, const Tag& offset) {
  if (offset.time_ns > 0) {
    std::int64_t t = 0;
    if (__builtin_add_overflow(base.time_ns, offset.time_ns, &t)) {
      throw std::overflow_error("tag time overflow in shift");
    }
    return Tag{t, offset.microstep};
  }
  return Tag{base.time_ns, base.microstep + offset.microstep + 1};
}

Tag tag_delta(const Tag& due, const Tag& leave_time) {
  if (due < leave_time) {
    throw std::logic_error("tag_delta: due tag precedes leave time");
  }
  const std::int64_t dt = due.time_ns - leave_time.time_ns;
  if (dt > 0) {
    return Tag{dt, due.microstep};
  }
  const std::uint64_t dm =
      due.microstep > leave_time.microstep ? due.microstep - leave_time.microstep - 1 : 0;
  return Tag{0, dm};
}

std::string to_string(const Tag& tag) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "t=%lld m=%llu", static_cast<long long>(tag.time_ns),
                static_cast<unsigned long long>(tag.microstep));
  return buf;
}

std::optional<Duration> parse_duration(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) != 0) {
      ++i;
    }
  };
  skip_ws();
  if (i >= text.size() || std::isdigit(static_cast<unsigned char>(text[i])) == 0) {
    return std::nullopt;
  }
  std::int64_t value = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])) != 0) {
    const int digit = text[i] - '0';
    if (value > (std::numeric_limits<std::int64_t>::max() - digit) / 10) {
      return std::nullopt;
    }
    value = value * 10 + digit;
    ++i;
  }
  skip_ws();
  std::size_t unit_start = i;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])) != 0) {
    ++i;
  }
  const std::string_view unit = text.substr(unit_start, i - unit_start);
  skip_ws();
  if (i != text.size()) {
    return std::nullopt;
  }
  std::int64_t scale = 0;
  if (unit == "nsec") {
    scale = 1;
  } else if (unit == "usec") {
    scale = kNanosPerUsec;
  } else if (unit == "msec") {
    scale = kNanosPerMsec;
  } else if (unit == "sec") {
    scale = kNanosPerSec;
  } else {
    return std::nullopt;
  }
  if (value != 0 && value > std::numeric_limits<std::int64_t>::max() / scale) {
    return std::nullopt;
  }
  return Duration{value * scale};
}

std::string to_string(const Duration& d) {
  std::int64_t value = d.nanos;
  const char* unit = "nsec";
  if (value != 0 && value % kNanosPerSec == 0) {
    value /= kNanosPerSec;
    unit = "sec";
  } else if (value != 0 && value % kNanosPerMsec == 0) {
    value /= kNanosPerMsec;
    unit = "msec";
  } else if (value != 0 && value % kNanosPerUsec == 0) {
    value /= kNanosPerUsec;
    unit = "usec";
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%lld %s", static_cast<long long>(value), unit);
  return buf;
}

}  // namespace lfm
