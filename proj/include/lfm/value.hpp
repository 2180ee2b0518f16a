#pragma once

#include <string>
#include <variant>
#include <vector>

namespace lfm {

/// Payload carried by ports, actions, and events. Absent (monostate) means
/// the trigger is pure presence with no data.
using Value = std::variant<std::monostate, double, std::vector<double>>;

inline bool has_value(const Value& v) { return !std::holds_alternative<std::monostate>(v); }

/// Decimal rendering with 17 significant digits, enough to round-trip a
/// double exactly.
std::string format_real(double v);

std::string format_value(const Value& v);

}  // namespace lfm
