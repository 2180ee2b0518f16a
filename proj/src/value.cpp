#include "lfm/value.hpp"

#include <cstdio>

namespace lfm {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_value(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    return format_real(*d);
  }
  if (const auto* vec = std::get_if<std::vector<double>>(&v)) {
    std::string out = "[";
    for (std::size_t i = 0; i < vec->size(); ++i) {
      if (i > 0) {
        out += ";";
      }
      out += format_real((*vec)[i]);
    }
    out += "]";
    return out;
  }
  return "absent";
}

}  // namespace lfm
