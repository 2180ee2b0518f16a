#include "lfm/diag.hpp"

#include <sstream>

namespace lfm {

std::string DiagList::render(std::string_view filename) const {
  std::ostringstream out;
  for (const auto& d : items_) {
    if (d.pos.line > 0) {
      out << "error[" << d.code << "] " << filename << ":" << d.pos.line << ":" << d.pos.col
          << ": ";
    } else {
      out << "error[" << d.code << "]: ";
    }
    out << d.message << "\n";
  }
  return out.str();
}

}  // namespace lfm
