#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lfm {

/// Source position, 1-based. line == 0 means "no location".
struct SourcePos {
  int line{0};
  int col{0};
};

struct Diagnostic {
  std::string code;     // e.g. SYNTAX, INITIAL_COUNT, CAUSALITY
  std::string message;
  SourcePos pos;
};

class DiagList {
 public:
  void error(std::string code, std::string message, SourcePos pos = {}) {
    items_.push_back({std::move(code), std::move(message), pos});
  }

  [[nodiscard]] bool empty() const { return items_.empty(); }
  [[nodiscard]] const std::vector<Diagnostic>& items() const { return items_; }

  [[nodiscard]] bool has(std::string_view code) const {
    for (const auto& d : items_) {
      if (d.code == code) {
        return true;
      }
    }
    return false;
  }

  void append(const DiagList& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
  }

  /// Renders every diagnostic as `error[<CODE>] <file>:<line>:<col>: <message>`,
  /// one per line. Diagnostics without a location omit the position.
  [[nodiscard]] std::string render(std::string_view filename) const;

 private:
  std::vector<Diagnostic> items_;
};

}  // namespace lfm
