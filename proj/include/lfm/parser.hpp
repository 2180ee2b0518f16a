#pragma once

#include <string_view>

#include "lfm/ast.hpp"
#include "lfm/diag.hpp"

namespace lfm {

struct ParseResult {
  SourceProgram program;
  DiagList diags;

  [[nodiscard]] bool ok() const { return diags.empty(); }
};

/// Parses a full program. Stops at the first syntax error; the diagnostic
/// carries the position and the expected-token set.
ParseResult parse_program(std::string_view text);

}  // namespace lfm
