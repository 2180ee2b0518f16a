#pragma once

#include <string>

#include "lfm/ast.hpp"

namespace lfm {

/// Renders a program back to source text in a canonical layout. Printing a
/// parsed program and re-parsing it yields the same canonical text, which the
/// test suite uses as a round-trip fixed point.
[[nodiscard]] std::string print_program(const SourceProgram& program);

[[nodiscard]] std::string print_script(const Script& script, int indent = 0);

[[nodiscard]] std::string print_expr(const Expr& expr);

}  // namespace lfm
