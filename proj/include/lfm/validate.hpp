#pragma once

#include "lfm/ast.hpp"
#include "lfm/diag.hpp"

namespace lfm {

/// Checks a parsed program against the static rules: one main reactor, one
/// initial mode per modal reactor, no ports or nested modes inside modes,
/// unique names per reactor, resolvable references, connection type
/// agreement, script effect/source discipline, and instantiation acyclicity.
///
/// Resolves trigger and effect kinds in place (timer vs action vs port), so
/// instantiation can rely on them. Graph-level checks (multi-writer ports,
/// causality) run later on the instantiated program.
DiagList validate_program(SourceProgram& program);

}  // namespace lfm
