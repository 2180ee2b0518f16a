#pragma once

#include <string>

#include "lfm/ast.hpp"

namespace lfm {

struct DotOptions {
  /// Label transition edges with the trigger names of the switching reaction.
  bool show_labels{true};
  /// With labels off, merge parallel transitions between the same pair of
  /// modes (same transition kind) into a single edge.
  bool bundle_transitions{false};
};

/// Renders the instantiated hierarchy of a validated program as DOT text:
/// reactors as clusters, modes as nested clusters (initial mode with a
/// doubled border), ports/timers/actions/reactions as nodes, connections and
/// trigger/effect edges, and one transition edge per declared mode effect.
/// Reactor ports referenced from inside a mode appear as duplicated port
/// nodes within the mode cluster, keeping dataflow edges local. Emission
/// follows declaration order throughout, so output is byte-stable.
std::string emit_dot(const SourceProgram& program, const DotOptions& options);

}  // namespace lfm
