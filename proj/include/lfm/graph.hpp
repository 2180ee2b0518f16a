#pragma once

#include "lfm/diag.hpp"
#include "lfm/instance.hpp"

namespace lfm {

/// True iff the innermost-mode ancestor chains of the two scopes pass through
/// two different modes of the same modal reactor instance; such scopes can
/// never both be active, so dependencies between them are spurious.
[[nodiscard]] bool mutually_exclusive(const ModeInstance* a, const ModeInstance* b);
[[nodiscard]] bool mutually_exclusive(const ReactionInstance& a, const ReactionInstance& b);

/// Builds the reaction dependency graph (intra-reactor precedence plus
/// dataflow through non-delayed connections), rejects ports fed by writers
/// that are not pairwise mutually exclusive, prunes exclusive dependency
/// pairs, rejects residual cycles, and assigns longest-path levels into
/// ReactionInstance::level. Returns all MULTIWRITER / CAUSALITY diagnostics.
DiagList analyze_graph(InstanceTree& tree);

}  // namespace lfm
