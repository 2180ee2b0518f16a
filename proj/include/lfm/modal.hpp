#pragma once

#include "lfm/instance.hpp"

namespace lfm {

class Engine;

/// True when `mode` and every enclosing mode up the hierarchy is the current
/// mode of its reactor. A null mode (element outside any mode) is always
/// active.
[[nodiscard]] bool is_active(const ModeInstance* mode);

/// End-of-tick mode switching. Four passes over the reactor tree in
/// deterministic pre-order:
///   1. cascade: reactors inside a mode whose reactor is taking a reset
///      transition are forced back to their initial mode (reset),
///   2. apply each pending transition — restart or discard the entered
///      mode's stored events (reset) or re-time them relative to the time
///      spent away (history) — then switch current mode,
///   2b. resume any remaining stored events whose scope became active,
///   3. newly active modes get startup/reset triggers one microstep later,
///      and reset-marked state in a freshly reset scope is restored,
///   4. events whose scope went inactive move to the suspended store.
void process_transitions(Engine& engine);

}  // namespace lfm
