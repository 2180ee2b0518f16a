#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lfm/ast.hpp"
#include "lfm/diag.hpp"
#include "lfm/time.hpp"
#include "lfm/value.hpp"

namespace lfm {

struct ReactorInstance;
struct ModeInstance;
struct ReactionInstance;
struct ConnectionInstance;
class ReactionContext;

/// Everything that can own an event in the queue carries a globally unique
/// ordinal, assigned in instantiation order. The queue is keyed by
/// (tag, ordinal), which makes pop order independent of insertion order.

struct TimerInstance {
  const TimerDecl* decl{nullptr};
  ReactorInstance* reactor{nullptr};
  ModeInstance* mode{nullptr};  // innermost enclosing mode, null = always active
  int ordinal{0};
  std::vector<ReactionInstance*> reactions;  // triggered by this timer
};

struct ActionInstance {
  const ActionDecl* decl{nullptr};
  ReactorInstance* reactor{nullptr};
  ModeInstance* mode{nullptr};
  int ordinal{0};
  std::vector<ReactionInstance*> reactions;
};

struct PortInstance {
  const PortDecl* decl{nullptr};
  ReactorInstance* reactor{nullptr};
  ModeInstance* mode{nullptr};
  std::vector<ConnectionInstance*> outgoing;  // connections with this source
  std::vector<ReactionInstance*> reactions;   // readers triggered by this port

  // Runtime: the port is present at tag T iff value_tag == T.
  Value value;
  Tag value_tag{-1, 0};

  [[nodiscard]] std::string qualified_name() const;
};

struct ConnectionInstance {
  const ConnectionDecl* decl{nullptr};
  ReactorInstance* container{nullptr};
  PortInstance* from{nullptr};
  PortInstance* to{nullptr};
  ModeInstance* mode{nullptr};  // innermost enclosing mode of the connection
  int ordinal{0};               // event identity for after-delayed delivery
  bool has_delay{false};
  Duration delay{};
};

struct ModeInstance {
  const ModeDecl* decl{nullptr};
  ReactorInstance* reactor{nullptr};
  bool is_initial{false};

  // Algorithm state: when the mode was last left, whether a reset entry is
  // pending, and whether the mode ever became active.
  Tag leave_time{0, 0};
  bool reset_pending{false};
  bool had_startup{false};

  int startup_ordinal{0};  // synthetic queue triggers for the next-microstep
  int reset_ordinal{0};    // startup/reset reactions of this mode's scope

  // Reactions whose innermost enclosing mode is this one (this includes
  // reactions of nested non-modal reactors).
  std::vector<ReactionInstance*> startup_reactions;
  std::vector<ReactionInstance*> reset_reactions;
  std::vector<ReactionInstance*> shutdown_reactions;

  [[nodiscard]] const std::string& name() const { return decl->name; }
};

enum class Transition { None, Reset, History };

struct ModeEffect {
  ModeInstance* target{nullptr};
  TransitionKind kind{TransitionKind::Reset};
};

/// Presence query targets for is_present(): ports, timers, or actions.
struct PresenceRef {
  PortInstance* port{nullptr};
  TimerInstance* timer{nullptr};
  ActionInstance* action{nullptr};
};

struct ReactionInstance {
  const ReactionDecl* decl{nullptr};
  ReactorInstance* reactor{nullptr};
  ModeInstance* mode{nullptr};
  int level{0};

  bool has_startup{false};
  bool has_shutdown{false};
  bool has_reset{false};
  std::vector<PortInstance*> port_triggers;
  std::vector<TimerInstance*> timer_triggers;
  std::vector<ActionInstance*> action_triggers;
  std::vector<PortInstance*> sources;
  std::vector<PortInstance*> effect_ports;
  std::vector<ActionInstance*> effect_actions;
  std::vector<ModeEffect> effect_modes;

  // Script environment, resolved once at instantiation.
  std::map<std::string, PortInstance*> readable;
  std::map<std::string, PortInstance*> writable;
  std::map<std::string, ActionInstance*> schedulable;
  std::map<std::string, ModeEffect> mode_targets;
  std::map<std::string, PresenceRef> presence;

  // Bound native handler for `extern` reactions; empty for script reactions.
  std::function<void(ReactionContext&)> native;

  [[nodiscard]] std::string qualified_name() const;
};

struct ReactorInstance {
  const ReactorClass* cls{nullptr};
  ReactorInstance* parent{nullptr};
  ModeInstance* enclosing_mode{nullptr};  // transitive: nearest mode up the tree
  std::string name;
  std::string qualified_name;

  std::map<std::string, double> real_params;
  std::map<std::string, Duration> time_params;
  std::map<std::string, double> state;

  std::vector<std::unique_ptr<PortInstance>> ports;
  std::vector<std::unique_ptr<TimerInstance>> timers;
  std::vector<std::unique_ptr<ActionInstance>> actions;
  std::vector<std::unique_ptr<ReactionInstance>> reactions;
  std::vector<std::unique_ptr<ModeInstance>> modes;
  std::vector<std::unique_ptr<ConnectionInstance>> connections;
  std::vector<std::unique_ptr<ReactorInstance>> children;

  // Modal bookkeeping (empty modes => all four stay null/None).
  ModeInstance* initial_mode{nullptr};
  ModeInstance* current_mode{nullptr};
  ModeInstance* next_mode{nullptr};
  Transition transition{Transition::None};

  [[nodiscard]] PortInstance* find_port(const std::string& port_name) const;
  [[nodiscard]] ReactorInstance* find_child(const std::string& child_name) const;
  [[nodiscard]] ModeInstance* find_mode(const std::string& mode_name) const;
  [[nodiscard]] bool is_modal() const { return !modes.empty(); }
};

/// Flattened instance tree plus traversal orders used by the engine: reactors
/// and modes in top-down (pre-)order, which guarantees parents precede
/// children during transition processing.
struct InstanceTree {
  std::unique_ptr<ReactorInstance> main;
  std::vector<ReactorInstance*> reactors;    // pre-order
  std::vector<ReactionInstance*> reactions;  // pre-order, declaration order
  std::vector<ModeInstance*> modes;          // pre-order
  std::vector<TimerInstance*> timers;
  std::vector<PortInstance*> ports;
  std::vector<ActionInstance*> actions;
  std::vector<ConnectionInstance*> connections;
  int startup_ordinal{0};  // global program-start trigger
  int ordinal_count{0};
};

/// Builds the instance tree for a validated program. Resolves parameters,
/// wires connections, fills every reaction's script environment, and assigns
/// trigger ordinals. Must not be called on programs that failed validation.
InstanceTree instantiate(const SourceProgram& program);

}  // namespace lfm
