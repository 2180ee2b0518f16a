#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lfm/diag.hpp"
#include "lfm/time.hpp"

namespace lfm {

// ---------------------------------------------------------------------------
// Reaction scripts
//
// Reaction bodies are either a small interpreted script or a reference to a
// host-registered native handler. The script language is expression-oriented
// over 64-bit reals; every side effect goes through the reaction context
// (set / schedule / set_mode / state assignment).
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind {
  Number,      // real literal
  DurationLit, // exact integer-nanosecond literal; reads as seconds
  Name,        // state variable or parameter
  Get,         // get(port) / get(port, index)
  IsPresent,   // is_present(port)
  Time,        // time() -> logical time in seconds
  Unary,       // - !
  Binary,      // + - * / comparisons && ||
  Call,        // sin cos sqrt abs sign min max sat
};

struct PortName {
  std::string instance;  // empty for own ports
  std::string port;

  [[nodiscard]] std::string text() const {
    return instance.empty() ? port : instance + "." + port;
  }
  friend bool operator==(const PortName&, const PortName&) = default;
};

struct Expr {
  ExprKind kind{ExprKind::Number};
  SourcePos pos;
  double number{0.0};
  std::int64_t duration_nanos{0};
  std::string name;      // Name ident, Unary/Binary op, Call function
  PortName port;         // Get / IsPresent
  std::vector<ExprPtr> args;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

enum class StmtKind {
  Assign,    // <state> = expr
  SetPort,   // set(port, expr) or set(port, index, expr)
  Schedule,  // schedule(action, durationExpr)
  SetMode,   // set_mode(Mode)
  If,        // if (cond) {..} else {..}
};

struct Stmt {
  StmtKind kind{StmtKind::Assign};
  SourcePos pos;
  std::string name;           // Assign target, Schedule action, SetMode mode
  PortName port;              // SetPort target
  ExprPtr index;              // SetPort element index, null for scalar sets
  ExprPtr value;              // Assign/SetPort value, Schedule delay, If condition
  std::vector<StmtPtr> then_body;
  std::vector<StmtPtr> else_body;
};

struct Script {
  std::vector<StmtPtr> statements;
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

enum class PortDirection { Input, Output };

/// Scalar real or a fixed-length real vector (length > 0).
struct PayloadType {
  int vector_length{0};  // 0 = scalar

  [[nodiscard]] bool is_vector() const { return vector_length > 0; }
  friend bool operator==(const PayloadType&, const PayloadType&) = default;
};

struct PortDecl {
  std::string name;
  PortDirection direction{PortDirection::Input};
  PayloadType type;
  int mode_index{-1};  // ports may not live in modes; kept for diagnostics
  SourcePos pos;
};

struct StateVarDecl {
  std::string name;
  double initial{0.0};
  bool reset_marked{false};
  int mode_index{-1};  // -1 = reactor level
  SourcePos pos;
};

struct TimerDecl {
  std::string name;
  Duration offset{};
  Duration period{};  // zero period fires once
  int mode_index{-1};
  SourcePos pos;
};

enum class ActionKind { Logical, Physical };

struct ActionDecl {
  std::string name;
  ActionKind kind{ActionKind::Logical};
  Duration min_delay{};
  int mode_index{-1};
  SourcePos pos;
};

enum class TriggerKind { Port, Action, Timer, Startup, Shutdown, Reset };

struct TriggerRef {
  TriggerKind kind{TriggerKind::Port};
  PortName name;  // Port: instance.port; Action/Timer: name in `port`
  SourcePos pos;
};

enum class TransitionKind { Reset, History };

struct EffectRef {
  enum class Kind { Port, Action, Mode } kind{Kind::Port};
  PortName name;                 // Port: instance.port; Action/Mode: name in `port`
  TransitionKind transition{TransitionKind::Reset};  // Mode effects only
  SourcePos pos;
};

struct ReactionDecl {
  int index{0};  // declaration position within the reactor, 0-based
  std::vector<TriggerRef> triggers;
  std::vector<PortName> sources;
  std::vector<EffectRef> effects;
  std::shared_ptr<Script> script;  // null when native
  std::string native_key;          // extern "<key>"
  int mode_index{-1};
  SourcePos pos;
};

struct ConnectionDecl {
  PortName source;
  PortName destination;
  std::optional<Duration> after_delay;
  int mode_index{-1};
  SourcePos pos;
};

struct ParamDecl {
  std::string name;
  bool is_duration{false};
  double real_default{0.0};
  Duration duration_default{};
  SourcePos pos;
};

struct InstanceArg {
  std::string name;
  bool is_duration{false};
  double real_value{0.0};
  Duration duration_value{};
  SourcePos pos;
};

struct InstanceDecl {
  std::string name;
  std::string class_name;
  std::vector<InstanceArg> args;
  int mode_index{-1};
  SourcePos pos;
};

struct ModeDecl {
  std::string name;
  bool is_initial{false};
  int declared_in_mode{-1};  // non -1 only for the invalid nested case
  SourcePos pos;
};

struct ReactorClass {
  std::string name;
  bool is_main{false};
  std::vector<ParamDecl> parameters;
  std::vector<PortDecl> ports;
  std::vector<StateVarDecl> state_vars;
  std::vector<TimerDecl> timers;
  std::vector<ActionDecl> actions;
  std::vector<ReactionDecl> reactions;
  std::vector<ModeDecl> modes;
  std::vector<InstanceDecl> instances;
  std::vector<ConnectionDecl> connections;
  SourcePos pos;

  [[nodiscard]] const PortDecl* find_port(const std::string& n) const {
    for (const auto& p : ports) {
      if (p.name == n) {
        return &p;
      }
    }
    return nullptr;
  }
  [[nodiscard]] int find_mode(const std::string& n) const {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (modes[i].name == n) {
        return static_cast<int>(i);
      }
    }
    return -1;
  }
};

struct SourceProgram {
  std::string target;  // optional target header, ignored except for "script"
  std::vector<ReactorClass> reactors;

  [[nodiscard]] const ReactorClass* find_reactor(const std::string& n) const {
    for (const auto& r : reactors) {
      if (r.name == n) {
        return &r;
      }
    }
    return nullptr;
  }
  [[nodiscard]] const ReactorClass* main_reactor() const {
    for (const auto& r : reactors) {
      if (r.is_main) {
        return &r;
      }
    }
    return nullptr;
  }
};

}  // namespace lfm
