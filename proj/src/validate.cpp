#include "lfm/validate.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace lfm {

namespace {

class Validator {
 public:
  explicit Validator(SourceProgram& program) : program_(program) {}

  DiagList run() {
    check_main_count();
    for (auto& rc : program_.reactors) {
      check_reactor(rc);
    }
    check_instance_cycles();
    return std::move(diags_);
  }

 private:
  // -- per-reactor structural rules -----------------------------------------

  void check_reactor(ReactorClass& rc) {
    check_names(rc);
    check_modes(rc);
    check_instances(rc);
    check_connections(rc);
    for (auto& r : rc.reactions) {
      check_reaction(rc, r);
    }
  }

  void check_names(const ReactorClass& rc) {
    std::map<std::string, SourcePos> seen;
    auto declare = [&](const std::string& name, SourcePos pos) {
      auto [it, inserted] = seen.emplace(name, pos);
      if (!inserted) {
        diags_.error("DUPLICATE_NAME",
                     "`" + name + "` already declared in reactor `" + rc.name + "`", pos);
      }
    };
    for (const auto& p : rc.parameters) declare(p.name, p.pos);
    for (const auto& p : rc.ports) declare(p.name, p.pos);
    for (const auto& s : rc.state_vars) declare(s.name, s.pos);
    for (const auto& t : rc.timers) declare(t.name, t.pos);
    for (const auto& a : rc.actions) declare(a.name, a.pos);
    for (const auto& m : rc.modes) declare(m.name, m.pos);
    for (const auto& i : rc.instances) declare(i.name, i.pos);
  }

  void check_modes(const ReactorClass& rc) {
    int initial = 0;
    for (const auto& m : rc.modes) {
      if (m.is_initial) {
        ++initial;
      }
      if (m.declared_in_mode >= 0) {
        diags_.error("MODE_IN_MODE",
                     "mode `" + m.name + "` declared inside mode `" +
                         rc.modes[static_cast<std::size_t>(m.declared_in_mode)].name +
                         "`; modes cannot nest directly",
                     m.pos);
      }
    }
    if (!rc.modes.empty() && initial != 1) {
      diags_.error("INITIAL_COUNT",
                   "reactor `" + rc.name + "` declares " + std::to_string(initial) +
                       " initial modes; exactly one required",
                   rc.pos);
    }
    for (const auto& p : rc.ports) {
      if (p.mode_index >= 0) {
        diags_.error("PORT_IN_MODE",
                     "port `" + p.name + "` declared inside mode `" +
                         rc.modes[static_cast<std::size_t>(p.mode_index)].name +
                         "`; ports belong to the reactor level",
                     p.pos);
      }
    }
  }

  void check_instances(const ReactorClass& rc) {
    for (const auto& inst : rc.instances) {
      const ReactorClass* cls = program_.find_reactor(inst.class_name);
      if (cls == nullptr) {
        diags_.error("UNKNOWN_REF", "unknown reactor class `" + inst.class_name + "`", inst.pos);
        continue;
      }
      for (const auto& arg : inst.args) {
        const ParamDecl* param = nullptr;
        for (const auto& p : cls->parameters) {
          if (p.name == arg.name) {
            param = &p;
            break;
          }
        }
        if (param == nullptr) {
          diags_.error("UNKNOWN_REF",
                       "reactor `" + inst.class_name + "` has no parameter `" + arg.name + "`",
                       arg.pos);
          continue;
        }
        if (param->is_duration != arg.is_duration) {
          diags_.error("TYPE_MISMATCH",
                       "parameter `" + arg.name + "` of `" + inst.class_name + "` expects a " +
                           (param->is_duration ? "time" : "real") + " value",
                       arg.pos);
        }
      }
    }
  }

  // Resolves a dotted or plain name to a port declaration; `want_read` selects
  // the data-flow direction (true: something this reactor can read — own
  // inputs or contained outputs; false: something it can write).
  const PortDecl* resolve_port(const ReactorClass& rc, const PortName& name, bool want_read,
                               SourcePos pos, const char* what) {
    if (name.instance.empty()) {
      const PortDecl* p = rc.find_port(name.port);
      if (p == nullptr) {
        diags_.error("UNKNOWN_REF",
                     std::string(what) + " `" + name.text() + "` does not name a port of `" +
                         rc.name + "`",
                     pos);
        return nullptr;
      }
      const bool readable = p->direction == PortDirection::Input;
      if (readable != want_read) {
        diags_.error("UNKNOWN_REF",
                     std::string(what) + " `" + name.text() + "` has the wrong direction (" +
                         (want_read ? "expected an input of this reactor or an output of a "
                                      "contained reactor"
                                    : "expected an output of this reactor or an input of a "
                                      "contained reactor") +
                         ")",
                     pos);
        return nullptr;
      }
      return p;
    }
    const InstanceDecl* inst = nullptr;
    for (const auto& i : rc.instances) {
      if (i.name == name.instance) {
        inst = &i;
        break;
      }
    }
    if (inst == nullptr) {
      diags_.error("UNKNOWN_REF",
                   std::string(what) + " `" + name.text() + "`: no contained reactor named `" +
                       name.instance + "`",
                   pos);
      return nullptr;
    }
    const ReactorClass* cls = program_.find_reactor(inst->class_name);
    if (cls == nullptr) {
      return nullptr;  // UNKNOWN_REF on the instance already reported
    }
    const PortDecl* p = cls->find_port(name.port);
    if (p == nullptr) {
      diags_.error("UNKNOWN_REF",
                   std::string(what) + " `" + name.text() + "`: reactor `" + inst->class_name +
                       "` has no port `" + name.port + "`",
                   pos);
      return nullptr;
    }
    const bool readable = p->direction == PortDirection::Output;
    if (readable != want_read) {
      diags_.error("UNKNOWN_REF",
                   std::string(what) + " `" + name.text() + "` has the wrong direction",
                   pos);
      return nullptr;
    }
    return p;
  }

  void check_connections(const ReactorClass& rc) {
    for (const auto& c : rc.connections) {
      const PortDecl* src = resolve_port(rc, c.source, true, c.pos, "connection source");
      const PortDecl* dst = resolve_port(rc, c.destination, false, c.pos, "connection target");
      if (src != nullptr && dst != nullptr && !(src->type == dst->type)) {
        diags_.error("TYPE_MISMATCH",
                     "connection `" + c.source.text() + " -> " + c.destination.text() +
                         "` joins incompatible payload types",
                     c.pos);
      }
    }
  }

  // -- reactions -------------------------------------------------------------

  struct ScriptScope {
    const ReactorClass* rc{nullptr};
    const ReactionDecl* reaction{nullptr};
    // port name -> payload type for declared readable / writable ports
    std::map<std::string, PayloadType> readable;
    std::map<std::string, PayloadType> writable;
    std::set<std::string> actions;   // schedulable
    std::set<std::string> modes;     // set_mode-able
    std::set<std::string> presence;  // is_present-able (ports + triggers)
  };

  void check_reaction(ReactorClass& rc, ReactionDecl& r) {
    ScriptScope scope;
    scope.rc = &rc;
    scope.reaction = &r;
    bool has_shutdown = false;

    for (auto& t : r.triggers) {
      switch (t.kind) {
        case TriggerKind::Startup:
        case TriggerKind::Reset:
          continue;
        case TriggerKind::Shutdown:
          has_shutdown = true;
          continue;
        default:
          break;
      }
      // Plain names may be timers or actions; resolve before port lookup.
      if (t.name.instance.empty()) {
        bool matched = false;
        for (const auto& timer : rc.timers) {
          if (timer.name == t.name.port) {
            t.kind = TriggerKind::Timer;
            scope.presence.insert(t.name.port);
            matched = true;
            break;
          }
        }
        if (matched) {
          continue;
        }
        for (const auto& action : rc.actions) {
          if (action.name == t.name.port) {
            t.kind = TriggerKind::Action;
            scope.presence.insert(t.name.port);
            matched = true;
            break;
          }
        }
        if (matched) {
          continue;
        }
      }
      const PortDecl* p = resolve_port(rc, t.name, true, t.pos, "trigger");
      if (p != nullptr) {
        t.kind = TriggerKind::Port;
        scope.readable[t.name.text()] = p->type;
        scope.presence.insert(t.name.text());
      }
    }

    for (std::size_t i = 0; i < r.sources.size(); ++i) {
      const PortDecl* p = resolve_port(rc, r.sources[i], true, r.pos, "source");
      if (p != nullptr) {
        scope.readable[r.sources[i].text()] = p->type;
        scope.presence.insert(r.sources[i].text());
      }
    }

    bool has_mode_effect = false;
    for (auto& e : r.effects) {
      if (e.kind == EffectRef::Kind::Mode) {
        has_mode_effect = true;
        if (rc.find_mode(e.name.port) < 0) {
          diags_.error("UNKNOWN_REF",
                       "transition effect names unknown mode `" + e.name.port + "`", e.pos);
        } else {
          scope.modes.insert(e.name.port);
        }
        continue;
      }
      // Plain names may be actions.
      if (e.name.instance.empty()) {
        bool matched = false;
        for (const auto& action : rc.actions) {
          if (action.name == e.name.port) {
            e.kind = EffectRef::Kind::Action;
            scope.actions.insert(e.name.port);
            matched = true;
            break;
          }
        }
        if (matched) {
          continue;
        }
      }
      const PortDecl* p = resolve_port(rc, e.name, false, e.pos, "effect");
      if (p != nullptr) {
        e.kind = EffectRef::Kind::Port;
        scope.writable[e.name.text()] = p->type;
      }
    }

    if (has_shutdown && has_mode_effect) {
      diags_.error("SHUTDOWN_SET_MODE",
                   "shutdown-triggered reaction may not declare a mode transition", r.pos);
    }

    if (r.script) {
      check_body(scope, r.script->statements, has_shutdown);
    }
  }

  void check_body(const ScriptScope& scope, const std::vector<StmtPtr>& body, bool has_shutdown) {
    for (const auto& stmt : body) {
      check_stmt(scope, *stmt, has_shutdown);
    }
  }

  void check_stmt(const ScriptScope& scope, const Stmt& s, bool has_shutdown) {
    switch (s.kind) {
      case StmtKind::Assign: {
        if (!is_state_var(*scope.rc, s.name)) {
          if (is_param(*scope.rc, s.name)) {
            diags_.error("UNKNOWN_REF",
                         "`" + s.name + "` is a parameter and cannot be assigned", s.pos);
          } else {
            diags_.error("UNKNOWN_REF", "unknown state variable `" + s.name + "`", s.pos);
          }
        }
        check_expr(scope, *s.value);
        break;
      }
      case StmtKind::SetPort: {
        auto it = scope.writable.find(s.port.text());
        if (it == scope.writable.end()) {
          diags_.error("EFFECT_UNDECLARED",
                       "set() targets port `" + s.port.text() +
                           "` which is not declared as an effect of this reaction",
                       s.pos);
        } else {
          const bool indexed = s.index != nullptr;
          if (indexed != it->second.is_vector()) {
            diags_.error("TYPE_MISMATCH",
                         indexed
                             ? "set() with an element index targets scalar port `" +
                                   s.port.text() + "`"
                             : "vector port `" + s.port.text() + "` must be set element-wise",
                         s.pos);
          } else if (indexed && s.index->kind == ExprKind::Number) {
            const int len = it->second.vector_length;
            const double idx = s.index->number;
            if (idx < 0 || idx >= len) {
              diags_.error("TYPE_MISMATCH",
                           "index " + std::to_string(static_cast<long long>(idx)) +
                               " out of range for `" + s.port.text() + "` of length " +
                               std::to_string(len),
                           s.pos);
            }
          }
        }
        if (s.index) {
          check_expr(scope, *s.index);
        }
        check_expr(scope, *s.value);
        break;
      }
      case StmtKind::Schedule: {
        if (scope.actions.find(s.name) == scope.actions.end()) {
          diags_.error("EFFECT_UNDECLARED",
                       "schedule() targets action `" + s.name +
                           "` which is not declared as an effect of this reaction",
                       s.pos);
        }
        check_expr(scope, *s.value);
        break;
      }
      case StmtKind::SetMode: {
        if (has_shutdown) {
          diags_.error("SHUTDOWN_SET_MODE",
                       "shutdown-triggered reaction may not call set_mode()", s.pos);
        }
        if (scope.modes.find(s.name) == scope.modes.end()) {
          diags_.error("EFFECT_UNDECLARED",
                       "set_mode() targets mode `" + s.name +
                           "` which is not declared as a transition effect of this reaction",
                       s.pos);
        }
        break;
      }
      case StmtKind::If: {
        check_expr(scope, *s.value);
        check_body(scope, s.then_body, has_shutdown);
        check_body(scope, s.else_body, has_shutdown);
        break;
      }
    }
  }

  void check_expr(const ScriptScope& scope, const Expr& e) {
    switch (e.kind) {
      case ExprKind::Name:
        if (!is_state_var(*scope.rc, e.name) && !is_param(*scope.rc, e.name)) {
          diags_.error("UNKNOWN_REF",
                       "unknown state variable or parameter `" + e.name + "`", e.pos);
        }
        break;
      case ExprKind::Get: {
        auto it = scope.readable.find(e.port.text());
        if (it == scope.readable.end()) {
          diags_.error("SOURCE_UNDECLARED",
                       "get() reads port `" + e.port.text() +
                           "` which is not declared as a trigger or source of this reaction",
                       e.pos);
        } else {
          const bool indexed = !e.args.empty();
          if (indexed != it->second.is_vector()) {
            diags_.error("TYPE_MISMATCH",
                         indexed ? "get() with an element index reads scalar port `" +
                                       e.port.text() + "`"
                                 : "vector port `" + e.port.text() +
                                       "` must be read element-wise",
                         e.pos);
          } else if (indexed && e.args[0]->kind == ExprKind::Number) {
            const int len = it->second.vector_length;
            const double idx = e.args[0]->number;
            if (idx < 0 || idx >= len) {
              diags_.error("TYPE_MISMATCH",
                           "index " + std::to_string(static_cast<long long>(idx)) +
                               " out of range for `" + e.port.text() + "` of length " +
                               std::to_string(len),
                           e.pos);
            }
          }
        }
        for (const auto& a : e.args) {
          check_expr(scope, *a);
        }
        break;
      }
      case ExprKind::IsPresent:
        if (scope.presence.find(e.port.text()) == scope.presence.end()) {
          diags_.error("SOURCE_UNDECLARED",
                       "is_present() checks `" + e.port.text() +
                           "` which is not declared as a trigger or source of this reaction",
                       e.pos);
        }
        break;
      case ExprKind::Unary:
      case ExprKind::Binary:
      case ExprKind::Call:
        for (const auto& a : e.args) {
          check_expr(scope, *a);
        }
        if (e.kind == ExprKind::Call) {
          check_call_arity(e);
        }
        break;
      case ExprKind::Number:
      case ExprKind::DurationLit:
      case ExprKind::Time:
        break;
    }
  }

  void check_call_arity(const Expr& e) {
    std::size_t want = 1;
    if (e.name == "min" || e.name == "max") {
      want = 2;
    } else if (e.name == "sat") {
      want = 3;
    }
    if (e.args.size() != want) {
      diags_.error("SYNTAX",
                   e.name + "() expects " + std::to_string(want) + " argument" +
                       (want == 1 ? "" : "s") + ", got " + std::to_string(e.args.size()),
                   e.pos);
    }
  }

  static bool is_state_var(const ReactorClass& rc, const std::string& name) {
    for (const auto& s : rc.state_vars) {
      if (s.name == name) {
        return true;
      }
    }
    return false;
  }
  static bool is_param(const ReactorClass& rc, const std::string& name) {
    for (const auto& p : rc.parameters) {
      if (p.name == name) {
        return true;
      }
    }
    return false;
  }

  // -- whole-program rules ----------------------------------------------------

  void check_main_count() {
    int mains = 0;
    for (const auto& rc : program_.reactors) {
      if (rc.is_main) {
        ++mains;
      }
    }
    if (mains != 1) {
      diags_.error("MAIN_COUNT",
                   "program declares " + std::to_string(mains) +
                       " main reactors; exactly one required");
    }
  }

  void check_instance_cycles() {
    // Colors: 0 unvisited, 1 on stack, 2 done.
    std::map<std::string, int> color;
    std::vector<std::string> stack;
    for (const auto& rc : program_.reactors) {
      if (color[rc.name] == 0) {
        dfs_cycle(rc, color, stack);
      }
    }
  }

  void dfs_cycle(const ReactorClass& rc, std::map<std::string, int>& color,
                 std::vector<std::string>& stack) {
    color[rc.name] = 1;
    stack.push_back(rc.name);
    for (const auto& inst : rc.instances) {
      const ReactorClass* cls = program_.find_reactor(inst.class_name);
      if (cls == nullptr) {
        continue;
      }
      if (color[cls->name] == 1) {
        std::string path;
        bool in_cycle = false;
        for (const auto& name : stack) {
          if (name == cls->name) {
            in_cycle = true;
          }
          if (in_cycle) {
            path += name + " -- ";
          }
        }
        path += cls->name;
        diags_.error("INSTANCE_CYCLE", "reactor instantiation cycle: " + path, inst.pos);
        continue;
      }
      if (color[cls->name] == 0) {
        dfs_cycle(*cls, color, stack);
      }
    }
    stack.pop_back();
    color[rc.name] = 2;
  }

  SourceProgram& program_;
  DiagList diags_;
};

}  // namespace

DiagList validate_program(SourceProgram& program) {
  Validator v(program);
  return v.run();
}

}  // namespace lfm
