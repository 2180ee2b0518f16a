#include "lfm/instance.hpp"

#include <cassert>
#include <stdexcept>

namespace lfm {

std::string PortInstance::qualified_name() const {
  return reactor->qualified_name + "." + decl->name;
}

std::string ReactionInstance::qualified_name() const { return reactor->qualified_name; }

PortInstance* ReactorInstance::find_port(const std::string& port_name) const {
  for (const auto& p : ports) {
    if (p->decl->name == port_name) {
      return p.get();
    }
  }
  return nullptr;
}

ReactorInstance* ReactorInstance::find_child(const std::string& child_name) const {
  for (const auto& c : children) {
    if (c->name == child_name) {
      return c.get();
    }
  }
  return nullptr;
}

ModeInstance* ReactorInstance::find_mode(const std::string& mode_name) const {
  for (const auto& m : modes) {
    if (m->decl->name == mode_name) {
      return m.get();
    }
  }
  return nullptr;
}

namespace {

class Builder {
 public:
  explicit Builder(const SourceProgram& program) : program_(program) {}

  InstanceTree build() {
    const ReactorClass* main_class = program_.main_reactor();
    assert(main_class != nullptr && "instantiate requires a validated program");
    tree_.startup_ordinal = next_ordinal_++;
    std::string main_name = main_class->name == "Main" ? "main" : main_class->name;
    tree_.main = build_reactor(*main_class, nullptr, nullptr, main_name, {});
    wire_connections(*tree_.main);
    collect_mode_scopes();
    tree_.ordinal_count = next_ordinal_;
    return std::move(tree_);
  }

 private:
  std::unique_ptr<ReactorInstance> build_reactor(const ReactorClass& cls, ReactorInstance* parent,
                                                 ModeInstance* enclosing_mode,
                                                 const std::string& name,
                                                 const std::vector<InstanceArg>& args) {
    auto r = std::make_unique<ReactorInstance>();
    r->cls = &cls;
    r->parent = parent;
    r->enclosing_mode = enclosing_mode;
    r->name = name;
    r->qualified_name = parent == nullptr ? name : parent->qualified_name + "." + name;
    tree_.reactors.push_back(r.get());

    for (const auto& p : cls.parameters) {
      if (p.is_duration) {
        r->time_params[p.name] = p.duration_default;
      } else {
        r->real_params[p.name] = p.real_default;
      }
    }
    for (const auto& a : args) {
      if (a.is_duration) {
        r->time_params[a.name] = a.duration_value;
      } else {
        r->real_params[a.name] = a.real_value;
      }
    }
    for (const auto& s : cls.state_vars) {
      r->state[s.name] = s.initial;
    }

    // Modes first: elements declared inside them need the instances.
    for (const auto& m : cls.modes) {
      auto mi = std::make_unique<ModeInstance>();
      mi->decl = &m;
      mi->reactor = r.get();
      mi->is_initial = m.is_initial;
      mi->startup_ordinal = next_ordinal_++;
      mi->reset_ordinal = next_ordinal_++;
      tree_.modes.push_back(mi.get());
      if (m.is_initial) {
        r->initial_mode = mi.get();
      }
      r->modes.push_back(std::move(mi));
    }
    r->current_mode = r->initial_mode;

    auto mode_of = [&](int mode_index) -> ModeInstance* {
      if (mode_index < 0) {
        return enclosing_mode;
      }
      return r->modes[static_cast<std::size_t>(mode_index)].get();
    };

    for (const auto& p : cls.ports) {
      auto pi = std::make_unique<PortInstance>();
      pi->decl = &p;
      pi->reactor = r.get();
      pi->mode = enclosing_mode;  // ports always live at reactor level
      tree_.ports.push_back(pi.get());
      r->ports.push_back(std::move(pi));
    }
    for (const auto& t : cls.timers) {
      auto ti = std::make_unique<TimerInstance>();
      ti->decl = &t;
      ti->reactor = r.get();
      ti->mode = mode_of(t.mode_index);
      ti->ordinal = next_ordinal_++;
      tree_.timers.push_back(ti.get());
      r->timers.push_back(std::move(ti));
    }
    for (const auto& a : cls.actions) {
      auto ai = std::make_unique<ActionInstance>();
      ai->decl = &a;
      ai->reactor = r.get();
      ai->mode = mode_of(a.mode_index);
      ai->ordinal = next_ordinal_++;
      tree_.actions.push_back(ai.get());
      r->actions.push_back(std::move(ai));
    }
    for (const auto& c : cls.connections) {
      auto ci = std::make_unique<ConnectionInstance>();
      ci->decl = &c;
      ci->container = r.get();
      ci->mode = mode_of(c.mode_index);
      ci->ordinal = next_ordinal_++;
      if (c.after_delay) {
        ci->has_delay = true;
        ci->delay = *c.after_delay;
      }
      tree_.connections.push_back(ci.get());
      r->connections.push_back(std::move(ci));
    }
    for (const auto& inst : cls.instances) {
      const ReactorClass* child_cls = program_.find_reactor(inst.class_name);
      assert(child_cls != nullptr);
      r->children.push_back(
          build_reactor(*child_cls, r.get(), mode_of(inst.mode_index), inst.name, inst.args));
    }
    for (const auto& rd : cls.reactions) {
      r->reactions.push_back(build_reaction(rd, *r, mode_of(rd.mode_index)));
      tree_.reactions.push_back(r->reactions.back().get());
    }
    return r;
  }

  std::unique_ptr<ReactionInstance> build_reaction(const ReactionDecl& decl, ReactorInstance& r,
                                                   ModeInstance* mode) {
    auto ri = std::make_unique<ReactionInstance>();
    ri->decl = &decl;
    ri->reactor = &r;
    ri->mode = mode;

    auto resolve_readable = [&](const PortName& n) -> PortInstance* {
      PortInstance* p = n.instance.empty() ? r.find_port(n.port)
                                           : r.find_child(n.instance)->find_port(n.port);
      assert(p != nullptr);
      return p;
    };

    for (const auto& t : decl.triggers) {
      switch (t.kind) {
        case TriggerKind::Startup:
          ri->has_startup = true;
          break;
        case TriggerKind::Shutdown:
          ri->has_shutdown = true;
          break;
        case TriggerKind::Reset:
          ri->has_reset = true;
          break;
        case TriggerKind::Timer: {
          for (const auto& ti : r.timers) {
            if (ti->decl->name == t.name.port) {
              ri->timer_triggers.push_back(ti.get());
              ti->reactions.push_back(ri.get());
              ri->presence[t.name.port].timer = ti.get();
              break;
            }
          }
          break;
        }
        case TriggerKind::Action: {
          for (const auto& ai : r.actions) {
            if (ai->decl->name == t.name.port) {
              ri->action_triggers.push_back(ai.get());
              ai->reactions.push_back(ri.get());
              ri->presence[t.name.port].action = ai.get();
              break;
            }
          }
          break;
        }
        case TriggerKind::Port: {
          PortInstance* p = resolve_readable(t.name);
          ri->port_triggers.push_back(p);
          p->reactions.push_back(ri.get());
          ri->readable[t.name.text()] = p;
          ri->presence[t.name.text()].port = p;
          break;
        }
      }
    }
    for (const auto& s : decl.sources) {
      PortInstance* p = resolve_readable(s);
      ri->sources.push_back(p);
      ri->readable[s.text()] = p;
      ri->presence[s.text()].port = p;
    }
    for (const auto& e : decl.effects) {
      switch (e.kind) {
        case EffectRef::Kind::Mode: {
          ModeInstance* m = r.find_mode(e.name.port);
          assert(m != nullptr);
          ri->effect_modes.push_back({m, e.transition});
          ri->mode_targets[e.name.port] = {m, e.transition};
          break;
        }
        case EffectRef::Kind::Action: {
          for (const auto& ai : r.actions) {
            if (ai->decl->name == e.name.port) {
              ri->effect_actions.push_back(ai.get());
              ri->schedulable[e.name.port] = ai.get();
              break;
            }
          }
          break;
        }
        case EffectRef::Kind::Port: {
          PortInstance* p = e.name.instance.empty()
                                ? r.find_port(e.name.port)
                                : r.find_child(e.name.instance)->find_port(e.name.port);
          assert(p != nullptr);
          ri->effect_ports.push_back(p);
          ri->writable[e.name.text()] = p;
          break;
        }
      }
    }
    return ri;
  }

  // Second pass: connection endpoints may refer to children in any
  // declaration order, so wiring happens after the whole subtree exists.
  void wire_connections(ReactorInstance& r) {
    for (auto& c : r.connections) {
      const ConnectionDecl& d = *c->decl;
      c->from = d.source.instance.empty() ? r.find_port(d.source.port)
                                          : r.find_child(d.source.instance)->find_port(d.source.port);
      c->to = d.destination.instance.empty()
                  ? r.find_port(d.destination.port)
                  : r.find_child(d.destination.instance)->find_port(d.destination.port);
      assert(c->from != nullptr && c->to != nullptr);
      c->from->outgoing.push_back(c.get());
    }
    for (auto& child : r.children) {
      wire_connections(*child);
    }
  }

  void collect_mode_scopes() {
    for (ReactionInstance* ri : tree_.reactions) {
      if (ri->mode == nullptr) {
        continue;
      }
      if (ri->has_startup) {
        ri->mode->startup_reactions.push_back(ri);
      }
      if (ri->has_reset) {
        ri->mode->reset_reactions.push_back(ri);
      }
      if (ri->has_shutdown) {
        ri->mode->shutdown_reactions.push_back(ri);
      }
    }
  }

  const SourceProgram& program_;
  InstanceTree tree_;
  int next_ordinal_{0};
};

}  // namespace

InstanceTree instantiate(const SourceProgram& program) {
  Builder b(program);
  return b.build();
}

}  // namespace lfm
