#include "lfm/diagram.hpp"

#include <sstream>
#include <vector>

namespace lfm {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out;
}

std::string quoted(const std::string& s) { return "\"" + escape(s) + "\""; }

/// One transition edge per declared mode effect (pre-bundling).
struct TransitionEdge {
  std::string reaction_node;
  std::string source_mode_path;  // empty for reactor-level reactions
  std::string target_mode_path;
  bool history{false};
  std::string label;  // trigger names of the switching reaction
};

class DotEmitter {
 public:
  DotEmitter(const SourceProgram& program, const DotOptions& options)
      : program_(program), options_(options) {}

  std::string run() {
    body_ << "digraph program {\n";
    body_ << "  compound=true;\n";
    body_ << "  rankdir=LR;\n";
    body_ << "  node [fontname=\"Helvetica\", fontsize=10];\n";
    body_ << "  edge [fontname=\"Helvetica\", fontsize=9];\n";
    const ReactorClass* main = program_.main_reactor();
    if (main != nullptr) {
      const std::string name = main->name == "Main" ? "main" : main->name;
      emit_reactor(name, name, *main, 1);
    }
    emit_transitions();
    for (const std::string& e : edges_) {
      body_ << "  " << e << "\n";
    }
    body_ << "}\n";
    return body_.str();
  }

 private:
  void indent(int depth) {
    for (int i = 0; i < depth; ++i) {
      body_ << "  ";
    }
  }

  static std::string trigger_label(const ReactionDecl& r) {
    std::string out;
    for (const TriggerRef& t : r.triggers) {
      if (!out.empty()) {
        out += ",";
      }
      switch (t.kind) {
        case TriggerKind::Startup:
          out += "startup";
          break;
        case TriggerKind::Shutdown:
          out += "shutdown";
          break;
        case TriggerKind::Reset:
          out += "reset";
          break;
        default:
          out += t.name.text();
          break;
      }
    }
    return out;
  }

  /// Node id of a port reference seen from a reaction or connection declared
  /// in `mode_index` of the reactor at `path`. Own ports referenced from
  /// inside a mode resolve to that mode's duplicated port node.
  std::string port_node(const std::string& path, const ReactorClass& cls, int mode_index,
                        const PortName& pn) const {
    if (pn.instance.empty() && mode_index >= 0) {
      return path + "." + cls.modes[static_cast<std::size_t>(mode_index)].name + "." + pn.port;
    }
    if (pn.instance.empty()) {
      return path + "." + pn.port;
    }
    return path + "." + pn.instance + "." + pn.port;
  }

  /// Own ports a mode's reactions and connections touch, in first-use order.
  std::vector<std::string> mode_port_uses(const ReactorClass& cls, int mode_index) const {
    std::vector<std::string> used;
    auto note = [&used](const PortName& pn) {
      if (!pn.instance.empty()) {
        return;
      }
      for (const std::string& u : used) {
        if (u == pn.port) {
          return;
        }
      }
      used.push_back(pn.port);
    };
    for (const ReactionDecl& r : cls.reactions) {
      if (r.mode_index != mode_index) {
        continue;
      }
      for (const TriggerRef& t : r.triggers) {
        if (t.kind == TriggerKind::Port) {
          note(t.name);
        }
      }
      for (const PortName& s : r.sources) {
        note(s);
      }
      for (const EffectRef& e : r.effects) {
        if (e.kind == EffectRef::Kind::Port) {
          note(e.name);
        }
      }
    }
    for (const ConnectionDecl& c : cls.connections) {
      if (c.mode_index != mode_index) {
        continue;
      }
      note(c.source);
      note(c.destination);
    }
    return used;
  }

  void emit_reaction_node(const std::string& path, const ReactorClass& cls,
                          const ReactionDecl& r, int depth) {
    const std::string node = path + "#n" + std::to_string(r.index);
    indent(depth);
    body_ << quoted(node) << " [label=" << quoted(std::to_string(r.index))
          << ", shape=box];\n";

    for (const TriggerRef& t : r.triggers) {
      if (t.kind == TriggerKind::Port) {
        edges_.push_back(quoted(port_node(path, cls, r.mode_index, t.name)) + " -> " +
                         quoted(node) + ";");
      } else if (t.kind == TriggerKind::Timer || t.kind == TriggerKind::Action) {
        edges_.push_back(quoted(path + "." + t.name.port) + " -> " + quoted(node) + ";");
      }
    }
    for (const PortName& s : r.sources) {
      edges_.push_back(quoted(port_node(path, cls, r.mode_index, s)) + " -> " + quoted(node) +
                       " [style=dashed];");
    }
    for (const EffectRef& e : r.effects) {
      switch (e.kind) {
        case EffectRef::Kind::Port:
          edges_.push_back(quoted(node) + " -> " +
                           quoted(port_node(path, cls, r.mode_index, e.name)) + ";");
          break;
        case EffectRef::Kind::Action:
          edges_.push_back(quoted(node) + " -> " + quoted(path + "." + e.name.port) +
                           " [style=dashed];");
          break;
        case EffectRef::Kind::Mode: {
          TransitionEdge t;
          t.reaction_node = node;
          if (r.mode_index >= 0) {
            t.source_mode_path =
                path + "." + cls.modes[static_cast<std::size_t>(r.mode_index)].name;
          }
          t.target_mode_path = path + "." + e.name.port;
          t.history = e.transition == TransitionKind::History;
          t.label = trigger_label(r);
          transitions_.push_back(std::move(t));
          break;
        }
      }
    }
  }

  void emit_scope_elements(const std::string& path, const ReactorClass& cls, int mode_index,
                           int depth) {
    for (const TimerDecl& t : cls.timers) {
      if (t.mode_index == mode_index) {
        indent(depth);
        body_ << quoted(path + "." + t.name) << " [label=" << quoted(t.name)
              << ", shape=diamond];\n";
      }
    }
    for (const ActionDecl& a : cls.actions) {
      if (a.mode_index == mode_index) {
        indent(depth);
        body_ << quoted(path + "." + a.name) << " [label=" << quoted(a.name)
              << ", shape=diamond, style=dashed];\n";
      }
    }
    for (const ReactionDecl& r : cls.reactions) {
      if (r.mode_index == mode_index) {
        emit_reaction_node(path, cls, r, depth);
      }
    }
    for (const InstanceDecl& inst : cls.instances) {
      if (inst.mode_index == mode_index) {
        const ReactorClass* child = program_.find_reactor(inst.class_name);
        if (child != nullptr) {
          emit_reactor(path + "." + inst.name, inst.name, *child, depth);
        }
      }
    }
  }

  void emit_reactor(const std::string& path, const std::string& inst_name,
                    const ReactorClass& cls, int depth) {
    indent(depth);
    body_ << "subgraph " << quoted("cluster_" + path) << " {\n";
    indent(depth + 1);
    body_ << "label=" << quoted(inst_name + " : " + cls.name) << ";\n";
    indent(depth + 1);
    body_ << "style=rounded;\n";

    for (const PortDecl& p : cls.ports) {
      indent(depth + 1);
      body_ << quoted(path + "." + p.name) << " [label=" << quoted(p.name)
            << ", shape=ellipse, fontsize=9];\n";
    }
    emit_scope_elements(path, cls, -1, depth + 1);

    for (std::size_t mi = 0; mi < cls.modes.size(); ++mi) {
      const ModeDecl& m = cls.modes[mi];
      const std::string mode_path = path + "." + m.name;
      indent(depth + 1);
      body_ << "subgraph " << quoted("cluster_" + mode_path) << " {\n";
      indent(depth + 2);
      body_ << "label=" << quoted(m.name) << ";\n";
      indent(depth + 2);
      body_ << "style=rounded;\n";
      indent(depth + 2);
      body_ << "bgcolor=gray92;\n";
      if (m.is_initial) {
        // Initial mode: doubled border.
        indent(depth + 2);
        body_ << "penwidth=2;\n";
      }
      indent(depth + 2);
      body_ << quoted(mode_path + "#anchor") << " [shape=point, style=invis];\n";

      // Reactor ports used from inside this mode get local duplicates so the
      // dataflow edges stay within the cluster.
      for (const std::string& port : mode_port_uses(cls, static_cast<int>(mi))) {
        const std::string dup = mode_path + "." + port;
        indent(depth + 2);
        body_ << quoted(dup) << " [label=" << quoted(port)
              << ", shape=ellipse, fontsize=9, style=dashed];\n";
        const PortDecl* decl = cls.find_port(port);
        if (decl != nullptr && decl->direction == PortDirection::Input) {
          edges_.push_back(quoted(path + "." + port) + " -> " + quoted(dup) +
                           " [style=dotted, arrowhead=none];");
        } else {
          edges_.push_back(quoted(dup) + " -> " + quoted(path + "." + port) +
                           " [style=dotted, arrowhead=none];");
        }
      }
      emit_scope_elements(path, cls, static_cast<int>(mi), depth + 2);
      indent(depth + 1);
      body_ << "}\n";
    }

    for (const ConnectionDecl& c : cls.connections) {
      std::string attrs;
      if (c.after_delay.has_value()) {
        attrs = " [style=dashed, label=" + quoted("after " + to_string(*c.after_delay)) + "]";
      }
      edges_.push_back(quoted(port_node(path, cls, c.mode_index, c.source)) + " -> " +
                       quoted(port_node(path, cls, c.mode_index, c.destination)) + attrs + ";");
    }

    indent(depth);
    body_ << "}\n";
  }

  void emit_transitions() {
    const bool bundle = !options_.show_labels && options_.bundle_transitions;
    std::vector<std::string> bundled_keys;
    for (const TransitionEdge& t : transitions_) {
      std::string label;
      if (t.history) {
        label = options_.show_labels ? "[H] " + t.label : "[H]";
      } else if (options_.show_labels) {
        label = t.label;
      }
      std::string attrs = "lhead=" + quoted("cluster_" + t.target_mode_path) + ", style=bold";
      if (!label.empty()) {
        attrs += ", label=" + quoted(label);
      }
      if (bundle && !t.source_mode_path.empty()) {
        // Merge parallel transitions between the same mode pair and kind.
        const std::string key =
            t.source_mode_path + ">" + t.target_mode_path + ">" + (t.history ? "H" : "R");
        bool seen = false;
        for (const std::string& k : bundled_keys) {
          if (k == key) {
            seen = true;
            break;
          }
        }
        if (seen) {
          continue;
        }
        bundled_keys.push_back(key);
        edges_.push_back(quoted(t.source_mode_path + "#anchor") + " -> " +
                         quoted(t.target_mode_path + "#anchor") + " [ltail=" +
                         quoted("cluster_" + t.source_mode_path) + ", " + attrs + "];");
        continue;
      }
      edges_.push_back(quoted(t.reaction_node) + " -> " + quoted(t.target_mode_path + "#anchor") +
                       " [" + attrs + "];");
    }
  }

  const SourceProgram& program_;
  const DotOptions& options_;
  std::ostringstream body_;
  std::vector<std::string> edges_;
  std::vector<TransitionEdge> transitions_;
};

}  // namespace

std::string emit_dot(const SourceProgram& program, const DotOptions& options) {
  DotEmitter emitter(program, options);
  return emitter.run();
}

}  // namespace lfm
