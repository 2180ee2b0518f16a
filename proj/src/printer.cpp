#include "lfm/printer.hpp"

#include <cstdio>
#include <sstream>

namespace lfm {

namespace {

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

void print_stmt(std::ostringstream& out, const Stmt& s, int indent);

void print_body(std::ostringstream& out, const std::vector<StmtPtr>& body, int indent) {
  for (const auto& s : body) {
    print_stmt(out, *s, indent);
  }
}

int precedence(const std::string& op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "<" || op == "<=" || op == ">" || op == ">=" || op == "==" || op == "!=") return 3;
  if (op == "+" || op == "-") return 4;
  return 5;  // * /
}

void print_expr_prec(std::ostringstream& out, const Expr& e, int parent_prec) {
  switch (e.kind) {
    case ExprKind::Number:
      out << real_text(e.number);
      break;
    case ExprKind::DurationLit:
      out << to_string(Duration{e.duration_nanos});
      break;
    case ExprKind::Name:
      out << e.name;
      break;
    case ExprKind::Get:
      out << "get(" << e.port.text();
      if (!e.args.empty()) {
        out << ", ";
        print_expr_prec(out, *e.args[0], 0);
      }
      out << ")";
      break;
    case ExprKind::IsPresent:
      out << "is_present(" << e.port.text() << ")";
      break;
    case ExprKind::Time:
      out << "time()";
      break;
    case ExprKind::Unary:
      out << e.name;
      print_expr_prec(out, *e.args[0], 6);
      break;
    case ExprKind::Binary: {
      const int prec = precedence(e.name);
      if (prec < parent_prec) {
        out << "(";
      }
      print_expr_prec(out, *e.args[0], prec);
      out << " " << e.name << " ";
      print_expr_prec(out, *e.args[1], prec + 1);
      if (prec < parent_prec) {
        out << ")";
      }
      break;
    }
    case ExprKind::Call:
      out << e.name << "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i != 0) {
          out << ", ";
        }
        print_expr_prec(out, *e.args[i], 0);
      }
      out << ")";
      break;
  }
}

void print_stmt(std::ostringstream& out, const Stmt& s, int indent) {
  out << pad(indent);
  switch (s.kind) {
    case StmtKind::Assign:
      out << s.name << " = ";
      print_expr_prec(out, *s.value, 0);
      out << ";\n";
      break;
    case StmtKind::SetPort:
      out << "set(" << s.port.text();
      if (s.index) {
        out << ", ";
        print_expr_prec(out, *s.index, 0);
      }
      out << ", ";
      print_expr_prec(out, *s.value, 0);
      out << ");\n";
      break;
    case StmtKind::Schedule:
      out << "schedule(" << s.name << ", ";
      print_expr_prec(out, *s.value, 0);
      out << ");\n";
      break;
    case StmtKind::SetMode:
      out << "set_mode(" << s.name << ");\n";
      break;
    case StmtKind::If:
      out << "if (";
      print_expr_prec(out, *s.value, 0);
      out << ") {\n";
      print_body(out, s.then_body, indent + 1);
      out << pad(indent) << "}";
      if (!s.else_body.empty()) {
        out << " else ";
        if (s.else_body.size() == 1 && s.else_body[0]->kind == StmtKind::If) {
          // print `else if` without an extra brace level
          std::ostringstream chained;
          print_stmt(chained, *s.else_body[0], indent);
          std::string text = chained.str();
          out << text.substr(text.find_first_not_of(' '));
          return;
        }
        out << "{\n";
        print_body(out, s.else_body, indent + 1);
        out << pad(indent) << "}";
      }
      out << "\n";
      break;
  }
}

std::string type_text(const PayloadType& t) {
  if (t.is_vector()) {
    return "real[" + std::to_string(t.vector_length) + "]";
  }
  return "real";
}

void print_reaction(std::ostringstream& out, const ReactionDecl& r, int indent) {
  out << pad(indent) << "reaction(";
  for (std::size_t i = 0; i < r.triggers.size(); ++i) {
    if (i != 0) {
      out << ", ";
    }
    const TriggerRef& t = r.triggers[i];
    switch (t.kind) {
      case TriggerKind::Startup: out << "startup"; break;
      case TriggerKind::Shutdown: out << "shutdown"; break;
      case TriggerKind::Reset: out << "reset"; break;
      default: out << t.name.text(); break;
    }
  }
  out << ")";
  if (!r.sources.empty()) {
    out << " ";
    for (std::size_t i = 0; i < r.sources.size(); ++i) {
      if (i != 0) {
        out << ", ";
      }
      out << r.sources[i].text();
    }
  }
  if (!r.effects.empty()) {
    out << " -> ";
    for (std::size_t i = 0; i < r.effects.size(); ++i) {
      if (i != 0) {
        out << ", ";
      }
      const EffectRef& e = r.effects[i];
      if (e.kind == EffectRef::Kind::Mode) {
        out << (e.transition == TransitionKind::Reset ? "reset(" : "history(") << e.name.port
            << ")";
      } else {
        out << e.name.text();
      }
    }
  }
  if (!r.native_key.empty()) {
    out << " extern \"" << r.native_key << "\";\n";
    return;
  }
  out << " {=\n";
  out << print_script(*r.script, indent + 1);
  out << pad(indent) << "=}\n";
}

void print_elements(std::ostringstream& out, const ReactorClass& rc, int mode_index, int indent) {
  for (const auto& p : rc.ports) {
    if (p.mode_index != mode_index) {
      continue;
    }
    out << pad(indent) << (p.direction == PortDirection::Input ? "input " : "output ") << p.name
        << ": " << type_text(p.type) << ";\n";
  }
  for (const auto& s : rc.state_vars) {
    if (s.mode_index != mode_index) {
      continue;
    }
    out << pad(indent) << (s.reset_marked ? "reset state " : "state ") << s.name
        << ": real = " << real_text(s.initial) << ";\n";
  }
  for (const auto& t : rc.timers) {
    if (t.mode_index != mode_index) {
      continue;
    }
    out << pad(indent) << "timer " << t.name << "(" << to_string(t.offset);
    if (t.period.nanos != 0) {
      out << ", " << to_string(t.period);
    }
    out << ");\n";
  }
  for (const auto& a : rc.actions) {
    if (a.mode_index != mode_index) {
      continue;
    }
    out << pad(indent) << (a.kind == ActionKind::Logical ? "logical action " : "physical action ")
        << a.name;
    if (a.min_delay.nanos != 0) {
      out << "(" << to_string(a.min_delay) << ")";
    }
    out << ";\n";
  }
  for (const auto& inst : rc.instances) {
    if (inst.mode_index != mode_index) {
      continue;
    }
    out << pad(indent) << inst.name << " = new " << inst.class_name << "(";
    for (std::size_t i = 0; i < inst.args.size(); ++i) {
      if (i != 0) {
        out << ", ";
      }
      const InstanceArg& a = inst.args[i];
      out << a.name << " = ";
      if (a.is_duration) {
        out << to_string(a.duration_value);
      } else {
        out << real_text(a.real_value);
      }
    }
    out << ");\n";
  }
  for (const auto& c : rc.connections) {
    if (c.mode_index != mode_index) {
      continue;
    }
    out << pad(indent) << c.source.text() << " -> " << c.destination.text();
    if (c.after_delay) {
      out << " after " << to_string(*c.after_delay);
    }
    out << ";\n";
  }
  for (const auto& r : rc.reactions) {
    if (r.mode_index != mode_index) {
      continue;
    }
    print_reaction(out, r, indent);
  }
}

}  // namespace

std::string print_expr(const Expr& expr) {
  std::ostringstream out;
  print_expr_prec(out, expr, 0);
  return out.str();
}

std::string print_script(const Script& script, int indent) {
  std::ostringstream out;
  print_body(out, script.statements, indent);
  return out.str();
}

std::string print_program(const SourceProgram& program) {
  std::ostringstream out;
  if (!program.target.empty()) {
    out << "target " << program.target << ";\n\n";
  }
  for (const auto& rc : program.reactors) {
    if (rc.is_main) {
      out << "main reactor " << rc.name;
    } else {
      out << "reactor " << rc.name;
    }
    if (!rc.parameters.empty()) {
      out << "(";
      for (std::size_t i = 0; i < rc.parameters.size(); ++i) {
        if (i != 0) {
          out << ", ";
        }
        const ParamDecl& p = rc.parameters[i];
        if (p.is_duration) {
          out << p.name << ": time = " << to_string(p.duration_default);
        } else {
          out << p.name << ": real = " << real_text(p.real_default);
        }
      }
      out << ")";
    }
    out << " {\n";
    print_elements(out, rc, -1, 1);
    for (std::size_t m = 0; m < rc.modes.size(); ++m) {
      const ModeDecl& mode = rc.modes[m];
      out << pad(1) << (mode.is_initial ? "initial mode " : "mode ") << mode.name << " {\n";
      print_elements(out, rc, static_cast<int>(m), 2);
      out << pad(1) << "}\n";
    }
    out << "}\n\n";
  }
  std::string text = out.str();
  while (!text.empty() && text.back() == '\n') {
    text.pop_back();
  }
  text.push_back('\n');
  return text;
}

}  // namespace lfm
