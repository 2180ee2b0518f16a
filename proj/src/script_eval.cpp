#include <algorithm>
#include <cmath>
#include <optional>

#include "lfm/engine.hpp"

namespace lfm {

namespace {

/// Script values are reals, but values that came from a duration literal or a
/// time parameter additionally remember their exact nanosecond count, so that
/// `schedule(a, 500 msec)` hits the intended tag with no floating-point
/// rounding. Any arithmetic drops the exact form.
struct EvalValue {
  double num{0.0};
  std::optional<std::int64_t> exact_ns;
};

class Evaluator {
 public:
  explicit Evaluator(ReactionContext& ctx) : ctx_(ctx) {}

  void run(const Script& script) { exec_block(script.statements); }

 private:
  void exec_block(const std::vector<StmtPtr>& stmts) {
    for (const StmtPtr& s : stmts) {
      exec(*s);
    }
  }

  void exec(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Assign:
        ctx_.write_state(s.name, eval(*s.value).num);
        break;
      case StmtKind::SetPort:
        if (s.index != nullptr) {
          const int idx = to_index(eval(*s.index));
          ctx_.set(s.port.text(), idx, eval(*s.value).num);
        } else {
          ctx_.set(s.port.text(), eval(*s.value).num);
        }
        break;
      case StmtKind::Schedule:
        ctx_.schedule(s.name, to_nanos(eval(*s.value)));
        break;
      case StmtKind::SetMode:
        ctx_.set_mode(s.name);
        break;
      case StmtKind::If:
        if (eval(*s.value).num != 0.0) {
          exec_block(s.then_body);
        } else {
          exec_block(s.else_body);
        }
        break;
    }
  }

  static int to_index(const EvalValue& v) { return static_cast<int>(std::llround(v.num)); }

  static std::int64_t to_nanos(const EvalValue& v) {
    if (v.exact_ns.has_value()) {
      return *v.exact_ns;
    }
    return std::llround(v.num * 1e9);
  }

  EvalValue eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Number:
        return {e.number, std::nullopt};
      case ExprKind::DurationLit:
        return {static_cast<double>(e.duration_nanos) * 1e-9, e.duration_nanos};
      case ExprKind::Name:
        if (const Duration* d = ctx_.time_param(e.name)) {
          return {static_cast<double>(d->nanos) * 1e-9, d->nanos};
        }
        return {ctx_.read_name(e.name), std::nullopt};
      case ExprKind::Get:
        if (e.args.empty()) {
          return {ctx_.get(e.port.text()), std::nullopt};
        }
        return {ctx_.get(e.port.text(), to_index(eval(*e.args[0]))), std::nullopt};
      case ExprKind::IsPresent:
        return {ctx_.is_present(e.port.text()) ? 1.0 : 0.0, std::nullopt};
      case ExprKind::Time:
        return {ctx_.time_seconds(), std::nullopt};
      case ExprKind::Unary: {
        const double v = eval(*e.args[0]).num;
        if (e.name == "-") {
          return {-v, std::nullopt};
        }
        return {v == 0.0 ? 1.0 : 0.0, std::nullopt};  // !
      }
      case ExprKind::Binary:
        return eval_binary(e);
      case ExprKind::Call:
        return eval_call(e);
    }
    return {};
  }

  EvalValue eval_binary(const Expr& e) {
    if (e.name == "&&") {
      if (eval(*e.args[0]).num == 0.0) {
        return {0.0, std::nullopt};
      }
      return {eval(*e.args[1]).num != 0.0 ? 1.0 : 0.0, std::nullopt};
    }
    if (e.name == "||") {
      if (eval(*e.args[0]).num != 0.0) {
        return {1.0, std::nullopt};
      }
      return {eval(*e.args[1]).num != 0.0 ? 1.0 : 0.0, std::nullopt};
    }
    const double a = eval(*e.args[0]).num;
    const double b = eval(*e.args[1]).num;
    double r = 0.0;
    if (e.name == "+") {
      r = a + b;
    } else if (e.name == "-") {
      r = a - b;
    } else if (e.name == "*") {
      r = a * b;
    } else if (e.name == "/") {
      r = a / b;  // IEEE division: x/0 yields inf or nan, never traps
    } else if (e.name == "<") {
      r = a < b ? 1.0 : 0.0;
    } else if (e.name == ">") {
      r = a > b ? 1.0 : 0.0;
    } else if (e.name == "<=") {
      r = a <= b ? 1.0 : 0.0;
    } else if (e.name == ">=") {
      r = a >= b ? 1.0 : 0.0;
    } else if (e.name == "==") {
      r = a == b ? 1.0 : 0.0;
    } else if (e.name == "!=") {
      r = a != b ? 1.0 : 0.0;
    }
    return {r, std::nullopt};
  }

  EvalValue eval_call(const Expr& e) {
    const double a = eval(*e.args[0]).num;
    if (e.name == "sin") {
      return {std::sin(a), std::nullopt};
    }
    if (e.name == "cos") {
      return {std::cos(a), std::nullopt};
    }
    if (e.name == "sqrt") {
      return {std::sqrt(a), std::nullopt};
    }
    if (e.name == "abs") {
      return {std::fabs(a), std::nullopt};
    }
    if (e.name == "sign") {
      return {a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0), std::nullopt};
    }
    const double b = eval(*e.args[1]).num;
    if (e.name == "min") {
      return {std::min(a, b), std::nullopt};
    }
    if (e.name == "max") {
      return {std::max(a, b), std::nullopt};
    }
    // sat(x, lo, hi)
    const double c = eval(*e.args[2]).num;
    return {std::min(std::max(a, b), c), std::nullopt};
  }

  ReactionContext& ctx_;
};

}  // namespace

void eval_reaction(const Script& script, ReactionContext& ctx) {
  Evaluator ev(ctx);
  ev.run(script);
}

}  // namespace lfm
