#include "lfm/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace lfm {

namespace {

enum class TokKind { Ident, Number, String, Punct, ScriptOpen, End };

struct Token {
  TokKind kind{TokKind::End};
  std::string text;
  double number{0.0};
  bool is_integer{false};
  std::int64_t int_value{0};
  SourcePos pos;
};

class Lexer {
 public:
  Lexer(std::string_view src, SourcePos base = {1, 1}) : src_(src), line_(base.line), col_(base.col) {
    advance();
  }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  /// Consumes raw text up to and including the closing `=}` of a script
  /// body. Returns the body text and its start position.
  std::pair<std::string, SourcePos> take_script_body() {
    SourcePos start{line_, col_};
    std::string body;
    while (pos_ + 1 < src_.size() && !(src_[pos_] == '=' && src_[pos_ + 1] == '}')) {
      body.push_back(src_[pos_]);
      bump();
    }
    if (pos_ + 1 >= src_.size()) {
      throw_error("unterminated reaction body, expected `=}`", start);
    }
    bump();
    bump();
    advance();
    return {std::move(body), start};
  }

  [[noreturn]] void throw_error(const std::string& msg, SourcePos pos) const {
    Diagnostic d{"SYNTAX", msg, pos};
    throw d;
  }

 private:
  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        bump();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          bump();
        }
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        bump();
        bump();
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) {
          bump();
        }
        if (pos_ + 1 < src_.size()) {
          bump();
          bump();
        }
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_trivia();
    current_ = Token{};
    current_.pos = {line_, col_};
    if (pos_ >= src_.size()) {
      current_.kind = TokKind::End;
      current_.text = "<end of input>";
      return;
    }
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
      std::string ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) != 0 || src_[pos_] == '_')) {
        ident.push_back(src_[pos_]);
        bump();
      }
      current_.kind = TokKind::Ident;
      current_.text = std::move(ident);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0 ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) != 0)) {
      std::string num;
      bool integral = true;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
        num.push_back(src_[pos_]);
        bump();
      }
      if (pos_ < src_.size() && src_[pos_] == '.' &&
          !(pos_ + 1 < src_.size() && src_[pos_ + 1] == '.')) {
        integral = false;
        num.push_back(src_[pos_]);
        bump();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
          num.push_back(src_[pos_]);
          bump();
        }
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t save = pos_;
        std::string exp;
        exp.push_back(src_[pos_]);
        bump();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
          exp.push_back(src_[pos_]);
          bump();
        }
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
          integral = false;
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
            exp.push_back(src_[pos_]);
            bump();
          }
          num += exp;
        } else {
          // not an exponent after all; rewind is impossible, reject
          (void)save;
          throw_error("malformed numeric literal", current_.pos);
        }
      }
      current_.kind = TokKind::Number;
      current_.text = num;
      current_.number = std::strtod(num.c_str(), nullptr);
      current_.is_integer = integral;
      if (integral) {
        current_.int_value = std::strtoll(num.c_str(), nullptr, 10);
      }
      return;
    }
    if (c == '"') {
      bump();
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        s.push_back(src_[pos_]);
        bump();
      }
      if (pos_ >= src_.size()) {
        throw_error("unterminated string literal", current_.pos);
      }
      bump();
      current_.kind = TokKind::String;
      current_.text = std::move(s);
      return;
    }
    auto two = [&](const char* p) {
      return pos_ + 1 < src_.size() && src_[pos_] == p[0] && src_[pos_ + 1] == p[1];
    };
    for (const char* p : {"{=", "->", "==", "!=", "<=", ">=", "&&", "||"}) {
      if (two(p)) {
        if (p[0] == '{' && p[1] == '=') {
          current_.kind = TokKind::ScriptOpen;
        } else {
          current_.kind = TokKind::Punct;
        }
        current_.text = p;
        bump();
        bump();
        return;
      }
    }
    static const std::string singles = "(){}[]:;,.=<>+-*/!";
    if (singles.find(c) != std::string::npos) {
      current_.kind = TokKind::Punct;
      current_.text = std::string(1, c);
      bump();
      return;
    }
    throw_error(std::string("unexpected character `") + c + "`", current_.pos);
  }

  std::string_view src_;
  std::size_t pos_{0};
  int line_;
  int col_;
  Token current_;
};

bool is_duration_unit(const std::string& s) {
  return s == "nsec" || s == "usec" || s == "msec" || s == "sec";
}

// ---------------------------------------------------------------------------
// Script parser
// ---------------------------------------------------------------------------

class ScriptParser {
 public:
  explicit ScriptParser(Lexer& lex) : lex_(lex) {}

  Script parse() {
    Script script;
    while (lex_.peek().kind != TokKind::End) {
      script.statements.push_back(statement());
    }
    return script;
  }

 private:
  StmtPtr statement() {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Ident) {
      lex_.throw_error("expected statement, found `" + t.text + "`", t.pos);
    }
    if (t.text == "if") {
      return if_statement();
    }
    if (t.text == "set") {
      return set_statement();
    }
    if (t.text == "schedule") {
      return schedule_statement();
    }
    if (t.text == "set_mode") {
      return set_mode_statement();
    }
    return assign_statement();
  }

  StmtPtr if_statement() {
    auto stmt = std::make_unique<Stmt>();
    stmt->kind = StmtKind::If;
    stmt->pos = lex_.peek().pos;
    lex_.next();
    expect_punct("(");
    stmt->value = expression();
    expect_punct(")");
    stmt->then_body = block();
    if (lex_.peek().kind == TokKind::Ident && lex_.peek().text == "else") {
      lex_.next();
      if (lex_.peek().kind == TokKind::Ident && lex_.peek().text == "if") {
        stmt->else_body.push_back(if_statement());
      } else {
        stmt->else_body = block();
      }
    }
    return stmt;
  }

  std::vector<StmtPtr> block() {
    expect_punct("{");
    std::vector<StmtPtr> body;
    while (!(lex_.peek().kind == TokKind::Punct && lex_.peek().text == "}")) {
      if (lex_.peek().kind == TokKind::End) {
        lex_.throw_error("expected `}`", lex_.peek().pos);
      }
      body.push_back(statement());
    }
    lex_.next();
    return body;
  }

  StmtPtr set_statement() {
    auto stmt = std::make_unique<Stmt>();
    stmt->kind = StmtKind::SetPort;
    stmt->pos = lex_.peek().pos;
    lex_.next();
    expect_punct("(");
    stmt->port = port_name();
    expect_punct(",");
    ExprPtr first = expression();
    if (lex_.peek().kind == TokKind::Punct && lex_.peek().text == ",") {
      lex_.next();
      stmt->index = std::move(first);
      stmt->value = expression();
    } else {
      stmt->value = std::move(first);
    }
    expect_punct(")");
    expect_punct(";");
    return stmt;
  }

  StmtPtr schedule_statement() {
    auto stmt = std::make_unique<Stmt>();
    stmt->kind = StmtKind::Schedule;
    stmt->pos = lex_.peek().pos;
    lex_.next();
    expect_punct("(");
    stmt->name = expect_ident("action name");
    expect_punct(",");
    stmt->value = expression();
    expect_punct(")");
    expect_punct(";");
    return stmt;
  }

  StmtPtr set_mode_statement() {
    auto stmt = std::make_unique<Stmt>();
    stmt->kind = StmtKind::SetMode;
    stmt->pos = lex_.peek().pos;
    lex_.next();
    expect_punct("(");
    stmt->name = expect_ident("mode name");
    expect_punct(")");
    expect_punct(";");
    return stmt;
  }

  StmtPtr assign_statement() {
    auto stmt = std::make_unique<Stmt>();
    stmt->kind = StmtKind::Assign;
    stmt->pos = lex_.peek().pos;
    stmt->name = expect_ident("state variable");
    expect_punct("=");
    stmt->value = expression();
    expect_punct(";");
    return stmt;
  }

  ExprPtr expression() { return or_expr(); }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (lex_.peek().kind == TokKind::Punct && lex_.peek().text == "||") {
      SourcePos pos = lex_.next().pos;
      lhs = binary("||", std::move(lhs), and_expr(), pos);
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = cmp_expr();
    while (lex_.peek().kind == TokKind::Punct && lex_.peek().text == "&&") {
      SourcePos pos = lex_.next().pos;
      lhs = binary("&&", std::move(lhs), cmp_expr(), pos);
    }
    return lhs;
  }

  ExprPtr cmp_expr() {
    ExprPtr lhs = add_expr();
    const Token& t = lex_.peek();
    if (t.kind == TokKind::Punct &&
        (t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=" || t.text == "==" ||
         t.text == "!=")) {
      std::string op = t.text;
      SourcePos pos = lex_.next().pos;
      lhs = binary(op, std::move(lhs), add_expr(), pos);
    }
    return lhs;
  }

  ExprPtr add_expr() {
    ExprPtr lhs = mul_expr();
    while (lex_.peek().kind == TokKind::Punct &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      std::string op = lex_.peek().text;
      SourcePos pos = lex_.next().pos;
      lhs = binary(op, std::move(lhs), mul_expr(), pos);
    }
    return lhs;
  }

  ExprPtr mul_expr() {
    ExprPtr lhs = unary_expr();
    while (lex_.peek().kind == TokKind::Punct &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      std::string op = lex_.peek().text;
      SourcePos pos = lex_.next().pos;
      lhs = binary(op, std::move(lhs), unary_expr(), pos);
    }
    return lhs;
  }

  ExprPtr unary_expr() {
    const Token& t = lex_.peek();
    if (t.kind == TokKind::Punct && (t.text == "-" || t.text == "!")) {
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Unary;
      e->name = t.text;
      e->pos = t.pos;
      lex_.next();
      e->args.push_back(unary_expr());
      return e;
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = lex_.peek();
    auto e = std::make_unique<Expr>();
    e->pos = t.pos;
    if (t.kind == TokKind::Number) {
      Token num = lex_.next();
      // An integer immediately followed by a unit is a duration literal.
      if (num.is_integer && lex_.peek().kind == TokKind::Ident &&
          is_duration_unit(lex_.peek().text)) {
        Token unit = lex_.next();
        auto d = parse_duration(num.text + " " + unit.text);
        if (!d) {
          lex_.throw_error("duration literal out of range", num.pos);
        }
        e->kind = ExprKind::DurationLit;
        e->duration_nanos = d->nanos;
        return e;
      }
      e->kind = ExprKind::Number;
      e->number = num.number;
      return e;
    }
    if (t.kind == TokKind::Punct && t.text == "(") {
      lex_.next();
      ExprPtr inner = expression();
      expect_punct(")");
      return inner;
    }
    if (t.kind != TokKind::Ident) {
      lex_.throw_error("expected expression, found `" + t.text + "`", t.pos);
    }
    std::string name = t.text;
    lex_.next();
    if (name == "get") {
      expect_punct("(");
      e->kind = ExprKind::Get;
      e->port = port_name();
      if (lex_.peek().kind == TokKind::Punct && lex_.peek().text == ",") {
        lex_.next();
        e->args.push_back(expression());
      }
      expect_punct(")");
      return e;
    }
    if (name == "is_present") {
      expect_punct("(");
      e->kind = ExprKind::IsPresent;
      e->port = port_name();
      expect_punct(")");
      return e;
    }
    if (name == "time") {
      expect_punct("(");
      expect_punct(")");
      e->kind = ExprKind::Time;
      return e;
    }
    static const char* kFunctions[] = {"sin", "cos", "sqrt", "abs", "sign", "min", "max", "sat"};
    for (const char* fn : kFunctions) {
      if (name == fn) {
        expect_punct("(");
        e->kind = ExprKind::Call;
        e->name = name;
        if (!(lex_.peek().kind == TokKind::Punct && lex_.peek().text == ")")) {
          e->args.push_back(expression());
          while (lex_.peek().kind == TokKind::Punct && lex_.peek().text == ",") {
            lex_.next();
            e->args.push_back(expression());
          }
        }
        expect_punct(")");
        return e;
      }
    }
    e->kind = ExprKind::Name;
    e->name = std::move(name);
    return e;
  }

  ExprPtr binary(const std::string& op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->name = op;
    e->pos = pos;
    e->args.push_back(std::move(lhs));
    e->args.push_back(std::move(rhs));
    return e;
  }

  PortName port_name() {
    PortName pn;
    std::string first = expect_ident("port name");
    if (lex_.peek().kind == TokKind::Punct && lex_.peek().text == ".") {
      lex_.next();
      pn.instance = std::move(first);
      pn.port = expect_ident("port name");
    } else {
      pn.port = std::move(first);
    }
    return pn;
  }

  std::string expect_ident(const char* what) {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Ident) {
      lex_.throw_error(std::string("expected ") + what + ", found `" + t.text + "`", t.pos);
    }
    return lex_.next().text;
  }

  void expect_punct(const std::string& p) {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Punct || t.text != p) {
      lex_.throw_error("expected `" + p + "`, found `" + t.text + "`", t.pos);
    }
    lex_.next();
  }

  Lexer& lex_;
};

// ---------------------------------------------------------------------------
// Declaration parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  SourceProgram parse() {
    SourceProgram program;
    if (peek_ident("target")) {
      lex_.next();
      program.target = expect_ident("target name");
      expect_punct(";");
    }
    while (lex_.peek().kind != TokKind::End) {
      program.reactors.push_back(reactor_def());
    }
    return program;
  }

 private:
  ReactorClass reactor_def() {
    ReactorClass rc;
    rc.pos = lex_.peek().pos;
    if (peek_ident("main")) {
      lex_.next();
      rc.is_main = true;
      expect_keyword("reactor");
      if (lex_.peek().kind == TokKind::Ident) {
        rc.name = lex_.next().text;
      } else {
        rc.name = "Main";
      }
    } else {
      expect_keyword("reactor");
      rc.name = expect_ident("reactor name");
    }
    if (peek_punct("(")) {
      lex_.next();
      if (!peek_punct(")")) {
        rc.parameters.push_back(param_decl());
        while (peek_punct(",")) {
          lex_.next();
          rc.parameters.push_back(param_decl());
        }
      }
      expect_punct(")");
    }
    expect_punct("{");
    while (!peek_punct("}")) {
      if (lex_.peek().kind == TokKind::End) {
        lex_.throw_error("expected `}`", lex_.peek().pos);
      }
      element(rc, -1);
    }
    lex_.next();
    return rc;
  }

  ParamDecl param_decl() {
    ParamDecl p;
    p.pos = lex_.peek().pos;
    p.name = expect_ident("parameter name");
    expect_punct(":");
    std::string type = expect_ident("parameter type");
    expect_punct("=");
    if (type == "real") {
      p.is_duration = false;
      p.real_default = signed_number();
    } else if (type == "time") {
      p.is_duration = true;
      p.duration_default = duration_literal();
    } else {
      lex_.throw_error("expected `real` or `time`, found `" + type + "`", p.pos);
    }
    return p;
  }

  void element(ReactorClass& rc, int mode_index) {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Ident) {
      lex_.throw_error("expected declaration, found `" + t.text + "`", t.pos);
    }
    const std::string& kw = t.text;
    if (kw == "input" || kw == "output") {
      port_decl(rc, mode_index);
    } else if (kw == "state") {
      state_decl(rc, mode_index, false);
    } else if (kw == "reset") {
      lex_.next();
      expect_keyword("state");
      state_decl_tail(rc, mode_index, true);
    } else if (kw == "timer") {
      timer_decl(rc, mode_index);
    } else if (kw == "logical" || kw == "physical") {
      action_decl(rc, mode_index);
    } else if (kw == "reaction") {
      reaction_decl(rc, mode_index);
    } else if (kw == "initial" || kw == "mode") {
      mode_decl(rc, mode_index);
    } else {
      // instance declaration or connection, both start with an identifier
      instance_or_connection(rc, mode_index);
    }
  }

  void port_decl(ReactorClass& rc, int mode_index) {
    PortDecl p;
    p.pos = lex_.peek().pos;
    p.direction = lex_.next().text == "input" ? PortDirection::Input : PortDirection::Output;
    p.name = expect_ident("port name");
    expect_punct(":");
    p.type = payload_type();
    optional_semi();
    // Ports inside modes parse here; validation rejects them (PORT_IN_MODE).
    p.mode_index = mode_index;
    rc.ports.push_back(std::move(p));
  }

  PayloadType payload_type() {
    expect_keyword("real");
    PayloadType t;
    if (peek_punct("[")) {
      lex_.next();
      const Token& n = lex_.peek();
      if (n.kind != TokKind::Number || !n.is_integer || n.int_value <= 0) {
        lex_.throw_error("expected positive vector length", n.pos);
      }
      t.vector_length = static_cast<int>(lex_.next().int_value);
      expect_punct("]");
    }
    return t;
  }

  void state_decl(ReactorClass& rc, int mode_index, bool reset_marked) {
    lex_.next();
    state_decl_tail(rc, mode_index, reset_marked);
  }

  void state_decl_tail(ReactorClass& rc, int mode_index, bool reset_marked) {
    StateVarDecl s;
    s.pos = lex_.peek().pos;
    s.reset_marked = reset_marked;
    s.mode_index = mode_index;
    s.name = expect_ident("state variable name");
    expect_punct(":");
    expect_keyword("real");
    expect_punct("=");
    s.initial = signed_number();
    optional_semi();
    rc.state_vars.push_back(std::move(s));
  }

  void timer_decl(ReactorClass& rc, int mode_index) {
    TimerDecl t;
    t.pos = lex_.peek().pos;
    t.mode_index = mode_index;
    lex_.next();
    t.name = expect_ident("timer name");
    expect_punct("(");
    t.offset = duration_literal();
    if (peek_punct(",")) {
      lex_.next();
      t.period = duration_literal();
    }
    expect_punct(")");
    optional_semi();
    rc.timers.push_back(std::move(t));
  }

  void action_decl(ReactorClass& rc, int mode_index) {
    ActionDecl a;
    a.pos = lex_.peek().pos;
    a.mode_index = mode_index;
    a.kind = lex_.next().text == "logical" ? ActionKind::Logical : ActionKind::Physical;
    expect_keyword("action");
    a.name = expect_ident("action name");
    if (peek_punct("(")) {
      lex_.next();
      a.min_delay = duration_literal();
      expect_punct(")");
    }
    optional_semi();
    rc.actions.push_back(std::move(a));
  }

  void reaction_decl(ReactorClass& rc, int mode_index) {
    ReactionDecl r;
    r.pos = lex_.peek().pos;
    r.mode_index = mode_index;
    r.index = static_cast<int>(rc.reactions.size());
    lex_.next();
    expect_punct("(");
    if (!peek_punct(")")) {
      r.triggers.push_back(trigger_ref());
      while (peek_punct(",")) {
        lex_.next();
        r.triggers.push_back(trigger_ref());
      }
    }
    expect_punct(")");
    // optional source list before ->
    if (lex_.peek().kind == TokKind::Ident && lex_.peek().text != "extern") {
      r.sources.push_back(dotted_name());
      while (peek_punct(",")) {
        lex_.next();
        r.sources.push_back(dotted_name());
      }
    }
    if (peek_punct("->")) {
      lex_.next();
      r.effects.push_back(effect_ref());
      while (peek_punct(",")) {
        lex_.next();
        r.effects.push_back(effect_ref());
      }
    }
    if (lex_.peek().kind == TokKind::ScriptOpen) {
      // Capture while `{=` is still the lookahead token: consuming it first
      // would pre-lex the body's first token and drop it from the raw text.
      auto [body, body_pos] = lex_.take_script_body();
      Lexer script_lexer(body, body_pos);
      ScriptParser sp(script_lexer);
      r.script = std::make_shared<Script>(sp.parse());
    } else if (peek_ident("extern")) {
      lex_.next();
      const Token& s = lex_.peek();
      if (s.kind != TokKind::String) {
        lex_.throw_error("expected string after `extern`", s.pos);
      }
      r.native_key = lex_.next().text;
      optional_semi();
    } else {
      lex_.throw_error("expected reaction body `{=` or `extern`", lex_.peek().pos);
    }
    rc.reactions.push_back(std::move(r));
  }

  TriggerRef trigger_ref() {
    TriggerRef t;
    t.pos = lex_.peek().pos;
    std::string first = expect_ident("trigger");
    if (first == "startup") {
      t.kind = TriggerKind::Startup;
      return t;
    }
    if (first == "shutdown") {
      t.kind = TriggerKind::Shutdown;
      return t;
    }
    if (first == "reset") {
      t.kind = TriggerKind::Reset;
      return t;
    }
    if (peek_punct(".")) {
      lex_.next();
      t.name.instance = std::move(first);
      t.name.port = expect_ident("port name");
    } else {
      t.name.port = std::move(first);
    }
    // Port vs action vs timer is resolved during validation.
    t.kind = TriggerKind::Port;
    return t;
  }

  EffectRef effect_ref() {
    EffectRef e;
    e.pos = lex_.peek().pos;
    std::string first = expect_ident("effect");
    if ((first == "reset" || first == "history") && peek_punct("(")) {
      lex_.next();
      e.kind = EffectRef::Kind::Mode;
      e.transition = first == "reset" ? TransitionKind::Reset : TransitionKind::History;
      e.name.port = expect_ident("mode name");
      expect_punct(")");
      return e;
    }
    if (peek_punct(".")) {
      lex_.next();
      e.name.instance = std::move(first);
      e.name.port = expect_ident("port name");
    } else {
      e.name.port = std::move(first);
    }
    e.kind = EffectRef::Kind::Port;  // action effects resolved in validation
    return e;
  }

  void mode_decl(ReactorClass& rc, int enclosing_mode) {
    ModeDecl m;
    m.pos = lex_.peek().pos;
    if (peek_ident("initial")) {
      lex_.next();
      m.is_initial = true;
    }
    expect_keyword("mode");
    m.name = expect_ident("mode name");
    m.declared_in_mode = enclosing_mode;
    const int mode_index = static_cast<int>(rc.modes.size());
    rc.modes.push_back(std::move(m));
    expect_punct("{");
    while (!peek_punct("}")) {
      if (lex_.peek().kind == TokKind::End) {
        lex_.throw_error("expected `}`", lex_.peek().pos);
      }
      element(rc, mode_index);
    }
    lex_.next();
  }

  void instance_or_connection(ReactorClass& rc, int mode_index) {
    SourcePos pos = lex_.peek().pos;
    std::string first = expect_ident("declaration");
    if (peek_punct("=")) {
      lex_.next();
      expect_keyword("new");
      InstanceDecl inst;
      inst.pos = pos;
      inst.mode_index = mode_index;
      inst.name = std::move(first);
      inst.class_name = expect_ident("reactor class");
      expect_punct("(");
      if (!peek_punct(")")) {
        inst.args.push_back(instance_arg());
        while (peek_punct(",")) {
          lex_.next();
          inst.args.push_back(instance_arg());
        }
      }
      expect_punct(")");
      optional_semi();
      rc.instances.push_back(std::move(inst));
      return;
    }
    ConnectionDecl conn;
    conn.pos = pos;
    conn.mode_index = mode_index;
    if (peek_punct(".")) {
      lex_.next();
      conn.source.instance = std::move(first);
      conn.source.port = expect_ident("port name");
    } else {
      conn.source.port = std::move(first);
    }
    expect_punct("->");
    conn.destination = dotted_name();
    if (peek_ident("after")) {
      lex_.next();
      conn.after_delay = duration_literal();
    }
    optional_semi();
    rc.connections.push_back(std::move(conn));
  }

  InstanceArg instance_arg() {
    InstanceArg a;
    a.pos = lex_.peek().pos;
    a.name = expect_ident("parameter name");
    expect_punct("=");
    const Token& t = lex_.peek();
    if (t.kind == TokKind::Number && t.is_integer) {
      // could be a duration literal
      Token num = lex_.next();
      if (lex_.peek().kind == TokKind::Ident && is_duration_unit(lex_.peek().text)) {
        Token unit = lex_.next();
        auto d = parse_duration(num.text + " " + unit.text);
        if (!d) {
          lex_.throw_error("duration literal out of range", num.pos);
        }
        a.is_duration = true;
        a.duration_value = *d;
      } else {
        a.real_value = num.number;
      }
      return a;
    }
    a.real_value = signed_number();
    return a;
  }

  PortName dotted_name() {
    PortName pn;
    std::string first = expect_ident("name");
    if (peek_punct(".")) {
      lex_.next();
      pn.instance = std::move(first);
      pn.port = expect_ident("port name");
    } else {
      pn.port = std::move(first);
    }
    return pn;
  }

  Duration duration_literal() {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Number || !t.is_integer) {
      lex_.throw_error("expected duration literal, found `" + t.text + "`", t.pos);
    }
    Token num = lex_.next();
    const Token& u = lex_.peek();
    if (u.kind != TokKind::Ident || !is_duration_unit(u.text)) {
      lex_.throw_error("expected duration unit (nsec|usec|msec|sec)", u.pos);
    }
    Token unit = lex_.next();
    auto d = parse_duration(num.text + " " + unit.text);
    if (!d) {
      lex_.throw_error("duration literal out of range", num.pos);
    }
    return *d;
  }

  double signed_number() {
    bool neg = false;
    if (peek_punct("-")) {
      lex_.next();
      neg = true;
    }
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Number) {
      lex_.throw_error("expected number, found `" + t.text + "`", t.pos);
    }
    double v = lex_.next().number;
    return neg ? -v : v;
  }

  bool peek_ident(const char* s) {
    return lex_.peek().kind == TokKind::Ident && lex_.peek().text == s;
  }
  bool peek_punct(const char* s) {
    return lex_.peek().kind == TokKind::Punct && lex_.peek().text == s;
  }
  void expect_keyword(const char* kw) {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Ident || t.text != kw) {
      lex_.throw_error(std::string("expected `") + kw + "`, found `" + t.text + "`", t.pos);
    }
    lex_.next();
  }
  std::string expect_ident(const char* what) {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Ident) {
      lex_.throw_error(std::string("expected ") + what + ", found `" + t.text + "`", t.pos);
    }
    return lex_.next().text;
  }
  void expect_punct(const std::string& p) {
    const Token& t = lex_.peek();
    if (t.kind != TokKind::Punct || t.text != p) {
      lex_.throw_error("expected `" + p + "`, found `" + t.text + "`", t.pos);
    }
    lex_.next();
  }
  void optional_semi() {
    if (peek_punct(";")) {
      lex_.next();
    }
  }

  Lexer lex_;
};

}  // namespace

ParseResult parse_program(std::string_view text) {
  ParseResult result;
  try {
    Parser parser(text);
    result.program = parser.parse();
  } catch (const Diagnostic& d) {
    result.diags.error(d.code, d.message, d.pos);
  }
  return result;
}

}  // namespace lfm
