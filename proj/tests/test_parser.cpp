#include <gtest/gtest.h>

#include <string>

#include "lfm/ast.hpp"
#include "lfm/examples.hpp"
#include "lfm/parser.hpp"
#include "lfm/printer.hpp"
#include "test_util.hpp"

namespace lfm {
namespace {

SourceProgram must_parse(std::string_view src) {
  ParseResult r = parse_program(src);
  EXPECT_TRUE(r.ok()) << r.diags.render("<test>");
  return std::move(r.program);
}

TEST(Parser, ControllerHasThreeModesWithInitialSwingUp) {
  const SourceProgram p = must_parse(furuta_example_source());
  const ReactorClass* ctrl = nullptr;
  for (const ReactorClass& rc : p.reactors) {
    if (rc.name == "Controller") {
      ctrl = &rc;
    }
  }
  ASSERT_NE(ctrl, nullptr);
  ASSERT_EQ(ctrl->modes.size(), 3u);
  EXPECT_EQ(ctrl->modes[0].name, "SwingUp");
  EXPECT_TRUE(ctrl->modes[0].is_initial);
  EXPECT_FALSE(ctrl->modes[1].is_initial);
  EXPECT_FALSE(ctrl->modes[2].is_initial);

  // The SwingUp reaction declares the Catch mode as a reset effect.
  bool found_reset_catch = false;
  for (const ReactionDecl& r : ctrl->reactions) {
    if (r.mode_index != 0) {
      continue;
    }
    for (const EffectRef& e : r.effects) {
      if (e.kind == EffectRef::Kind::Mode && e.name.port == "Catch") {
        EXPECT_EQ(e.transition, TransitionKind::Reset);
        found_reset_catch = true;
      }
    }
  }
  EXPECT_TRUE(found_reset_catch);
}

TEST(Parser, HistoryEffectRecordsHistoryTransition) {
  const SourceProgram p = must_parse(timing_example_source());
  const ReactorClass* modal = nullptr;
  for (const ReactorClass& rc : p.reactors) {
    if (rc.name == "Modal") {
      modal = &rc;
    }
  }
  ASSERT_NE(modal, nullptr);
  bool found_history_one = false;
  for (const ReactionDecl& r : modal->reactions) {
    for (const EffectRef& e : r.effects) {
      if (e.kind == EffectRef::Kind::Mode && e.name.port == "One") {
        EXPECT_EQ(e.transition, TransitionKind::History);
        found_history_one = true;
      }
    }
  }
  EXPECT_TRUE(found_history_one);
}

TEST(Parser, EmptyReactorIsValidWithZeroElements) {
  const SourceProgram p = must_parse("reactor X {}\nmain reactor { x = new X() }\n");
  ASSERT_EQ(p.reactors.size(), 2u);
  const ReactorClass& x = p.reactors[0];
  EXPECT_EQ(x.name, "X");
  EXPECT_TRUE(x.ports.empty());
  EXPECT_TRUE(x.reactions.empty());
  EXPECT_TRUE(x.modes.empty());
  EXPECT_TRUE(x.timers.empty());
}

TEST(Parser, TargetHeaderIsOptionalAndIgnored) {
  must_parse("target script;\nmain reactor {}\n");
  must_parse("main reactor {}\n");
}

TEST(Parser, MainReactorNameDefaultsWhenOmitted) {
  const SourceProgram p = must_parse("main reactor {}\n");
  ASSERT_EQ(p.reactors.size(), 1u);
  EXPECT_TRUE(p.reactors[0].is_main);
}

TEST(Parser, DurationsInDeclarationsScaleExactly) {
  const SourceProgram p = must_parse(
      "reactor A {\n"
      "  output o: real\n"
      "  timer t(100 msec, 750 msec)\n"
      "  logical action a(500 msec)\n"
      "  reaction(t) -> o, a {=\n"
      "    set(o, 1);\n"
      "  =}\n"
      "}\n"
      "reactor B { input i: real }\n"
      "main reactor {\n"
      "  x = new A()\n"
      "  y = new B()\n"
      "  x.o -> y.i after 250 msec\n"
      "}\n");
  const ReactorClass& a = p.reactors[0];
  EXPECT_EQ(a.timers[0].offset.nanos, 100 * kNanosPerMsec);
  EXPECT_EQ(a.timers[0].period.nanos, 750 * kNanosPerMsec);
  EXPECT_EQ(a.actions[0].min_delay.nanos, 500 * kNanosPerMsec);
  const ReactorClass& main_cls = p.reactors[2];
  ASSERT_EQ(main_cls.connections.size(), 1u);
  ASSERT_TRUE(main_cls.connections[0].after_delay.has_value());
  EXPECT_EQ(main_cls.connections[0].after_delay->nanos, 250 * kNanosPerMsec);
}

TEST(Parser, VectorPortTypeCarriesLength) {
  const SourceProgram p = must_parse(
      "reactor A { output v: real[4] }\nmain reactor { a = new A() }\n");
  EXPECT_EQ(p.reactors[0].ports[0].type.vector_length, 4);
  EXPECT_TRUE(p.reactors[0].ports[0].type.is_vector());
}

TEST(Parser, ExternReactionRecordsNativeKey) {
  const SourceProgram p = must_parse(
      "reactor A {\n"
      "  output o: real\n"
      "  timer t(0 msec, 5 msec)\n"
      "  reaction(t) -> o extern \"plant_step\"\n"
      "}\n"
      "main reactor { a = new A() }\n");
  ASSERT_EQ(p.reactors[0].reactions.size(), 1u);
  EXPECT_EQ(p.reactors[0].reactions[0].native_key, "plant_step");
  EXPECT_EQ(p.reactors[0].reactions[0].script, nullptr);
}

TEST(Parser, ScriptBodyKeepsItsFirstStatement) {
  // Regression: capturing the raw body after consuming `{=` used to drop the
  // first already-lexed token of the script.
  const SourceProgram p = must_parse(
      "reactor A {\n"
      "  state x: real = 0\n"
      "  timer t(0 msec, 5 msec)\n"
      "  reaction(t) {=\n"
      "    x = x + 1;\n"
      "  =}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  const Script& s = *p.reactors[0].reactions[0].script;
  ASSERT_EQ(s.statements.size(), 1u);
  EXPECT_EQ(s.statements[0]->kind, StmtKind::Assign);
  EXPECT_EQ(s.statements[0]->name, "x");
}

TEST(Parser, IfElseChainsAndOperatorsParse) {
  const SourceProgram p = must_parse(
      "reactor A {\n"
      "  input i: real\n"
      "  output o: real\n"
      "  state s: real = 0\n"
      "  reaction(i) -> o {=\n"
      "    if (get(i) > 1 && !(s == 0) || is_present(i)) {\n"
      "      set(o, min(get(i), sat(s, -1, 1)));\n"
      "    } else if (time() >= 0.5) {\n"
      "      s = -get(i) * 2 + 1;\n"
      "    } else {\n"
      "      s = 0;\n"
      "    }\n"
      "  =}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  const Script& s = *p.reactors[0].reactions[0].script;
  ASSERT_EQ(s.statements.size(), 1u);
  const Stmt& top = *s.statements[0];
  EXPECT_EQ(top.kind, StmtKind::If);
  ASSERT_EQ(top.else_body.size(), 1u);
  EXPECT_EQ(top.else_body[0]->kind, StmtKind::If);  // else-if chain
  EXPECT_EQ(top.else_body[0]->else_body.size(), 1u);
}

TEST(Parser, SyntaxErrorCarriesPosition) {
  ParseResult r = parse_program("reactor A {\n  input : real\n}\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diags.items()[0].code, "SYNTAX");
  EXPECT_EQ(r.diags.items()[0].pos.line, 2);
  EXPECT_GT(r.diags.items()[0].pos.col, 0);
}

TEST(Parser, PrintParseReachesFixedPoint) {
  const char* sources[] = {
      timing_example_source(),
      furuta_example_source(),
  };
  for (const char* src : sources) {
    const std::string once = print_program(must_parse(src));
    const std::string twice = print_program(must_parse(once));
    EXPECT_EQ(once, twice);
  }
  for (const char* name : {"fig7a.lfm", "fig7b.lfm", "fig7a_demoded.lfm", "fig7b_demoded.lfm",
                           "timing.lfm"}) {
    const std::string src = test::read_file(test::data_file(name));
    const std::string once = print_program(must_parse(src));
    const std::string twice = print_program(must_parse(once));
    EXPECT_EQ(once, twice) << name;
  }
}

}  // namespace
}  // namespace lfm
