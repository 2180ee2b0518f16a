#include <gtest/gtest.h>

#include <string>

#include "lfm/driver.hpp"
#include "test_util.hpp"

namespace lfm {
namespace {

DiagList diags_of(std::string_view src) { return load_program(src).diags; }

TEST(Validate, TwoInitialModesRejected) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  initial mode M1 {}\n"
      "  initial mode M2 {}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("INITIAL_COUNT")) << d.render("<test>");
}

TEST(Validate, ZeroInitialModesRejected) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  mode M1 {}\n"
      "  mode M2 {}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("INITIAL_COUNT")) << d.render("<test>");
}

TEST(Validate, PortInsideModeRejected) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  initial mode M {\n"
      "    input x: real\n"
      "  }\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("PORT_IN_MODE")) << d.render("<test>");
}

TEST(Validate, ModeNestedInModeRejected) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  initial mode M {\n"
      "    mode N {}\n"
      "  }\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("MODE_IN_MODE")) << d.render("<test>");
}

TEST(Validate, DuplicateModeNamesRejected) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  initial mode M {}\n"
      "  mode M {}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("DUPLICATE_NAME")) << d.render("<test>");
}

TEST(Validate, DuplicatePortNamesRejected) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  input x: real\n"
      "  output x: real\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("DUPLICATE_NAME")) << d.render("<test>");
}

TEST(Validate, UnknownTriggerRejected) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  reaction(nosuch) {=\n"
      "  =}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("UNKNOWN_REF")) << d.render("<test>");
}

TEST(Validate, UnknownInstanceClassRejected) {
  const DiagList d = diags_of("main reactor { a = new NoSuch() }\n");
  EXPECT_TRUE(d.has("UNKNOWN_REF")) << d.render("<test>");
}

TEST(Validate, SetModeTargetMustBeDeclaredEffect) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  timer t(0 msec, 100 msec)\n"
      "  initial mode M1 {\n"
      "    reaction(t) {=\n"
      "      set_mode(M2);\n"
      "    =}\n"
      "  }\n"
      "  mode M2 {}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("EFFECT_UNDECLARED")) << d.render("<test>");
}

TEST(Validate, SetTargetMustBeDeclaredEffect) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  output o: real\n"
      "  timer t(0 msec, 100 msec)\n"
      "  reaction(t) {=\n"
      "    set(o, 1);\n"
      "  =}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("EFFECT_UNDECLARED")) << d.render("<test>");
}

TEST(Validate, ScheduleTargetMustBeDeclaredEffect) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  logical action act(10 msec)\n"
      "  timer t(0 msec, 100 msec)\n"
      "  reaction(t) {=\n"
      "    schedule(act, 0);\n"
      "  =}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("EFFECT_UNDECLARED")) << d.render("<test>");
}

TEST(Validate, GetSourceMustBeTriggerOrSource) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  input i: real\n"
      "  output o: real\n"
      "  timer t(0 msec, 100 msec)\n"
      "  reaction(t) -> o {=\n"
      "    set(o, get(i));\n"
      "  =}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("SOURCE_UNDECLARED")) << d.render("<test>");
}

TEST(Validate, ConnectionTypeMismatchRejected) {
  const DiagList d = diags_of(
      "reactor A { output o: real[4] }\n"
      "reactor B { input i: real }\n"
      "main reactor {\n"
      "  a = new A()\n"
      "  b = new B()\n"
      "  a.o -> b.i\n"
      "}\n");
  EXPECT_TRUE(d.has("TYPE_MISMATCH")) << d.render("<test>");
}

TEST(Validate, IndexedReadOfScalarPortRejected) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  input i: real\n"
      "  output o: real\n"
      "  reaction(i) -> o {=\n"
      "    set(o, get(i, 2));\n"
      "  =}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("TYPE_MISMATCH")) << d.render("<test>");
}

TEST(Validate, MissingMainRejected) {
  const DiagList d = diags_of("reactor A {}\n");
  EXPECT_TRUE(d.has("MAIN_COUNT")) << d.render("<test>");
}

TEST(Validate, SelfInstantiationCycleRejected) {
  const DiagList d = diags_of(
      "reactor A { a = new A() }\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("INSTANCE_CYCLE")) << d.render("<test>");
}

TEST(Validate, ShutdownReactionMayNotSwitchModes) {
  const DiagList d = diags_of(
      "reactor A {\n"
      "  initial mode M1 {\n"
      "    reaction(shutdown) -> reset(M2) {=\n"
      "      set_mode(M2);\n"
      "    =}\n"
      "  }\n"
      "  mode M2 {}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.has("SHUTDOWN_SET_MODE")) << d.render("<test>");
}

TEST(Validate, ModeScriptMayReadReactorLevelState) {
  // Modes share their reactor's scope: reactor-level state vars are readable
  // and assignable from reactions inside modes.
  const DiagList d = diags_of(
      "reactor A {\n"
      "  state shared: real = 7\n"
      "  output o: real\n"
      "  initial mode M {\n"
      "    timer t(0 msec, 100 msec)\n"
      "    reaction(t) -> o {=\n"
      "      shared = shared + 1;\n"
      "      set(o, shared);\n"
      "    =}\n"
      "  }\n"
      "}\n"
      "main reactor { a = new A() }\n");
  EXPECT_TRUE(d.empty()) << d.render("<test>");
}

TEST(Validate, BundledExamplesAndFixturesAccepted) {
  for (const char* name : {"timing.lfm", "fig7a.lfm", "fig7b.lfm"}) {
    const DiagList d = diags_of(test::read_file(test::data_file(name)));
    EXPECT_TRUE(d.empty()) << name << "\n" << d.render(name);
  }
}

}  // namespace
}  // namespace lfm
