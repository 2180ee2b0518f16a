#include <gtest/gtest.h>

#include <string>

#include "lfm/diagram.hpp"
#include "lfm/driver.hpp"
#include "lfm/examples.hpp"
#include "test_util.hpp"

namespace lfm {
namespace {

int count_occurrences(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

TEST(Diagram, OutputIsByteIdenticalAcrossRuns) {
  for (const char* src : {timing_example_source(), furuta_example_source()}) {
    LoadResult a = test::must_load(src);
    LoadResult b = test::must_load(src);
    const DotOptions opts;
    EXPECT_EQ(emit_dot(a.program, opts), emit_dot(b.program, opts));
    EXPECT_EQ(emit_dot(a.program, opts), emit_dot(a.program, opts));
  }
}

TEST(Diagram, InitialModeHasDoubledBorder) {
  LoadResult r = test::must_load(timing_example_source());
  const std::string dot = emit_dot(r.program, DotOptions{});
  // penwidth=2 belongs to One's cluster body, and only to it.
  const std::size_t one = dot.find("subgraph \"cluster_main.m.One\"");
  const std::size_t two = dot.find("subgraph \"cluster_main.m.Two\"");
  const std::size_t pen = dot.find("penwidth=2");
  ASSERT_NE(one, std::string::npos);
  ASSERT_NE(two, std::string::npos);
  ASSERT_NE(pen, std::string::npos);
  EXPECT_GT(pen, one);
  EXPECT_LT(pen, two);
  EXPECT_EQ(count_occurrences(dot, "penwidth=2"), 1);
}

TEST(Diagram, TransitionEdgesCarryTriggerLabels) {
  LoadResult r = test::must_load(timing_example_source());
  const std::string dot = emit_dot(r.program, DotOptions{});
  // One -> Two by reset, labeled with the switching reaction's trigger.
  EXPECT_NE(dot.find("\"main.m#n2\" -> \"main.m.Two#anchor\" "
                     "[lhead=\"cluster_main.m.Two\", style=bold, label=\"next\"];"),
            std::string::npos)
      << dot;
  // Two -> One by history: the label gets the [H] prefix.
  EXPECT_NE(dot.find("\"main.m#n5\" -> \"main.m.One#anchor\" "
                     "[lhead=\"cluster_main.m.One\", style=bold, label=\"[H] next\"];"),
            std::string::npos)
      << dot;
}

TEST(Diagram, LabelsOffKeepsHistoryMarker) {
  LoadResult r = test::must_load(timing_example_source());
  DotOptions opts;
  opts.show_labels = false;
  const std::string dot = emit_dot(r.program, opts);
  // No transition carries trigger names any more (port nodes keep theirs).
  EXPECT_EQ(dot.find("style=bold, label=\"next\""), std::string::npos);
  EXPECT_EQ(dot.find("label=\"[H] next\""), std::string::npos);
  // The history marker survives without the trigger names.
  EXPECT_NE(dot.find("style=bold, label=\"[H]\""), std::string::npos);
}

TEST(Diagram, EveryModeEffectYieldsOneTransitionEdge) {
  {
    LoadResult r = test::must_load(timing_example_source());
    const std::string dot = emit_dot(r.program, DotOptions{});
    EXPECT_EQ(count_occurrences(dot, "style=bold"), 2);
  }
  {
    // SwingUp->Catch, Catch->Stabilize, Catch->SwingUp.
    LoadResult r = test::must_load(furuta_example_source());
    const std::string dot = emit_dot(r.program, DotOptions{});
    EXPECT_EQ(count_occurrences(dot, "style=bold"), 3);
  }
}

const char* kParallelTransitions =
    "reactor M {\n"
    "  input a: real\n"
    "  input b: real\n"
    "  initial mode A {\n"
    "    reaction(a) -> reset(B) {=\n"
    "      set_mode(B);\n"
    "    =}\n"
    "    reaction(b) -> reset(B) {=\n"
    "      set_mode(B);\n"
    "    =}\n"
    "  }\n"
    "  mode B {}\n"
    "}\n"
    "main reactor { m = new M() }\n";

TEST(Diagram, BundlingMergesParallelTransitions) {
  LoadResult r = test::must_load(kParallelTransitions);

  // Labeled: one edge per declared effect, distinguished by trigger.
  const std::string labeled = emit_dot(r.program, DotOptions{});
  EXPECT_EQ(count_occurrences(labeled, "style=bold"), 2);
  EXPECT_NE(labeled.find("\"main.m#n0\" -> \"main.m.B#anchor\" "
                         "[lhead=\"cluster_main.m.B\", style=bold, label=\"a\"];"),
            std::string::npos)
      << labeled;
  EXPECT_NE(labeled.find("\"main.m#n1\" -> \"main.m.B#anchor\" "
                         "[lhead=\"cluster_main.m.B\", style=bold, label=\"b\"];"),
            std::string::npos);

  // Labels off without bundling: still two parallel edges.
  DotOptions plain;
  plain.show_labels = false;
  EXPECT_EQ(count_occurrences(emit_dot(r.program, plain), "style=bold"), 2);

  // Labels off with bundling: merged into one cluster-to-cluster edge.
  DotOptions bundled;
  bundled.show_labels = false;
  bundled.bundle_transitions = true;
  const std::string dot = emit_dot(r.program, bundled);
  EXPECT_EQ(count_occurrences(dot, "style=bold"), 1);
  EXPECT_NE(dot.find("\"main.m.A#anchor\" -> \"main.m.B#anchor\""), std::string::npos) << dot;

  // Bundling is advertised as a no-op while labels are shown.
  DotOptions labeled_bundle;
  labeled_bundle.bundle_transitions = true;
  EXPECT_EQ(emit_dot(r.program, labeled_bundle), labeled);
}

TEST(Diagram, PortsUsedInsideModesAreDuplicated) {
  LoadResult r = test::must_load(timing_example_source());
  const std::string dot = emit_dot(r.program, DotOptions{});
  // One's reactions touch the reactor ports out and next: each gets a dashed
  // local copy tied to the real port by a dotted identity edge.
  EXPECT_NE(dot.find("\"main.m.One.next\" [label=\"next\", shape=ellipse, fontsize=9, "
                     "style=dashed];"),
            std::string::npos);
  EXPECT_NE(dot.find("\"main.m.next\" -> \"main.m.One.next\" [style=dotted, arrowhead=none];"),
            std::string::npos);
  // Output duplicates point outward.
  EXPECT_NE(dot.find("\"main.m.One.out\" -> \"main.m.out\" [style=dotted, arrowhead=none];"),
            std::string::npos);
  // Dataflow stays local: the reaction writes the duplicate, not the original.
  EXPECT_NE(dot.find("\"main.m#n1\" -> \"main.m.One.out\";"), std::string::npos);
  EXPECT_EQ(dot.find("\"main.m#n1\" -> \"main.m.out\";"), std::string::npos);
}

TEST(Diagram, ModelessReactorHasNoModeClusters) {
  LoadResult r = test::must_load(
      "reactor A {\n"
      "  output o: real\n"
      "  timer t(0 msec, 100 msec)\n"
      "  reaction(t) -> o {=\n"
      "    set(o, 1);\n"
      "  =}\n"
      "}\n"
      "main reactor { a = new A() }\n");
  const std::string dot = emit_dot(r.program, DotOptions{});
  // Two reactor clusters (main, main.a), nothing else.
  EXPECT_EQ(count_occurrences(dot, "subgraph"), 2);
  EXPECT_EQ(count_occurrences(dot, "bgcolor"), 0);
  EXPECT_EQ(count_occurrences(dot, "style=bold"), 0);
}

TEST(Diagram, FurutaControllerShowsThreeLabeledModes) {
  LoadResult r = test::must_load(furuta_example_source());
  const std::string dot = emit_dot(r.program, DotOptions{});
  EXPECT_NE(dot.find("subgraph \"cluster_main.ctrl.SwingUp\""), std::string::npos);
  EXPECT_NE(dot.find("subgraph \"cluster_main.ctrl.Catch\""), std::string::npos);
  EXPECT_NE(dot.find("subgraph \"cluster_main.ctrl.Stabilize\""), std::string::npos);
  // All three switches are triggered by the angles input.
  EXPECT_EQ(count_occurrences(dot, "style=bold, label=\"angles\""), 3);
  EXPECT_NE(dot.find("lhead=\"cluster_main.ctrl.Catch\", style=bold, label=\"angles\""),
            std::string::npos);
  EXPECT_NE(dot.find("lhead=\"cluster_main.ctrl.Stabilize\", style=bold, label=\"angles\""),
            std::string::npos);
  EXPECT_NE(dot.find("lhead=\"cluster_main.ctrl.SwingUp\", style=bold, label=\"angles\""),
            std::string::npos);
}

}  // namespace
}  // namespace lfm
