#pragma once

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lfm/driver.hpp"
#include "lfm/engine.hpp"
#include "lfm/trace.hpp"

namespace lfm::test {

/// Loads a program and fails the test with the rendered diagnostics when the
/// pipeline rejects it.
inline LoadResult must_load(std::string_view src) {
  LoadResult r = load_program(src);
  EXPECT_TRUE(r.ok()) << r.diags.render("<test>");
  return r;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  EXPECT_TRUE(f.good()) << "cannot open " << path;
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::string data_file(const std::string& name) {
#ifdef LFM_TEST_DATA_DIR
  return std::string(LFM_TEST_DATA_DIR) + "/" + name;
#else
  return "tests/data/" + name;
#endif
}

/// Records matching a kind, in trace order.
inline std::vector<TraceRecord> by_kind(const Trace& t, TraceKind k) {
  std::vector<TraceRecord> out;
  for (const TraceRecord& r : t.sorted()) {
    if (r.kind == k) {
      out.push_back(r);
    }
  }
  return out;
}

/// True when the trace holds a record with exactly this shape.
inline bool has_record(const Trace& t, Tag tag, TraceKind kind, const std::string& qname,
                       const std::string& detail_substring) {
  for (const TraceRecord& r : t.records()) {
    if (r.tag == tag && r.kind == kind && r.qualified_name == qname &&
        r.detail.find(detail_substring) != std::string::npos) {
      return true;
    }
  }
  return false;
}

inline int count_records(const Trace& t, TraceKind kind, const std::string& qname,
                         const std::string& detail_substring) {
  int n = 0;
  for (const TraceRecord& r : t.records()) {
    if (r.kind == kind && r.qualified_name == qname &&
        r.detail.find(detail_substring) != std::string::npos) {
      ++n;
    }
  }
  return n;
}

/// Loads, runs in fast mode, and returns the trace; fails on any diagnostic.
inline Trace run_source(std::string_view src, Duration stop) {
  LoadResult r = must_load(src);
  Engine engine(std::move(r.tree));
  return engine.run(stop);
}

}  // namespace lfm::test
