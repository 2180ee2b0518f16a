#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfm/time.hpp"

namespace lfm {

/// Record kinds in their sort-ordinal order; records sharing a tag appear in
/// the trace sorted by (kind ordinal, qualified name).
enum class TraceKind : int {
  Startup = 0,
  Shutdown = 1,
  Reset = 2,
  Timer = 3,
  Action = 4,
  Reaction = 5,
  Output = 6,
  ModeSwitch = 7,
};

[[nodiscard]] const char* to_string(TraceKind kind);

struct TraceRecord {
  Tag tag;
  TraceKind kind{TraceKind::Startup};
  std::string qualified_name;
  std::string detail;
  // Filled for Output records so the CSV view needs no re-parsing.
  std::string csv_port;
  double csv_value{0.0};
};

/// Append-only execution trace. Rendering applies the canonical record order
/// (tag, kind ordinal, qualified name) with a stable sort, so insertion order
/// between equal keys (e.g. vector elements of one port) is preserved.
class Trace {
 public:
  void add(TraceRecord record) { records_.push_back(std::move(record)); }

  [[nodiscard]] const std::vector<TraceRecord>& records() const { return records_; }

  /// One `<t_nanos>|<microstep>|<KIND>|<qualifiedName>|<detail>` line per
  /// record, LF-terminated.
  [[nodiscard]] std::string render() const;

  /// `t_seconds,reactor,port,value` rows for Output records, with header.
  [[nodiscard]] std::string render_csv() const;

  /// Sorted copy of the records in canonical order.
  [[nodiscard]] std::vector<TraceRecord> sorted() const;

 private:
  std::vector<TraceRecord> records_;
};

}  // namespace lfm
