#include "lfm/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "lfm/value.hpp"

namespace lfm {

const char* to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::Startup: return "STARTUP";
    case TraceKind::Shutdown: return "SHUTDOWN";
    case TraceKind::Reset: return "RESET";
    case TraceKind::Timer: return "TIMER";
    case TraceKind::Action: return "ACTION";
    case TraceKind::Reaction: return "REACTION";
    case TraceKind::Output: return "OUTPUT";
    case TraceKind::ModeSwitch: return "MODE_SWITCH";
  }
  return "?";
}

std::vector<TraceRecord> Trace::sorted() const {
  std::vector<TraceRecord> out = records_;
  std::stable_sort(out.begin(), out.end(), [](const TraceRecord& a, const TraceRecord& b) {
    if (a.tag != b.tag) {
      return a.tag < b.tag;
    }
    if (a.kind != b.kind) {
      return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    }
    return a.qualified_name < b.qualified_name;
  });
  return out;
}

std::string Trace::render() const {
  std::ostringstream out;
  for (const TraceRecord& r : sorted()) {
    out << r.tag.time_ns << "|" << r.tag.microstep << "|" << to_string(r.kind) << "|"
        << r.qualified_name << "|" << r.detail << "\n";
  }
  return out.str();
}

std::string Trace::render_csv() const {
  std::ostringstream out;
  out << "t_seconds,reactor,port,value\n";
  char buf[96];
  for (const TraceRecord& r : sorted()) {
    if (r.kind != TraceKind::Output) {
      continue;
    }
    std::snprintf(buf, sizeof(buf), "%.9f", static_cast<double>(r.tag.time_ns) / 1e9);
    out << buf << "," << r.qualified_name << "," << r.csv_port << ","
        << format_real(r.csv_value) << "\n";
  }
  return out.str();
}

}  // namespace lfm
