#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lfm/diagram.hpp"
#include "lfm/driver.hpp"
#include "lfm/engine.hpp"
#include "lfm/examples.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return false;
  }
  out << content;
  return bool(out);
}

lfm::Duration parse_until(const std::string& text) {
  auto d = lfm::parse_duration(text);
  if (!d.has_value()) {
    throw CLI::ValidationError("--until", "expected a duration like `4 sec` or `500 msec`");
  }
  return *d;
}

int cmd_check(const std::string& file) {
  std::string text;
  if (!read_file(file, text)) {
    std::cerr << "error[IO]: cannot read " << file << "\n";
    return 2;
  }
  lfm::LoadResult loaded = lfm::load_program(text);
  if (!loaded.ok()) {
    std::cerr << loaded.diags.render(file);
    return 1;
  }
  return 0;
}

/// Shared back half of `run` and `run-example`: bind, execute, emit outputs.
int run_loaded(lfm::LoadResult& loaded, const std::string& display_name,
               const std::map<std::string, std::function<void(lfm::ReactionContext&)>>& natives,
               lfm::Duration until, lfm::RunMode mode, const std::string& trace_path,
               const std::string& csv_path) {
  lfm::DiagList bind = lfm::bind_natives(loaded.tree, natives);
  if (!bind.empty()) {
    std::cerr << bind.render(display_name);
    return 1;
  }
  lfm::Engine engine(std::move(loaded.tree));
  lfm::Trace trace;
  try {
    trace = engine.run(until, mode);
  } catch (const lfm::EngineError& e) {
    std::cerr << "error[RUNTIME]: " << e.what() << "\n";
    return 1;
  }
  const std::string rendered = trace.render();
  if (trace_path.empty()) {
    std::cout << rendered;
  } else if (!write_file(trace_path, rendered)) {
    std::cerr << "error[IO]: cannot write " << trace_path << "\n";
    return 2;
  }
  if (!csv_path.empty() && !write_file(csv_path, trace.render_csv())) {
    std::cerr << "error[IO]: cannot write " << csv_path << "\n";
    return 2;
  }
  return 0;
}

int cmd_run(const std::string& file, const std::string& until, const std::string& mode,
            const std::string& trace_path, const std::string& csv_path) {
  std::string text;
  if (!read_file(file, text)) {
    std::cerr << "error[IO]: cannot read " << file << "\n";
    return 2;
  }
  lfm::LoadResult loaded = lfm::load_program(text);
  if (!loaded.ok()) {
    std::cerr << loaded.diags.render(file);
    return 1;
  }
  return run_loaded(loaded, file, {}, parse_until(until),
                    mode == "realtime" ? lfm::RunMode::Realtime : lfm::RunMode::Fast, trace_path,
                    csv_path);
}

int cmd_run_example(const std::string& name, std::string until, const std::string& csv_path) {
  const char* source = nullptr;
  lfm::FurutaPlant plant;
  std::map<std::string, std::function<void(lfm::ReactionContext&)>> natives;
  if (name == "timing") {
    source = lfm::timing_example_source();
    if (until.empty()) {
      until = "4 sec";
    }
  } else if (name == "furuta") {
    source = lfm::furuta_example_source();
    natives = lfm::furuta_handlers(&plant);
    if (until.empty()) {
      until = "5 sec";
    }
  } else {
    std::cerr << "error[ARGS]: unknown example `" << name << "` (expected timing or furuta)\n";
    return 1;
  }
  lfm::LoadResult loaded = lfm::load_program(source);
  if (!loaded.ok()) {
    std::cerr << loaded.diags.render("<" + name + ">");
    return 1;
  }
  return run_loaded(loaded, "<" + name + ">", natives, parse_until(until), lfm::RunMode::Fast, "",
                    csv_path);
}

int cmd_dot(const std::string& file, bool no_labels, bool bundle, const std::string& out_path) {
  std::string text;
  if (!read_file(file, text)) {
    std::cerr << "error[IO]: cannot read " << file << "\n";
    return 2;
  }
  lfm::LoadResult loaded = lfm::load_program(text);
  if (!loaded.ok()) {
    std::cerr << loaded.diags.render(file);
    return 1;
  }
  lfm::DotOptions options;
  options.show_labels = !no_labels;
  options.bundle_transitions = bundle;
  const std::string dot = lfm::emit_dot(loaded.program, options);
  if (out_path.empty()) {
    std::cout << dot;
    return 0;
  }
  if (!write_file(out_path, dot)) {
    std::cerr << "error[IO]: cannot write " << out_path << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lfm: modal reactor compiler and runtime"};
  app.require_subcommand(1);

  std::string file;
  std::string until;
  std::string mode = "fast";
  std::string trace_path;
  std::string csv_path;
  std::string example;
  std::string out_path;
  bool no_labels = false;
  bool bundle = false;

  CLI::App* check = app.add_subcommand("check", "parse, validate and analyze a program");
  check->add_option("file", file, "program file (.lfm)")->required();

  CLI::App* run = app.add_subcommand("run", "execute a program and print its trace");
  run->add_option("file", file, "program file (.lfm)")->required();
  run->add_option("--until", until, "stop time, e.g. `4 sec`")->required();
  run->add_option("--mode", mode, "fast (default) or realtime")
      ->check(CLI::IsMember({"fast", "realtime"}));
  run->add_option("--trace", trace_path, "write the trace here instead of stdout");
  run->add_option("--csv", csv_path, "also write output records as CSV");

  CLI::App* run_example = app.add_subcommand("run-example", "run a bundled example program");
  run_example->add_option("name", example, "timing or furuta")->required();
  run_example->add_option("--until", until, "stop time (default: 4 sec timing, 5 sec furuta)");
  run_example->add_option("--csv", csv_path, "also write output records as CSV");

  CLI::App* dot = app.add_subcommand("dot", "emit a DOT diagram of a program");
  dot->add_option("file", file, "program file (.lfm)")->required();
  dot->add_flag("--no-labels", no_labels, "omit transition trigger labels");
  dot->add_flag("--bundle", bundle, "merge parallel transitions (with --no-labels)");
  dot->add_option("-o,--output", out_path, "write DOT here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    return cmd_check(file);
  }
  if (run->parsed()) {
    return cmd_run(file, until, mode, trace_path, csv_path);
  }
  if (run_example->parsed()) {
    return cmd_run_example(example, until, csv_path);
  }
  return cmd_dot(file, no_labels, bundle, out_path);
}
