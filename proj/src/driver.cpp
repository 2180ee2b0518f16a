#include "lfm/driver.hpp"

#include "lfm/graph.hpp"
#include "lfm/parser.hpp"
#include "lfm/validate.hpp"

namespace lfm {

LoadResult load_program(std::string_view text) {
  LoadResult out;
  ParseResult parsed = parse_program(text);
  out.program = std::move(parsed.program);
  out.diags.append(parsed.diags);
  if (!out.diags.empty()) {
    return out;
  }
  out.diags.append(validate_program(out.program));
  if (!out.diags.empty()) {
    return out;
  }
  out.tree = instantiate(out.program);
  out.diags.append(analyze_graph(out.tree));
  return out;
}

}  // namespace lfm
