#pragma once

#include <string_view>

#include "lfm/ast.hpp"
#include "lfm/diag.hpp"
#include "lfm/instance.hpp"

namespace lfm {

/// Outcome of the front-to-back loading pipeline:
/// parse -> validate -> instantiate -> causality/level analysis.
///
/// The program owns every declaration the instance tree points at, so keep
/// the whole LoadResult alive while the tree (or an engine built from it) is
/// in use. Moving a LoadResult is fine: declaration addresses are stable.
struct LoadResult {
  SourceProgram program;
  InstanceTree tree;  // tree.main is null when loading stopped early
  DiagList diags;

  [[nodiscard]] bool ok() const { return diags.empty(); }
};

LoadResult load_program(std::string_view text);

}  // namespace lfm
