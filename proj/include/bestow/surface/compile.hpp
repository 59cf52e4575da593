#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bestow/calculus/heap.hpp"
#include "bestow/calculus/typecheck.hpp"
#include "bestow/surface/elaborate.hpp"

namespace bestow::surface {

/// Parse, elaborate and typecheck in one go.
struct Compiled {
  std::vector<Diagnostic> diagnostics;  ///< parse or elaboration problems
  calculus::Expr expr = calculus::Expr::unit();
  calculus::Heap heap;
  std::optional<calculus::TypeResult> type;  ///< set once elaboration succeeded

  bool ok() const { return diagnostics.empty() && type && type->ok(); }
};

Compiled compile(std::string_view source, const ElaborateOptions& options = {});

}  // namespace bestow::surface
