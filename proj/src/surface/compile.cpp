#include "bestow/surface/compile.hpp"

#include "bestow/surface/parser.hpp"

namespace bestow::surface {

Compiled compile(std::string_view source, const ElaborateOptions& options) {
  Compiled out;
  auto parsed = parse(source);
  if (auto* diags = std::get_if<std::vector<Diagnostic>>(&parsed)) {
    out.diagnostics = std::move(*diags);
    return out;
  }
  Elaborated el = elaborate(std::get<SurfaceProgram>(parsed), options);
  if (!el.ok()) {
    out.diagnostics = std::move(el.diagnostics);
    return out;
  }
  out.expr = el.expr;
  out.heap = std::move(el.heap);
  out.type = calculus::typecheck({}, out.expr);
  return out;
}

}  // namespace bestow::surface
