#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "bestow/surface/ast.hpp"

namespace bestow::surface {

/// Parses and scope-checks a program. The grammar is in "Surface syntax" in README.md.
/// Actor ids and locations (`#3`, `@2`) are rejected: they only exist at run
/// time.
std::variant<SurfaceProgram, std::vector<Diagnostic>> parse(std::string_view source);

}  // namespace bestow::surface
