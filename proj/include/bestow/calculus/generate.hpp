#pragma once

#include <cstdint>
#include <stdexcept>

#include "bestow/calculus/syntax.hpp"

namespace bestow::calculus {

/// Relative frequencies of the productions the generator picks from.
struct GeneratorWeights {
  unsigned let = 3;       ///< (\x:t. body) arg
  unsigned send = 8;
  unsigned mutate = 4;
  unsigned bestow = 3;
  unsigned variable = 4;
  unsigned applyVar = 1;  ///< f e for a bound arrow-typed f
  unsigned leaf = 2;      ///< (), new p, new c
};

struct Generated {
  Expr expr;
  Type type;
};

class GenerationFailed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A closed term of size at most `sizeBudget` that typechecks in the empty
/// environment, built top-down from the typing rules. Deterministic in seed.
Generated generateWellTyped(std::uint64_t seed, std::size_t sizeBudget, const GeneratorWeights& weights = {});

}  // namespace bestow::calculus
