#pragma once

// Reader for the s-expression text form printed by toSexpr. Unlike the
// surface language it accepts dynamic values (#n, @n, @n#m) and whole
// heaps, which makes it the input format for hand-built configurations.

#include <stdexcept>
#include <string_view>

#include "bestow/calculus/heap.hpp"
#include "bestow/calculus/syntax.hpp"

namespace bestow::calculus {

class SexprError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

Expr readExpr(std::string_view text);
Type readType(std::string_view text);
/// Counters are set past the largest id and location mentioned.
Heap readHeap(std::string_view text, QueueOrder order = QueueOrder::Fifo);

}  // namespace bestow::calculus
