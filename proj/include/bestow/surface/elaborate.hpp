#pragma once

#include <stdexcept>
#include <vector>

#include "bestow/calculus/heap.hpp"
#include "bestow/calculus/syntax.hpp"
#include "bestow/calculus/typecheck.hpp"
#include "bestow/surface/ast.hpp"

namespace bestow::surface {

inline constexpr std::size_t kDefaultBatchCap = 64;

struct ElaborateOptions {
  /// Most statements one atomic block may batch into a single message.
  std::size_t batchCap = kDefaultBatchCap;
  calculus::QueueOrder queueOrder = calculus::QueueOrder::Fifo;
};

class DesugarError : public std::runtime_error {
public:
  enum class Kind { NestedAtomic, NonActiveTarget, BatchTooLarge, BadMessage, TargetEscapes };
  DesugarError(Kind k, Position pos, const std::string& what) : std::runtime_error(what), kind_(k), pos_(pos) {}
  Kind kind() const { return kind_; }
  Position pos() const { return pos_; }

private:
  Kind kind_;
  Position pos_;
};

/// `atomic x <- e { x ! m1; ...; x ! mk }` becomes the single send
/// `e ! (\this:p. { m1 this; ...; mk this })`. `env` types the free names of
/// the block. Throws DesugarError.
calculus::Expr desugarAtomic(const st::Atomic& block, const calculus::TypeEnv& env = {},
                             const ElaborateOptions& options = {});

struct Elaborated {
  calculus::Expr expr;
  calculus::Heap heap;
  /// Problems the core typechecker would not name precisely (bad atomic
  /// blocks, non-lambda messages). Type errors are left to typecheck.
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Bindings become applications: `val x = e; rest` is `(\x:t. rest) e` with
/// t the type of e. The heap holds one root actor running the program.
Elaborated elaborate(const SurfaceProgram& program, const ElaborateOptions& options = {});

}  // namespace bestow::surface
