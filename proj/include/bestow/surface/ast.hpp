#pragma once

// Surface syntax: the human-writable front end. Adds `val` bindings,
// statement blocks, general sends and `atomic` blocks on top of the core.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "bestow/calculus/syntax.hpp"

namespace bestow::surface {

struct Position {
  int line = 1;
  int column = 1;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Position pos;
  Severity severity = Severity::Error;
  std::string message;

  /// `3:7: error: expected '}'`
  std::string str() const;
};

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;
struct Stmt;

namespace sx {
struct Name {
  std::string id;
};
struct Unit {};
struct New {
  bool actor = false;
};
struct App {
  SExprPtr fun, arg;
};
/// `e ! m`. The message is a lambda or a name bound to one.
struct Send {
  SExprPtr target, msg;
};
struct Mutate {
  SExprPtr target;
};
struct Bestow {
  SExprPtr inner;
};
struct Lambda {
  std::string param;
  calculus::Type paramType;
  SExprPtr body;
};
struct Block {
  std::vector<Stmt> stmts;
};
}  // namespace sx

struct SExpr {
  Position pos;
  std::variant<sx::Name, sx::Unit, sx::New, sx::App, sx::Send, sx::Mutate, sx::Bestow, sx::Lambda, sx::Block> node;
};

namespace st {
struct Val {
  std::string name;
  SExprPtr rhs;
};
struct Atomic {
  std::string name;
  SExprPtr target;
  std::vector<Stmt> body;
};
struct Expr {
  SExprPtr expr;
};
}  // namespace st

struct Stmt {
  Position pos;
  std::variant<st::Val, st::Atomic, st::Expr> node;
};

struct SurfaceProgram {
  std::vector<Stmt> stmts;
};

/// Structural equality, ignoring positions.
bool sameTree(const SExpr& a, const SExpr& b);
bool sameTree(const Stmt& a, const Stmt& b);
bool sameTree(const SurfaceProgram& a, const SurfaceProgram& b);

/// Prints a program back in surface syntax; the output reparses to a tree
/// equal to the input under sameTree.
std::string print(const SurfaceProgram& p);
std::string print(const SExpr& e);

}  // namespace bestow::surface
