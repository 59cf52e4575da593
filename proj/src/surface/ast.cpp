#include "bestow/surface/ast.hpp"

namespace bestow::surface {

std::string Diagnostic::str() const {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
         (severity == Severity::Error ? "error: " : "warning: ") + message;
}

namespace {

bool sameStmts(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!sameTree(a[i], b[i])) return false;
  }
  return true;
}

bool same(const SExprPtr& a, const SExprPtr& b) { return a && b && sameTree(*a, *b); }

}  // namespace

bool sameTree(const SExpr& a, const SExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* x = std::get_if<sx::Name>(&a.node)) return x->id == std::get<sx::Name>(b.node).id;
  if (std::holds_alternative<sx::Unit>(a.node)) return true;
  if (auto* x = std::get_if<sx::New>(&a.node)) return x->actor == std::get<sx::New>(b.node).actor;
  if (auto* x = std::get_if<sx::App>(&a.node)) {
    const auto& y = std::get<sx::App>(b.node);
    return same(x->fun, y.fun) && same(x->arg, y.arg);
  }
  if (auto* x = std::get_if<sx::Send>(&a.node)) {
    const auto& y = std::get<sx::Send>(b.node);
    return same(x->target, y.target) && same(x->msg, y.msg);
  }
  if (auto* x = std::get_if<sx::Mutate>(&a.node)) return same(x->target, std::get<sx::Mutate>(b.node).target);
  if (auto* x = std::get_if<sx::Bestow>(&a.node)) return same(x->inner, std::get<sx::Bestow>(b.node).inner);
  if (auto* x = std::get_if<sx::Lambda>(&a.node)) {
    const auto& y = std::get<sx::Lambda>(b.node);
    return x->param == y.param && x->paramType == y.paramType && same(x->body, y.body);
  }
  return sameStmts(std::get<sx::Block>(a.node).stmts, std::get<sx::Block>(b.node).stmts);
}

bool sameTree(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* x = std::get_if<st::Val>(&a.node)) {
    const auto& y = std::get<st::Val>(b.node);
    return x->name == y.name && same(x->rhs, y.rhs);
  }
  if (auto* x = std::get_if<st::Atomic>(&a.node)) {
    const auto& y = std::get<st::Atomic>(b.node);
    return x->name == y.name && same(x->target, y.target) && sameStmts(x->body, y.body);
  }
  return same(std::get<st::Expr>(a.node).expr, std::get<st::Expr>(b.node).expr);
}

bool sameTree(const SurfaceProgram& a, const SurfaceProgram& b) { return sameStmts(a.stmts, b.stmts); }

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

enum class Level { Top, App, Atom };

std::string printExpr(const SExpr& e, Level ctx);

std::string printStmts(const std::vector<Stmt>& stmts, const std::string& sep);

std::string printStmt(const Stmt& s) {
  if (auto* v = std::get_if<st::Val>(&s.node)) return "val " + v->name + " = " + printExpr(*v->rhs, Level::Top);
  if (auto* a = std::get_if<st::Atomic>(&s.node)) {
    return "atomic " + a->name + " <- " + printExpr(*a->target, Level::Atom) + " { " + printStmts(a->body, "; ") +
           (a->body.empty() ? "}" : " }");
  }
  return printExpr(*std::get<st::Expr>(s.node).expr, Level::Top);
}

std::string printStmts(const std::vector<Stmt>& stmts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    if (i) out += sep;
    out += printStmt(stmts[i]);
  }
  return out;
}

std::string printExpr(const SExpr& e, Level ctx) {
  auto wrap = [&](std::string s, Level needs) { return ctx > needs ? "(" + s + ")" : s; };
  if (auto* x = std::get_if<sx::Name>(&e.node)) return x->id;
  if (std::holds_alternative<sx::Unit>(e.node)) return "()";
  if (auto* x = std::get_if<sx::New>(&e.node)) return wrap(x->actor ? "new c" : "new p", Level::App);
  if (auto* x = std::get_if<sx::App>(&e.node)) {
    return wrap(printExpr(*x->fun, Level::App) + " " + printExpr(*x->arg, Level::Atom), Level::App);
  }
  if (auto* x = std::get_if<sx::Send>(&e.node)) {
    return wrap(printExpr(*x->target, Level::App) + " ! " + printExpr(*x->msg, Level::Atom), Level::Top);
  }
  if (auto* x = std::get_if<sx::Mutate>(&e.node)) return printExpr(*x->target, Level::Atom) + ".mutate()";
  if (auto* x = std::get_if<sx::Bestow>(&e.node)) return wrap("bestow " + printExpr(*x->inner, Level::Top), Level::Top);
  if (auto* x = std::get_if<sx::Lambda>(&e.node)) {
    return wrap("\\" + x->param + ":" + x->paramType.str() + ". " + printExpr(*x->body, Level::Top), Level::Top);
  }
  const auto& b = std::get<sx::Block>(e.node);
  return b.stmts.empty() ? "{ }" : "{ " + printStmts(b.stmts, "; ") + " }";
}

}  // namespace

std::string print(const SurfaceProgram& p) {
  std::string out = printStmts(p.stmts, "\n");
  return out.empty() ? out : out + "\n";
}

std::string print(const SExpr& e) { return printExpr(e, Level::Top); }

}  // namespace bestow::surface
