#include "bestow/surface/elaborate.hpp"

#include <optional>

namespace bestow::surface {

using calculus::Expr;
using calculus::Type;
using calculus::TypeEnv;
using calculus::Value;

namespace {

struct Binding {
  std::string name;
  Type type;
  std::uint64_t id = 0;
  /// Set when the name is bound to a lambda literal; messages naming it are
  /// inlined. `captured` pins the bindings its free names referred to.
  std::optional<Value> lambda;
  std::vector<std::pair<std::string, std::uint64_t>> captured;
  /// The name introduced by an enclosing atomic block.
  bool atomicTarget = false;
  std::string thisName;
};

class Elaborator {
public:
  explicit Elaborator(const ElaborateOptions& options) : options_(options) {}

  void bindEnv(const TypeEnv& env) {
    for (const auto& [name, t] : env.bindings()) scope_.push_back(Binding{name, t, nextId_++, {}, {}, false, {}});
  }

  Expr stmts(const std::vector<Stmt>& ss, std::size_t from = 0) {
    if (from == ss.size()) return Expr::unit();
    const Stmt& s = ss[from];
    const bool last = from + 1 == ss.size();

    if (auto* v = std::get_if<st::Val>(&s.node)) {
      Expr rhs = expr(*v->rhs);
      Binding b{v->name, typeOf(rhs), nextId_++, {}, {}, false, {}};
      if (rhs.isValue() && rhs.value().isLambda()) {
        b.lambda = rhs.value();
        for (const auto& name : calculus::freeVars(rhs)) {
          if (const Binding* outer = lookup(name)) b.captured.emplace_back(name, outer->id);
        }
      }
      const Type t = b.type;
      scope_.push_back(std::move(b));
      Expr body = stmts(ss, from + 1);
      scope_.pop_back();
      return Expr::app(Expr::lambda(v->name, t, std::move(body)), std::move(rhs));
    }

    Expr head = [&] {
      if (auto* a = std::get_if<st::Atomic>(&s.node)) return atomic(*a, s.pos);
      return expr(*std::get<st::Expr>(s.node).expr);
    }();
    if (last) return head;
    const std::string seq = "$" + std::to_string(seqCounter_++);
    const Type headType = typeOf(head);
    Expr rest = stmts(ss, from + 1);
    return Expr::app(Expr::lambda(seq, headType, std::move(rest)), std::move(head));
  }

  Expr atomic(const st::Atomic& a, Position pos) {
    if (atomicDepth_ > 0) {
      throw DesugarError(DesugarError::Kind::NestedAtomic, pos, "atomic blocks cannot be nested");
    }
    if (a.body.size() > options_.batchCap) {
      throw DesugarError(DesugarError::Kind::BatchTooLarge, pos,
                         "atomic block has " + std::to_string(a.body.size()) + " statements, the cap is " +
                             std::to_string(options_.batchCap));
    }
    Expr target = expr(*a.target);
    calculus::TypeResult t = calculus::typecheck(env(), target);
    if (!t || !t.type().isActive()) {
      throw DesugarError(DesugarError::Kind::NonActiveTarget, a.target->pos,
                         "atomic target must have an active type, found " + (t ? t.type().str() : t.str()));
    }

    std::string self = "this";
    for (unsigned k = 1; lookup(self) || a.name == self; ++k) self = "this_" + std::to_string(k);

    // Only the active part of the scope is visible in a message body; it is
    // kept whole here so typecheck can point at leaks precisely.
    ++atomicDepth_;
    scope_.push_back(Binding{a.name, t.type(), nextId_++, {}, {}, true, self});
    scope_.push_back(Binding{self, Type::passive(), nextId_++, {}, {}, false, {}});
    Expr body = stmts(a.body);
    scope_.pop_back();
    scope_.pop_back();
    --atomicDepth_;
    return Expr::send(std::move(target), Value(calculus::Lambda{self, Type::passive(), std::move(body)}));
  }

  Expr expr(const SExpr& e) {
    if (auto* n = std::get_if<sx::Name>(&e.node)) {
      const Binding* b = lookup(n->id);
      if (b && b->atomicTarget) {
        throw DesugarError(DesugarError::Kind::TargetEscapes, e.pos,
                           "'" + n->id + "' may only be used as the receiver of a send inside its atomic block");
      }
      return Expr::var(n->id);
    }
    if (std::holds_alternative<sx::Unit>(e.node)) return Expr::unit();
    if (auto* n = std::get_if<sx::New>(&e.node)) return n->actor ? Expr::newActor() : Expr::newPassive();
    if (auto* a = std::get_if<sx::App>(&e.node)) {
      Expr fun = expr(*a->fun);
      return Expr::app(std::move(fun), expr(*a->arg));
    }
    if (auto* s = std::get_if<sx::Send>(&e.node)) {
      if (auto* n = std::get_if<sx::Name>(&s->target->node)) {
        const Binding* b = lookup(n->id);
        if (b && b->atomicTarget) {
          // x ! m inside the block runs m on the receiver's this.
          return Expr::app(Expr::val(message(*s->msg)), Expr::var(b->thisName));
        }
      }
      Expr target = expr(*s->target);
      return Expr::send(std::move(target), message(*s->msg));
    }
    if (auto* m = std::get_if<sx::Mutate>(&e.node)) return Expr::mutate(expr(*m->target));
    if (auto* b = std::get_if<sx::Bestow>(&e.node)) return Expr::bestow(expr(*b->inner));
    if (auto* l = std::get_if<sx::Lambda>(&e.node)) {
      scope_.push_back(Binding{l->param, l->paramType, nextId_++, {}, {}, false, {}});
      Expr body = expr(*l->body);
      scope_.pop_back();
      return Expr::lambda(l->param, l->paramType, std::move(body));
    }
    return stmts(std::get<sx::Block>(e.node).stmts);
  }

  TypeEnv env() const {
    TypeEnv out;
    for (const Binding& b : scope_) out = out.extended(b.name, b.type);
    return out;
  }

private:
  Value message(const SExpr& m) {
    if (std::holds_alternative<sx::Lambda>(m.node)) return expr(m).value();
    if (auto* n = std::get_if<sx::Name>(&m.node)) {
      const Binding* b = lookup(n->id);
      if (b && b->lambda) {
        for (const auto& [name, id] : b->captured) {
          const Binding* now = lookup(name);
          if (!now || now->id != id) {
            throw DesugarError(DesugarError::Kind::BadMessage, m.pos,
                               "message '" + n->id + "' refers to '" + name + "', which is shadowed here");
          }
        }
        return *b->lambda;
      }
    }
    throw DesugarError(DesugarError::Kind::BadMessage, m.pos,
                       "a message must be a lambda or a name bound to a lambda");
  }

  const Binding* lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name) return &*it;
    }
    return nullptr;
  }

  /// Annotation for a binder; ill-typed right-hand sides get Unit and are
  /// reported by the typechecker afterwards.
  Type typeOf(const Expr& e) const {
    calculus::TypeResult t = calculus::typecheck(env(), e);
    return t ? t.type() : Type::unit();
  }

  ElaborateOptions options_;
  std::vector<Binding> scope_;
  std::uint64_t nextId_ = 0;
  unsigned seqCounter_ = 0;
  int atomicDepth_ = 0;
};

}  // namespace

Expr desugarAtomic(const st::Atomic& block, const TypeEnv& env, const ElaborateOptions& options) {
  Elaborator el(options);
  el.bindEnv(env);
  return el.atomic(block, Position{});
}

Elaborated elaborate(const SurfaceProgram& program, const ElaborateOptions& options) {
  Elaborator el(options);
  try {
    Expr e = el.stmts(program.stmts);
    return Elaborated{e, calculus::initialHeap(e, options.queueOrder), {}};
  } catch (const DesugarError& err) {
    return Elaborated{Expr::unit(), calculus::initialHeap(Expr::unit(), options.queueOrder),
                      {Diagnostic{err.pos(), Severity::Error, err.what()}}};
  }
}

}  // namespace bestow::surface
