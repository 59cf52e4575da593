#include "bestow/calculus/syntax.hpp"

#include <stdexcept>

namespace bestow::calculus {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

// ---------------------------------------------------------------------------
// Type
// ---------------------------------------------------------------------------

Type Type::passive() { return Type(TypeKind::Passive, nullptr); }
Type Type::actor() { return Type(TypeKind::Actor, nullptr); }
Type Type::bestowed() { return Type(TypeKind::Bestowed, nullptr); }
Type Type::unit() { return Type(TypeKind::Unit, nullptr); }

Type Type::arrow(Type dom, Type cod) {
  return Type(TypeKind::Arrow, std::make_shared<const ArrowParts>(ArrowParts{std::move(dom), std::move(cod)}));
}

const Type& Type::dom() const {
  if (kind_ != TypeKind::Arrow) throw std::logic_error("dom() on non-arrow type");
  return arrow_->dom;
}

const Type& Type::cod() const {
  if (kind_ != TypeKind::Arrow) throw std::logic_error("cod() on non-arrow type");
  return arrow_->cod;
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != TypeKind::Arrow) return true;
  return a.dom() == b.dom() && a.cod() == b.cod();
}

std::string Type::str() const {
  switch (kind_) {
    case TypeKind::Passive: return "p";
    case TypeKind::Actor: return "c";
    case TypeKind::Bestowed: return "B(p)";
    case TypeKind::Unit: return "Unit";
    case TypeKind::Arrow: {
      std::string lhs = dom().str();
      if (dom().kind() == TypeKind::Arrow) lhs = "(" + lhs + ")";
      return lhs + " -> " + cod().str();
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Value / Expr
// ---------------------------------------------------------------------------

Value::Value(Lambda lam) : repr_(std::make_shared<const Lambda>(std::move(lam))) {}

bool operator==(const Value& a, const Value& b) {
  if (a.repr_.index() != b.repr_.index()) return false;
  if (a.isLambda()) {
    const auto& la = std::get<std::shared_ptr<const Lambda>>(a.repr_);
    const auto& lb = std::get<std::shared_ptr<const Lambda>>(b.repr_);
    return la == lb || *la == *lb;
  }
  return a.repr_ == b.repr_;
}

Expr Expr::var(std::string name) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{expr::Var{std::move(name)}}));
}
Expr Expr::app(Expr fun, Expr arg) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{expr::App{std::move(fun), std::move(arg)}}));
}
Expr Expr::send(Expr target, Value msg) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{expr::Send{std::move(target), std::move(msg)}}));
}
Expr Expr::mutate(Expr target) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{expr::Mutate{std::move(target)}}));
}
Expr Expr::newPassive() { return Expr(std::make_shared<const ExprNode>(ExprNode{expr::NewPassive{}})); }
Expr Expr::newActor() { return Expr(std::make_shared<const ExprNode>(ExprNode{expr::NewActor{}})); }
Expr Expr::bestow(Expr inner) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{expr::Bestow{std::move(inner)}}));
}
Expr Expr::val(Value v) { return Expr(std::make_shared<const ExprNode>(ExprNode{expr::Val{std::move(v)}})); }

Expr Expr::lambda(std::string param, Type paramType, Expr body) {
  return val(Value(Lambda{std::move(param), std::move(paramType), std::move(body)}));
}

bool Expr::isValue() const { return std::holds_alternative<expr::Val>(node_->repr); }

const Value& Expr::value() const { return std::get<expr::Val>(node_->repr).v; }

bool operator==(const Expr& a, const Expr& b) { return a.node_ == b.node_ || a.node_->repr == b.node_->repr; }

// ---------------------------------------------------------------------------
// freeVars / containsLoc / size
// ---------------------------------------------------------------------------

namespace {

void collectFree(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out);

void collectFree(const Value& v, std::set<std::string>& bound, std::set<std::string>& out) {
  if (!v.isLambda()) return;
  const Lambda& lam = v.lambda();
  const bool inserted = bound.insert(lam.param).second;
  collectFree(lam.body, bound, out);
  if (inserted) bound.erase(lam.param);
}

void collectFree(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const expr::Var& x) {
                   if (!bound.contains(x.name)) out.insert(x.name);
                 },
                 [&](const expr::App& a) {
                   collectFree(a.fun, bound, out);
                   collectFree(a.arg, bound, out);
                 },
                 [&](const expr::Send& s) {
                   collectFree(s.target, bound, out);
                   collectFree(s.msg, bound, out);
                 },
                 [&](const expr::Mutate& m) { collectFree(m.target, bound, out); },
                 [&](const expr::NewPassive&) {},
                 [&](const expr::NewActor&) {},
                 [&](const expr::Bestow& b) { collectFree(b.inner, bound, out); },
                 [&](const expr::Val& v) { collectFree(v.v, bound, out); },
             },
             e.node().repr);
}

}  // namespace

std::set<std::string> freeVars(const Expr& e) {
  std::set<std::string> bound, out;
  collectFree(e, bound, out);
  return out;
}

std::set<std::string> freeVars(const Value& v) {
  std::set<std::string> bound, out;
  collectFree(v, bound, out);
  return out;
}

bool containsLoc(const Value& v) {
  if (v.isLoc()) return true;
  if (v.isLambda()) return containsLoc(v.lambda().body);
  return false;
}

bool containsLoc(const Expr& e) {
  return std::visit(overloaded{
                        [](const expr::Var&) { return false; },
                        [](const expr::App& a) { return containsLoc(a.fun) || containsLoc(a.arg); },
                        [](const expr::Send& s) { return containsLoc(s.target) || containsLoc(s.msg); },
                        [](const expr::Mutate& m) { return containsLoc(m.target); },
                        [](const expr::NewPassive&) { return false; },
                        [](const expr::NewActor&) { return false; },
                        [](const expr::Bestow& b) { return containsLoc(b.inner); },
                        [](const expr::Val& v) { return containsLoc(v.v); },
                    },
                    e.node().repr);
}

std::size_t size(const Expr& e) {
  return std::visit(overloaded{
                        [](const expr::Var&) -> std::size_t { return 1; },
                        [](const expr::App& a) { return 1 + size(a.fun) + size(a.arg); },
                        [](const expr::Send& s) {
                          return 1 + size(s.target) + (s.msg.isLambda() ? size(s.msg.lambda().body) : 0);
                        },
                        [](const expr::Mutate& m) { return 1 + size(m.target); },
                        [](const expr::NewPassive&) -> std::size_t { return 1; },
                        [](const expr::NewActor&) -> std::size_t { return 1; },
                        [](const expr::Bestow& b) { return 1 + size(b.inner); },
                        [](const expr::Val& v) -> std::size_t {
                          return v.v.isLambda() ? 1 + size(v.v.lambda().body) : 1;
                        },
                    },
                    e.node().repr);
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

namespace {

std::string freshName(const std::string& base, const std::set<std::string>& avoid) {
  for (unsigned i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!avoid.contains(candidate)) return candidate;
  }
}

}  // namespace

Value subst(const Value& body, const std::string& name, const Value& v) {
  if (!body.isLambda()) return body;
  const Lambda& lam = body.lambda();
  if (lam.param == name) return body;  // shadowed

  const auto vFree = freeVars(v);
  if (!vFree.contains(lam.param)) {
    return Value(Lambda{lam.param, lam.paramType, subst(lam.body, name, v)});
  }
  // The binder would capture a free variable of v: rename it first.
  std::set<std::string> avoid = freeVars(lam.body);
  avoid.insert(vFree.begin(), vFree.end());
  avoid.insert(name);
  std::string renamed = freshName(lam.param, avoid);
  // Values can't hold variables, so renaming is a separate walk.
  struct Renamer {
    const std::string& from;
    const std::string& to;
    Expr go(const Expr& e) const {
      return std::visit(overloaded{
                            [&](const expr::Var& x) { return x.name == from ? Expr::var(to) : e; },
                            [&](const expr::App& a) { return Expr::app(go(a.fun), go(a.arg)); },
                            [&](const expr::Send& s) { return Expr::send(go(s.target), go(s.msg)); },
                            [&](const expr::Mutate& m) { return Expr::mutate(go(m.target)); },
                            [&](const expr::NewPassive&) { return e; },
                            [&](const expr::NewActor&) { return e; },
                            [&](const expr::Bestow& b) { return Expr::bestow(go(b.inner)); },
                            [&](const expr::Val& v) { return Expr::val(go(v.v)); },
                        },
                        e.node().repr);
    }
    Value go(const Value& val) const {
      if (!val.isLambda()) return val;
      const Lambda& l = val.lambda();
      if (l.param == from) return val;
      return Value(Lambda{l.param, l.paramType, go(l.body)});
    }
  };
  Expr renamedBody = Renamer{lam.param, renamed}.go(lam.body);
  return Value(Lambda{renamed, lam.paramType, subst(renamedBody, name, v)});
}

Expr subst(const Expr& body, const std::string& name, const Value& v) {
  return std::visit(overloaded{
                        [&](const expr::Var& x) { return x.name == name ? Expr::val(v) : body; },
                        [&](const expr::App& a) {
                          return Expr::app(subst(a.fun, name, v), subst(a.arg, name, v));
                        },
                        [&](const expr::Send& s) {
                          return Expr::send(subst(s.target, name, v), subst(s.msg, name, v));
                        },
                        [&](const expr::Mutate& m) { return Expr::mutate(subst(m.target, name, v)); },
                        [&](const expr::NewPassive&) { return body; },
                        [&](const expr::NewActor&) { return body; },
                        [&](const expr::Bestow& b) { return Expr::bestow(subst(b.inner, name, v)); },
                        [&](const expr::Val& val) { return Expr::val(subst(val.v, name, v)); },
                    },
                    body.node().repr);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string typeSexpr(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Passive: return "p";
    case TypeKind::Actor: return "c";
    case TypeKind::Bestowed: return "(B p)";
    case TypeKind::Unit: return "Unit";
    case TypeKind::Arrow: return "(-> " + typeSexpr(t.dom()) + " " + typeSexpr(t.cod()) + ")";
  }
  return "?";
}

}  // namespace

std::string toSexpr(const Value& v) {
  return std::visit(overloaded{
                        [](const std::shared_ptr<const Lambda>& l) {
                          return "(fn " + l->param + " " + typeSexpr(l->paramType) + " " + toSexpr(l->body) + ")";
                        },
                        [](const UnitValue&) -> std::string { return "unit"; },
                        [](ActorId id) { return "#" + std::to_string(raw(id)); },
                        [](Loc l) { return "@" + std::to_string(raw(l)); },
                        [](const BestowedLoc& b) {
                          return "@" + std::to_string(raw(b.loc)) + "#" + std::to_string(raw(b.owner));
                        },
                    },
                    v.repr());
}

std::string toSexpr(const Expr& e) {
  return std::visit(overloaded{
                        [](const expr::Var& x) { return x.name; },
                        [](const expr::App& a) { return "(app " + toSexpr(a.fun) + " " + toSexpr(a.arg) + ")"; },
                        [](const expr::Send& s) { return "(send " + toSexpr(s.target) + " " + toSexpr(s.msg) + ")"; },
                        [](const expr::Mutate& m) { return "(mutate " + toSexpr(m.target) + ")"; },
                        [](const expr::NewPassive&) -> std::string { return "(new p)"; },
                        [](const expr::NewActor&) -> std::string { return "(new c)"; },
                        [](const expr::Bestow& b) { return "(bestow " + toSexpr(b.inner) + ")"; },
                        [](const expr::Val& v) { return toSexpr(v.v); },
                    },
                    e.node().repr);
}

namespace {

enum class Prec { Top, App, Atom };

std::string pretty(const Expr& e, Prec ctx);

std::string prettyValue(const Value& v, Prec ctx) {
  if (v.isLambda()) {
    const Lambda& l = v.lambda();
    std::string s = "\\" + l.param + ":" + l.paramType.str() + ". " + pretty(l.body, Prec::Top);
    return ctx == Prec::Top ? s : "(" + s + ")";
  }
  return std::visit(overloaded{
                        [](const std::shared_ptr<const Lambda>&) -> std::string { return ""; },
                        [](const UnitValue&) -> std::string { return "()"; },
                        [](ActorId id) { return "#" + std::to_string(raw(id)); },
                        [](Loc l) { return "@" + std::to_string(raw(l)); },
                        [](const BestowedLoc& b) {
                          return "@" + std::to_string(raw(b.loc)) + "#" + std::to_string(raw(b.owner));
                        },
                    },
                    v.repr());
}

std::string pretty(const Expr& e, Prec ctx) {
  auto wrap = [&](std::string s, Prec needs) { return ctx > needs ? "(" + s + ")" : s; };
  return std::visit(overloaded{
                        [](const expr::Var& x) { return x.name; },
                        [&](const expr::App& a) {
                          return wrap(pretty(a.fun, Prec::App) + " " + pretty(a.arg, Prec::Atom), Prec::App);
                        },
                        [&](const expr::Send& s) {
                          return wrap(pretty(s.target, Prec::App) + " ! " + prettyValue(s.msg, Prec::Atom), Prec::Top);
                        },
                        [&](const expr::Mutate& m) { return pretty(m.target, Prec::Atom) + ".mutate()"; },
                        [](const expr::NewPassive&) -> std::string { return "(new p)"; },
                        [](const expr::NewActor&) -> std::string { return "(new c)"; },
                        [&](const expr::Bestow& b) { return wrap("bestow " + pretty(b.inner, Prec::Atom), Prec::App); },
                        [&](const expr::Val& v) { return prettyValue(v.v, ctx); },
                    },
                    e.node().repr);
}

}  // namespace

std::string toPretty(const Expr& e) { return pretty(e, Prec::Top); }
std::string toPretty(const Value& v) { return prettyValue(v, Prec::Top); }

}  // namespace bestow::calculus
