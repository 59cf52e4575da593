#include "bestow/calculus/typecheck.hpp"

namespace bestow::calculus {

TypeEnv TypeEnv::extended(const std::string& name, Type t) const {
  TypeEnv out = *this;
  out.bindings_.insert_or_assign(name, std::move(t));
  return out;
}

const Type* TypeEnv::find(const std::string& name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

TypeEnv restrictActive(const TypeEnv& env) {
  TypeEnv out;
  for (const auto& [name, t] : env.bindings()) {
    if (t.isActive()) out = out.extended(name, t);
  }
  return out;
}

std::string TypeResult::str() const {
  if (ok()) return type().str();
  return "error[" + error().ruleName + "]: " + error().message;
}

namespace {

TypeError fail(std::string rule, const Expr& at, std::string msg) {
  return TypeError{std::move(rule), at, std::move(msg)};
}

TypeResult checkSend(const TypeEnv& env, const Expr& whole, const expr::Send& s) {
  TypeResult target = typecheck(env, s.target);
  if (!target) return target;
  if (!target.type().isActive()) {
    return fail("e-send", whole, "receiver has non-active type " + target.type().str());
  }
  if (!s.msg.isLambda()) return fail("e-send", whole, "message is not a lambda");

  const Lambda& lam = s.msg.lambda();
  if (!lam.paramType.isPassive()) {
    return fail("e-send", whole, "message parameter has type " + lam.paramType.str() + ", expected p");
  }
  TypeResult body = typecheck(restrictActive(env).extended(lam.param, Type::passive()), lam.body);
  if (!body) {
    // Distinguish a body that is wrong on its own from one that only uses a
    // non-active variable of the enclosing scope.
    if (typecheck(env.extended(lam.param, Type::passive()), lam.body)) {
      std::string leaked;
      for (const auto& name : freeVars(lam.body)) {
        const Type* t = env.find(name);
        if (name != lam.param && t && !t->isActive()) {
          leaked = name;
          break;
        }
      }
      return fail("e-send", whole, "message body captures non-active variable '" + leaked + "'");
    }
    return body;
  }
  if (containsLoc(lam.body)) return fail("e-send", whole, "message body contains a passive location");
  return Type::unit();
}

}  // namespace

TypeResult typecheck(const TypeEnv& env, const Value& v) {
  if (v.isLambda()) {
    const Lambda& lam = v.lambda();
    TypeResult body = typecheck(env.extended(lam.param, lam.paramType), lam.body);
    if (!body) return body;
    return Type::arrow(lam.paramType, body.type());
  }
  if (v.isUnit()) return Type::unit();
  if (v.isLoc()) return Type::passive();
  if (v.isActorId()) return Type::actor();
  return Type::bestowed();
}

TypeResult typecheck(const TypeEnv& env, const Expr& e) {
  if (auto* x = as<expr::Var>(e)) {
    if (const Type* t = env.find(x->name)) return *t;
    return fail("e-var", e, "unbound variable '" + x->name + "'");
  }
  if (auto* a = as<expr::App>(e)) {
    TypeResult fun = typecheck(env, a->fun);
    if (!fun) return fun;
    TypeResult arg = typecheck(env, a->arg);
    if (!arg) return arg;
    if (fun.type().kind() != TypeKind::Arrow) {
      return fail("e-apply", e, "applying a value of type " + fun.type().str());
    }
    if (!(fun.type().dom() == arg.type())) {
      return fail("e-apply", e, "argument has type " + arg.type().str() + ", expected " + fun.type().dom().str());
    }
    return fun.type().cod();
  }
  if (auto* s = as<expr::Send>(e)) return checkSend(env, e, *s);
  if (auto* m = as<expr::Mutate>(e)) {
    TypeResult target = typecheck(env, m->target);
    if (!target) return target;
    if (!target.type().isPassive()) return fail("e-mutate", e, "mutating a value of type " + target.type().str());
    return Type::unit();
  }
  if (as<expr::NewPassive>(e)) return Type::passive();
  if (as<expr::NewActor>(e)) return Type::actor();
  if (auto* b = as<expr::Bestow>(e)) {
    TypeResult inner = typecheck(env, b->inner);
    if (!inner) return inner;
    if (!inner.type().isPassive()) return fail("e-bestow", e, "bestowing a value of type " + inner.type().str());
    return Type::bestowed();
  }
  return typecheck(env, e.value());
}

}  // namespace bestow::calculus
