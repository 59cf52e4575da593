#pragma once

#include <map>
#include <string>
#include <variant>

#include "bestow/calculus/syntax.hpp"

namespace bestow::calculus {

/// Γ: at most one binding per name; extension replaces.
class TypeEnv {
public:
  TypeEnv() = default;
  TypeEnv(std::initializer_list<std::pair<const std::string, Type>> init) : bindings_(init) {}

  TypeEnv extended(const std::string& name, Type t) const;
  const Type* find(const std::string& name) const;

  const std::map<std::string, Type>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }

  friend bool operator==(const TypeEnv&, const TypeEnv&) = default;

private:
  std::map<std::string, Type> bindings_;
};

/// Γ_α: keeps only bindings of active type.
TypeEnv restrictActive(const TypeEnv& env);

struct TypeError {
  /// e-var, e-apply, e-new-passive, e-new-actor, e-mutate, e-bestow, e-send,
  /// e-fn, e-unit, e-loc, e-id or e-bestowed.
  std::string ruleName;
  Expr offendingExpr;
  std::string message;
};

class TypeResult {
public:
  TypeResult(Type t) : repr_(std::move(t)) {}
  TypeResult(TypeError e) : repr_(std::move(e)) {}

  bool ok() const { return std::holds_alternative<Type>(repr_); }
  explicit operator bool() const { return ok(); }
  const Type& type() const { return std::get<Type>(repr_); }
  const TypeError& error() const { return std::get<TypeError>(repr_); }

  /// `Unit`, `p -> Unit`, or `error[e-send]: ...`.
  std::string str() const;

private:
  std::variant<Type, TypeError> repr_;
};

/// Syntax-directed: exactly one rule applies per expression form. The
/// first failing premise (left to right, innermost) is reported.
TypeResult typecheck(const TypeEnv& env, const Expr& e);
TypeResult typecheck(const TypeEnv& env, const Value& v);

}  // namespace bestow::calculus
