#pragma once

// Abstract syntax of the actor calculus: types, values and expressions.
//
// All three are immutable value types backed by shared nodes, so copying an
// expression is O(1) and subterms can be shared freely between heaps.

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>

namespace bestow::calculus {

/// Identifier of an actor. Dynamic only.
enum class ActorId : std::uint32_t {};
/// Location of a passive object. Dynamic only.
enum class Loc : std::uint32_t {};

constexpr std::uint32_t raw(ActorId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t raw(Loc l) { return static_cast<std::uint32_t>(l); }

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind { Passive, Actor, Bestowed, Arrow, Unit };

class Type {
public:
  static Type passive();
  static Type actor();
  /// B(p). The grammar only admits the passive type under B.
  static Type bestowed();
  static Type unit();
  static Type arrow(Type dom, Type cod);

  TypeKind kind() const { return kind_; }
  /// Only valid for arrows.
  const Type& dom() const;
  const Type& cod() const;

  /// Active types are exactly actor types and B(p).
  bool isActive() const { return kind_ == TypeKind::Actor || kind_ == TypeKind::Bestowed; }
  bool isPassive() const { return kind_ == TypeKind::Passive; }

  std::string str() const;

  friend bool operator==(const Type& a, const Type& b);

private:
  struct ArrowParts;
  Type(TypeKind k, std::shared_ptr<const ArrowParts> parts) : kind_(k), arrow_(std::move(parts)) {}

  TypeKind kind_ = TypeKind::Unit;
  std::shared_ptr<const ArrowParts> arrow_;
};

struct Type::ArrowParts {
  Type dom;
  Type cod;
};

// ---------------------------------------------------------------------------
// Expressions and values
// ---------------------------------------------------------------------------

class Expr;
struct ExprNode;

struct Lambda;
struct UnitValue {
  friend bool operator==(const UnitValue&, const UnitValue&) = default;
};
struct BestowedLoc {
  Loc loc;
  ActorId owner;
  friend bool operator==(const BestowedLoc&, const BestowedLoc&) = default;
};

class Value {
public:
  using Repr = std::variant<std::shared_ptr<const Lambda>, UnitValue, ActorId, Loc, BestowedLoc>;

  Value() : repr_(UnitValue{}) {}
  Value(UnitValue u) : repr_(u) {}
  Value(ActorId id) : repr_(id) {}
  Value(Loc l) : repr_(l) {}
  Value(BestowedLoc b) : repr_(b) {}
  Value(Lambda lam);

  static Value unit() { return Value(UnitValue{}); }

  bool isLambda() const { return std::holds_alternative<std::shared_ptr<const Lambda>>(repr_); }
  bool isUnit() const { return std::holds_alternative<UnitValue>(repr_); }
  bool isActorId() const { return std::holds_alternative<ActorId>(repr_); }
  bool isLoc() const { return std::holds_alternative<Loc>(repr_); }
  bool isBestowedLoc() const { return std::holds_alternative<BestowedLoc>(repr_); }

  const Lambda& lambda() const { return *std::get<std::shared_ptr<const Lambda>>(repr_); }
  ActorId actorId() const { return std::get<ActorId>(repr_); }
  Loc loc() const { return std::get<Loc>(repr_); }
  BestowedLoc bestowedLoc() const { return std::get<BestowedLoc>(repr_); }

  const Repr& repr() const { return repr_; }

  friend bool operator==(const Value& a, const Value& b);

private:
  Repr repr_;
};

class Expr {
public:
  static Expr var(std::string name);
  static Expr app(Expr fun, Expr arg);
  static Expr send(Expr target, Value msg);
  static Expr mutate(Expr target);
  static Expr newPassive();
  static Expr newActor();
  static Expr bestow(Expr inner);
  static Expr val(Value v);

  // Convenience constructors for values in expression position.
  static Expr unit() { return val(Value::unit()); }
  static Expr lambda(std::string param, Type paramType, Expr body);

  const ExprNode& node() const { return *node_; }
  bool isValue() const;
  /// Only valid when isValue().
  const Value& value() const;

  friend bool operator==(const Expr& a, const Expr& b);

private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct Lambda {
  std::string param;
  Type paramType;
  Expr body;
  friend bool operator==(const Lambda& a, const Lambda& b) = default;
};

namespace expr {
struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};
struct App {
  Expr fun;
  Expr arg;
  friend bool operator==(const App&, const App&) = default;
};
/// `e ! v`: the message is already a value.
struct Send {
  Expr target;
  Value msg;
  friend bool operator==(const Send&, const Send&) = default;
};
struct Mutate {
  Expr target;
  friend bool operator==(const Mutate&, const Mutate&) = default;
};
struct NewPassive {
  friend bool operator==(const NewPassive&, const NewPassive&) = default;
};
struct NewActor {
  friend bool operator==(const NewActor&, const NewActor&) = default;
};
struct Bestow {
  Expr inner;
  friend bool operator==(const Bestow&, const Bestow&) = default;
};
struct Val {
  Value v;
  friend bool operator==(const Val&, const Val&) = default;
};
}  // namespace expr

struct ExprNode {
  std::variant<expr::Var, expr::App, expr::Send, expr::Mutate, expr::NewPassive, expr::NewActor,
               expr::Bestow, expr::Val>
      repr;
};

template <class Alt>
const Alt* as(const Expr& e) {
  return std::get_if<Alt>(&e.node().repr);
}

// ---------------------------------------------------------------------------
// Structural helpers
// ---------------------------------------------------------------------------

std::set<std::string> freeVars(const Expr& e);
std::set<std::string> freeVars(const Value& v);

/// True iff a bare location (not a bestowed one) occurs anywhere in e.
bool containsLoc(const Expr& e);
bool containsLoc(const Value& v);

/// Capture-avoiding substitution of v for the free occurrences of name.
Expr subst(const Expr& body, const std::string& name, const Value& v);
Value subst(const Value& body, const std::string& name, const Value& v);

/// Number of AST nodes; lambdas count their body.
std::size_t size(const Expr& e);

// Canonical one-line text form, e.g. `(app (fn x p (mutate x)) (new p))`.
// The grammar is in "Text formats" in README.md.
std::string toSexpr(const Expr& e);
std::string toSexpr(const Value& v);

/// Human-readable rendering, e.g. `(\x:p. x.mutate()) (new p)`.
std::string toPretty(const Expr& e);
std::string toPretty(const Value& v);

}  // namespace bestow::calculus
