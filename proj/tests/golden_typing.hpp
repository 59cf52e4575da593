#pragma once

// Hand-derived typing judgments. `expected` is either the type's printed
// form or "error[<rule>]" naming the rule whose premise fails. Every entry
// is checked in the empty environment.

#include <string>
#include <vector>

namespace bestow::testing {

struct GoldenTyping {
  const char* term;
  const char* expected;
};

inline const std::vector<GoldenTyping>& goldenTypings() {
  static const std::vector<GoldenTyping> cases = {
      // Well-typed values and leaves.
      {"unit", "Unit"},
      {"(new p)", "p"},
      {"(new c)", "c"},
      {"@0", "p"},
      {"#0", "c"},
      {"@0#1", "B(p)"},
      {"(fn x p x)", "p -> p"},
      {"(fn x p (mutate x))", "p -> Unit"},
      {"(fn x p (fn x c x))", "p -> c -> c"},
      {"(fn f (-> p Unit) (app f (new p)))", "(p -> Unit) -> Unit"},
      {"(fn b (B p) (send b (fn y p (mutate y))))", "B(p) -> Unit"},
      {"(fn a c (fn b (B p) (send a (fn x p (send b (fn y p (mutate y)))))))", "c -> B(p) -> Unit"},
      // Compound well-typed expressions.
      {"(app (fn x p (mutate x)) (new p))", "Unit"},
      {"(app (fn x Unit x) unit)", "Unit"},
      {"(app (fn f (-> p p) (app f (new p))) (fn z p z))", "p"},
      {"(mutate (new p))", "Unit"},
      {"(mutate (app (fn x p x) @1))", "Unit"},
      {"(bestow (new p))", "B(p)"},
      {"(send (new c) (fn x p (mutate x)))", "Unit"},
      {"(send (bestow (new p)) (fn x p (mutate x)))", "Unit"},
      {"(send (new c) (fn x p (bestow x)))", "Unit"},
      {"(send (new c) (fn x p (app (fn y p (mutate y)) x)))", "Unit"},
      {"(send (new c) (fn x p (send @0#1 (fn y p (mutate y)))))", "Unit"},
      {"(send (new c) (fn x p (send #2 (fn y p unit))))", "Unit"},
      {"(fn a c (send a (fn x p (mutate x))))", "c -> Unit"},
      // Ill-typed, one per failing premise.
      {"x", "error[e-var]"},
      {"(send (new c) (fn x p (app z unit)))", "error[e-var]"},
      {"(app unit unit)", "error[e-apply]"},
      {"(app (new p) unit)", "error[e-apply]"},
      {"(app (fn x p x) (new c))", "error[e-apply]"},
      {"(mutate (new c))", "error[e-mutate]"},
      {"(mutate unit)", "error[e-mutate]"},
      {"(mutate @0#1)", "error[e-mutate]"},
      {"(bestow (new c))", "error[e-bestow]"},
      {"(bestow (bestow (new p)))", "error[e-bestow]"},
      {"(send (new p) (fn x p unit))", "error[e-send]"},
      {"(send unit (fn x p unit))", "error[e-send]"},
      {"(send (new c) (fn x c unit))", "error[e-send]"},
      {"(send (new c) unit)", "error[e-send]"},
      {"(send (new c) (fn x p (mutate @3)))", "error[e-send]"},
      {"(fn o p (fn a c (send a (fn x p (mutate o)))))", "error[e-send]"},
      {"(fn u Unit (send (new c) (fn x p u)))", "error[e-send]"},
  };
  return cases;
}

/// "p -> Unit" for a type, "error[e-send]" for an error.
inline std::string verdict(const calculus::TypeResult& r) {
  return r.ok() ? r.type().str() : "error[" + r.error().ruleName + "]";
}

}  // namespace bestow::testing
