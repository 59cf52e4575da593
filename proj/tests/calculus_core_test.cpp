#include <doctest.h>

#include "bestow/calculus/heap.hpp"
#include "bestow/calculus/sexpr.hpp"
#include "bestow/calculus/syntax.hpp"

using namespace bestow::calculus;

TEST_CASE("types print and compare structurally") {
  CHECK(Type::bestowed().str() == "B(p)");
  CHECK(Type::arrow(Type::arrow(Type::passive(), Type::unit()), Type::actor()).str() == "(p -> Unit) -> c");
  CHECK(Type::arrow(Type::passive(), Type::arrow(Type::actor(), Type::unit())).str() == "p -> c -> Unit");
  CHECK(Type::arrow(Type::passive(), Type::unit()) == Type::arrow(Type::passive(), Type::unit()));
  CHECK_FALSE(Type::arrow(Type::passive(), Type::unit()) == Type::arrow(Type::actor(), Type::unit()));
  CHECK(Type::actor().isActive());
  CHECK(Type::bestowed().isActive());
  CHECK_FALSE(Type::passive().isActive());
  CHECK_FALSE(Type::unit().isActive());
}

TEST_CASE("s-expression text round-trips") {
  for (const char* s : {"unit", "#3", "@2", "@2#1", "(new p)", "(new c)", "(mutate x)", "(bestow (new p))",
                        "(app (fn x p (mutate x)) (new p))", "(send #0 (fn x p (send @1#0 (fn y p (mutate y)))))",
                        "(fn f (-> p (-> c Unit)) (fn b (B p) unit))"}) {
    CAPTURE(s);
    CHECK(toSexpr(readExpr(s)) == s);
  }
  CHECK(readType("(-> (B p) Unit)") == Type::arrow(Type::bestowed(), Type::unit()));
}

TEST_CASE("reader rejects malformed input") {
  CHECK_THROWS_AS(readExpr("(app x)"), SexprError);
  CHECK_THROWS_AS(readExpr("(new q)"), SexprError);
  CHECK_THROWS_AS(readExpr("(mutate x"), SexprError);
  CHECK_THROWS_AS(readExpr("x y"), SexprError);
  CHECK_THROWS_AS(readExpr("(send #0 x)"), SexprError);
  CHECK_THROWS_AS(readType("(B c)"), SexprError);
}

TEST_CASE("heaps round-trip and counters skip used names") {
  const char* text =
      "(heap (actor #0 (this @0) (local @0 @2) (queue (msg #1 (fn x p (mutate x)))) (expr unit))"
      " (actor #1 (this @1) (local @1) (queue) (expr (mutate @1)) (origin #0)))";
  Heap h = readHeap(text);
  CHECK(toSexpr(h) == text);
  CHECK(h.nextLoc() == 3);
  CHECK(h.nextId() == 2);
  CHECK(h.at(ActorId{0}).queue.size() == 1);
  CHECK(h.at(ActorId{0}).queue.front().sender == ActorId{1});
}

TEST_CASE("free variables") {
  CHECK(freeVars(readExpr("(app (fn x p (mutate x)) y)")) == std::set<std::string>{"y"});
  CHECK(freeVars(readExpr("(send a (fn x p (app b x)))")) == std::set<std::string>{"a", "b"});
  CHECK(freeVars(readExpr("(fn x p (fn y c x))")).empty());
}

TEST_CASE("containsLoc sees bare locations only") {
  CHECK(containsLoc(readExpr("(mutate @3)")));
  CHECK(containsLoc(readExpr("(send #0 (fn x p (mutate @3)))")));
  CHECK_FALSE(containsLoc(readExpr("(send @3#0 (fn x p (mutate x)))")));
  CHECK_FALSE(containsLoc(readExpr("(new p)")));
}

TEST_CASE("substitution") {
  SUBCASE("replaces free occurrences") {
    CHECK(toSexpr(subst(readExpr("(app x (mutate x))"), "x", Loc{4})) == "(app @4 (mutate @4))");
  }
  SUBCASE("stops at a binder of the same name") {
    CHECK(toSexpr(subst(readExpr("(app (fn x p x) x)"), "x", Loc{1})) == "(app (fn x p x) @1)");
  }
  SUBCASE("enters message bodies") {
    CHECK(toSexpr(subst(readExpr("(send a (fn y p (send a (fn z p unit))))"), "a", ActorId{2})) ==
          "(send #2 (fn y p (send #2 (fn z p unit))))");
  }
  SUBCASE("avoids capture") {
    // Substituting a lambda mentioning free y under a binder y renames the binder.
    Value v = Lambda{"z", Type::passive(), Expr::var("y")};
    Expr out = subst(readExpr("(fn y c (app x unit))"), "x", v);
    const Lambda& outer = out.value().lambda();
    CHECK(outer.param != "y");
    CHECK(freeVars(out) == std::set<std::string>{"y"});
  }
}

TEST_CASE("size counts nodes including message bodies") {
  CHECK(size(readExpr("unit")) == 1);
  CHECK(size(readExpr("(new p)")) == 1);
  CHECK(size(readExpr("(mutate (new p))")) == 2);
  CHECK(size(readExpr("(fn x p (mutate x))")) == 3);
  CHECK(size(readExpr("(app (fn x p (mutate x)) (new p))")) == 5);
  CHECK(size(readExpr("(send (new c) (fn x p (mutate x)))")) == 4);
}

TEST_CASE("pretty printing") {
  CHECK(toPretty(readExpr("(app (fn x p (mutate x)) (new p))")) == "(\\x:p. x.mutate()) (new p)");
  CHECK(toPretty(readExpr("(send a (fn x p unit))")) == "a ! (\\x:p. ())");
}

TEST_CASE("spawn installs a fresh actor") {
  Heap h;
  const ActorId a = h.spawn(Expr::unit());
  const ActorId b = h.spawn(Expr::unit());
  CHECK(a != b);
  CHECK(h.at(a).thisLoc != h.at(b).thisLoc);
  CHECK(h.at(a).localHeap == std::set<Loc>{h.at(a).thisLoc});
  CHECK(h.at(b).queue.empty());
}
