#include <doctest.h>

#include <nlohmann/json.hpp>

#include "bestow/calculus/eval.hpp"
#include "bestow/calculus/sexpr.hpp"
#include "bestow/calculus/wellformed.hpp"

using namespace bestow::calculus;

namespace {
Heap one(const char* expr) { return initialHeap(readExpr(expr)); }
const ActorId kRoot{0};

TraceEvent runOnce(Heap& h) { return stepSystemInPlace(h, SchedulerChoice::run(kRoot)); }
}  // namespace

TEST_CASE("decompose finds the leftmost-innermost redex") {
  auto d = decompose(readExpr("(app (app (fn x p x) (new p)) (mutate (new p)))"));
  auto& dec = std::get<Decomposition>(d);
  CHECK(toSexpr(dec.redex) == "(new p)");
  CHECK(toSexpr(dec.context.plug(Expr::val(Loc{9}))) == "(app (app (fn x p x) @9) (mutate (new p)))");

  CHECK(std::holds_alternative<AlreadyValue>(decompose(readExpr("(fn x p x)"))));
  CHECK(toSexpr(std::get<Decomposition>(decompose(readExpr("(bestow (mutate @0))"))).redex) == "(mutate @0)");
  CHECK(toSexpr(std::get<Decomposition>(decompose(readExpr("(send (new c) (fn x p unit))"))).redex) == "(new c)");
  CHECK_THROWS_AS(decompose(readExpr("(mutate x)")), EvalError);
}

TEST_CASE("apply substitutes the argument") {
  Heap h = one("(app (fn x p (mutate x)) @0)");
  auto ev = runOnce(h);
  CHECK(ev.rule == Rule::Apply);
  CHECK(toSexpr(h.at(kRoot).current) == "(mutate @0)");
}

TEST_CASE("new-passive extends the local heap") {
  Heap h = one("(new p)");
  auto ev = runOnce(h);
  CHECK(ev.rule == Rule::NewPassive);
  REQUIRE(ev.touchedLoc);
  CHECK(h.at(kRoot).localHeap.contains(*ev.touchedLoc));
  CHECK(h.at(kRoot).current.value().loc() == *ev.touchedLoc);
  CHECK(wfHeap(h).ok());
}

TEST_CASE("new-actor spawns an idle actor") {
  Heap h = one("(new c)");
  auto ev = runOnce(h);
  CHECK(ev.rule == Rule::NewActor);
  REQUIRE(ev.receiver);
  const Actor& child = h.at(*ev.receiver);
  CHECK(child.current.isValue());
  CHECK(child.queue.empty());
  CHECK(child.localHeap == std::set<Loc>{child.thisLoc});
  CHECK(h.at(kRoot).current.value().actorId() == *ev.receiver);
}

TEST_CASE("mutate and bestow touch the location") {
  Heap h = one("(bestow (app (fn x p x) @0))");
  runOnce(h);
  auto ev = runOnce(h);
  CHECK(ev.rule == Rule::Bestow);
  CHECK(toSexpr(h.at(kRoot).current) == "@0#0");

  Heap m = one("(mutate @0)");
  auto ev2 = runOnce(m);
  CHECK(ev2.rule == Rule::Mutate);
  CHECK(ev2.touchedLoc == Loc{0});
  CHECK(toSexpr(m.at(kRoot).current) == "unit");
}

TEST_CASE("send to an actor enqueues the lambda") {
  Heap h = readHeap("(heap (actor #0 (this @0) (local @0) (queue) (expr (send #1 (fn x p (mutate x)))))"
                    " (actor #1 (this @1) (local @1) (queue) (expr unit)))");
  auto ev = runOnce(h);
  CHECK(ev.rule == Rule::SendActor);
  CHECK(ev.receiver == ActorId{1});
  REQUIRE(h.at(ActorId{1}).queue.size() == 1);
  CHECK(toSexpr(h.at(ActorId{1}).queue.front().lambda) == "(fn x p (mutate x))");
  CHECK(h.at(ActorId{1}).queue.front().sender == kRoot);
  CHECK(toSexpr(h.at(kRoot).current) == "unit");
}

TEST_CASE("send to a bestowed value wraps the message for the owner") {
  Heap h = readHeap("(heap (actor #0 (this @0) (local @0 @2) (queue) (expr unit))"
                    " (actor #1 (this @1) (local @1) (queue) (expr (send @2#0 (fn y p (mutate y))))))");
  auto ev = stepSystemInPlace(h, SchedulerChoice::run(ActorId{1}));
  CHECK(ev.rule == Rule::SendBestowed);
  CHECK(ev.receiver == kRoot);
  REQUIRE(h.at(kRoot).queue.size() == 1);
  CHECK(toSexpr(h.at(kRoot).queue.front().lambda) == "(fn _ p (app (fn y p (mutate y)) @2))");
  CHECK(wfHeap(h).ok());

  // The owner runs it on its own object, not on its this.
  stepSystemInPlace(h, SchedulerChoice::pop(kRoot));
  Trace t;
  while (!h.at(kRoot).current.isValue()) t.push_back(runOnce(h));
  CHECK(t.back().rule == Rule::Mutate);
  CHECK(t.back().touchedLoc == Loc{2});
  CHECK(t.back().origin == ActorId{1});
}

TEST_CASE("actor-msg applies the head message to this") {
  Heap h = readHeap("(heap (actor #0 (this @0) (local @0) (queue (msg #0 (fn x p (mutate x)))) (expr unit)))");
  CHECK(enabledChoices(h) == std::vector{SchedulerChoice::pop(kRoot)});
  auto ev = stepSystemInPlace(h, SchedulerChoice::pop(kRoot));
  CHECK(ev.rule == Rule::ActorMsg);
  CHECK(toSexpr(h.at(kRoot).current) == "(app (fn x p (mutate x)) @0)");
  CHECK(h.at(kRoot).queue.empty());
}

TEST_CASE("queue order") {
  const char* text =
      "(heap (actor #0 (this @0) (local @0) (queue) (expr (app (fn u Unit (send #1 (fn b p (new p))))"
      " (send #1 (fn a p (mutate a))))))"
      " (actor #1 (this @1) (local @1) (queue) (expr unit)))";
  auto queued = [&](QueueOrder order) {
    Heap h = readHeap(text, order);
    while (!h.at(kRoot).current.isValue()) runOnce(h);
    std::vector<std::string> params;
    for (const auto& m : h.at(ActorId{1}).queue) params.push_back(m.lambda.lambda().param);
    return params;
  };
  CHECK(queued(QueueOrder::Fifo) == std::vector<std::string>{"a", "b"});
  CHECK(queued(QueueOrder::Lifo) == std::vector<std::string>{"b", "a"});
}

TEST_CASE("a step that is not enabled is rejected without changing the heap") {
  Heap h = one("unit");
  Heap before = h;
  CHECK_THROWS_AS(stepSystemInPlace(h, SchedulerChoice::run(kRoot)), EvalError);
  CHECK_THROWS_AS(stepSystemInPlace(h, SchedulerChoice::pop(kRoot)), EvalError);
  CHECK(h == before);
}

TEST_CASE("stuck redexes are not enabled") {
  CHECK(enabledChoices(one("(app unit unit)")).empty());
  CHECK(enabledChoices(one("(mutate #0)")).empty());
  CHECK_FALSE(isTerminal(one("(app unit unit)")));
  CHECK(isTerminal(one("unit")));
}

TEST_CASE("enabledChoices agrees with stepSystem") {
  Heap h = readHeap("(heap (actor #0 (this @0) (local @0) (queue (msg #1 (fn x p unit))) (expr unit))"
                    " (actor #1 (this @1) (local @1) (queue) (expr (mutate @1)))"
                    " (actor #2 (this @2) (local @2) (queue) (expr (app unit unit))))");
  auto enabled = enabledChoices(h);
  CHECK(enabled == std::vector{SchedulerChoice::pop(ActorId{0}), SchedulerChoice::run(ActorId{1})});
  for (auto id : {0u, 1u, 2u}) {
    for (auto c : {SchedulerChoice::pop(ActorId{id}), SchedulerChoice::run(ActorId{id})}) {
      const bool listed = std::find(enabled.begin(), enabled.end(), c) != enabled.end();
      bool accepted = true;
      try {
        stepSystem(h, c);
      } catch (const EvalError&) {
        accepted = false;
      }
      CAPTURE(c.str());
      CHECK(listed == accepted);
    }
  }
}

TEST_CASE("runToQuiescence") {
  const Expr prog = readExpr(
      "(app (fn a c (app (fn u Unit (send a (fn y p (new p)))) (send a (fn x p (mutate x))))) (new c))");
  SUBCASE("same seed, same trace") {
    auto r1 = runToQuiescence(initialHeap(prog), SeededSchedule{42});
    auto r2 = runToQuiescence(initialHeap(prog), SeededSchedule{42});
    CHECK(r1.trace == r2.trace);
    CHECK(r1.heap == r2.heap);
    CHECK(r1.status == RunResult::Status::Terminal);
  }
  SUBCASE("fuel bounds the run") {
    auto r = runToQuiescence(initialHeap(prog), SeededSchedule{1}, 3);
    CHECK(r.status == RunResult::Status::FuelExhausted);
    CHECK(r.steps() == 3);
  }
  SUBCASE("scripted schedules") {
    auto r = runToQuiescence(initialHeap(prog), ScriptedSchedule{SchedulerChoice::run(kRoot)});
    CHECK(r.status == RunResult::Status::ScriptEnded);
    CHECK(r.steps() == 1);
    CHECK(r.trace[0].rule == Rule::NewActor);
  }
  SUBCASE("stuck programs") {
    auto r = runToQuiescence(one("(app unit unit)"), SeededSchedule{0});
    CHECK(r.status == RunResult::Status::Stuck);
  }
}

TEST_CASE("trace lines are JSON with documented fields") {
  TraceEvent ev;
  ev.stepIndex = 7;
  ev.actor = ActorId{2};
  ev.rule = Rule::Mutate;
  ev.touchedLoc = Loc{5};
  auto j = nlohmann::json::parse(toJsonLine(ev));
  CHECK(j["step"] == 7);
  CHECK(j["actor"] == 2);
  CHECK(j["rule"] == "mutate");
  CHECK(j["loc"] == 5);
  CHECK(j["receiver"].is_null());
  CHECK(j["origin"].is_null());
}
