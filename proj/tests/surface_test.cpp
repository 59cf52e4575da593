#include <doctest.h>

#include "bestow/calculus/eval.hpp"
#include "bestow/calculus/explore.hpp"
#include "bestow/calculus/wellformed.hpp"
#include "bestow/surface/compile.hpp"
#include "bestow/surface/parser.hpp"
#include "scenarios.hpp"

using namespace bestow;
using namespace bestow::surface;

namespace {
SurfaceProgram parsed(std::string_view src) {
  auto r = parse(src);
  if (auto* d = std::get_if<std::vector<Diagnostic>>(&r)) FAIL(d->front().str());
  return std::get<SurfaceProgram>(r);
}

std::vector<Diagnostic> rejected(std::string_view src) {
  auto r = parse(src);
  REQUIRE(std::holds_alternative<std::vector<Diagnostic>>(r));
  return std::get<std::vector<Diagnostic>>(r);
}

std::string core(std::string_view src) {
  auto c = compile(src);
  REQUIRE(c.diagnostics.empty());
  return calculus::toSexpr(c.expr);
}
}  // namespace

TEST_CASE("parse: bindings and atomic blocks") {
  auto p = parsed("val a = new c");
  REQUIRE(p.stmts.size() == 1);
  CHECK(std::holds_alternative<st::Val>(p.stmts[0].node));

  auto q = parsed("val a = new c\natomic x <- a { x ! \\n:p. n.mutate(); x ! \\m:p. () }");
  REQUIRE(q.stmts.size() == 2);
  auto* at = std::get_if<st::Atomic>(&q.stmts[1].node);
  REQUIRE(at);
  CHECK(at->name == "x");
  CHECK(at->body.size() == 2);
}

TEST_CASE("parse: lambda syntax") {
  parsed("val f = \\x:p. x.mutate()");
  parsed("val f = λx:p. x.mutate()");
  parsed("val f = \\g:p -> Unit. g (new p)");
  parsed("val f = \\b:B(p). b ! \\y:p. y.mutate()");
}

TEST_CASE("parse: diagnostics point at the problem") {
  SUBCASE("unbalanced braces") {
    auto d = rejected("val a = new c\na ! \\x:p. {\n  x.mutate()\n");
    CHECK(d[0].pos.line == 2);
  }
  SUBCASE("dynamic literals") {
    auto d = rejected("val a = #3");
    CHECK(d[0].pos.line == 1);
    CHECK(d[0].pos.column == 9);
    rejected("@2.mutate()");
  }
  SUBCASE("unbound names") {
    auto d = rejected("val a = new c\nb ! \\x:p. ()");
    CHECK(d[0].pos.line == 2);
    CHECK(d[0].message.find("'b'") != std::string::npos);
  }
  SUBCASE("use before binding") { rejected("val a = a"); }
  SUBCASE("missing separator") { rejected("val a = new c val b = new c"); }
  SUBCASE("stray character") { rejected("val a = new c %"); }
}

TEST_CASE("print re-parses to the same tree") {
  for (const char* src : {
           "val a = new c",
           "val a = new c\na ! \\x:p. x.mutate()",
           "val o = new p\nval r = bestow o\nval b = new c\nb ! \\x:p. r ! \\y:p. y.mutate()",
           "val a = new c\natomic x <- a { x ! \\n:p. n.mutate(); x ! \\n:p. n.mutate() }",
           "val a = new c\natomic x <- a { }",
           "val f = \\g:p -> Unit. g (new p)\nf (\\o:p. o.mutate())",
           "val a = new c\n{ a ! \\x:p. (); a ! \\y:p. { val z = new p; z.mutate() } }",
           "(\\x:p. x) (new p).mutate()",
           "val m = \\x:p. x.mutate()\nval a = new c\na ! m",
       }) {
    CAPTURE(src);
    auto p = parsed(src);
    const std::string printed = print(p);
    CAPTURE(printed);
    CHECK(sameTree(parsed(printed), p));
  }
}

TEST_CASE("elaborate: bindings become applications") {
  CHECK(core("val a = new c") == "(app (fn a c unit) (new c))");
  CHECK(core("val o = new p\no.mutate()") == "(app (fn o p (mutate o)) (new p))");
}

TEST_CASE("desugar: atomic blocks become one send") {
  const std::string out = core("val a = new c\natomic x <- a { x ! \\n:p. n.mutate(); x ! \\m:p. () }");
  CHECK(out ==
        "(app (fn a c (send a (fn this p (app (fn $0 Unit (app (fn m p unit) this)) (app (fn n p (mutate n)) this)))))"
        " (new c))");
  CHECK(core("val a = new c\natomic x <- a { }") == "(app (fn a c (send a (fn this p unit))) (new c))");
}

TEST_CASE("desugar: this is renamed away from user names") {
  const std::string out = core("val this = new c\natomic x <- this { x ! \\n:p. n.mutate() }");
  CHECK(out.find("(fn this_1 p") != std::string::npos);
}

TEST_CASE("desugar: errors") {
  auto kind = [](std::string_view src) -> std::optional<std::string> {
    auto c = compile(src);
    if (c.diagnostics.empty()) return std::nullopt;
    return c.diagnostics[0].message;
  };
  CHECK(kind("val a = new c\natomic x <- a { atomic y <- a { } }")->find("nested") != std::string::npos);
  CHECK(kind("val o = new p\natomic x <- o { }")->find("active") != std::string::npos);
  CHECK(kind("val a = new c\nval u = ()\na ! u")->find("lambda") != std::string::npos);
  CHECK(kind("val a = new c\natomic x <- a { val y = x }")->find("receiver") != std::string::npos);

  std::string big = "val a = new c\natomic x <- a {";
  for (int i = 0; i < 65; ++i) big += " x ! \\n:p. ();";
  big += " }";
  CHECK(kind(big)->find("cap") != std::string::npos);

  SUBCASE("the cap is configurable") {
    ElaborateOptions opts;
    opts.batchCap = 2;
    auto c = compile("val a = new c\natomic x <- a { x ! \\n:p. (); x ! \\n:p. (); x ! \\n:p. () }", opts);
    CHECK_FALSE(c.diagnostics.empty());
  }
}

TEST_CASE("desugar: a k-statement batch enqueues exactly one message") {
  auto c = compile(
      "val a = new c\natomic x <- a { x ! \\n:p. n.mutate(); x ! \\n:p. n.mutate(); x ! \\n:p. n.mutate() }");
  REQUIRE(c.ok());
  auto r = calculus::runToQuiescence(c.heap, calculus::SeededSchedule{3});
  int sends = 0, mutates = 0;
  for (const auto& ev : r.trace) {
    sends += ev.rule == calculus::Rule::SendActor;
    mutates += ev.rule == calculus::Rule::Mutate;
  }
  CHECK(sends == 1);
  CHECK(mutates == 3);
}

TEST_CASE("named messages are inlined unless shadowed") {
  CHECK(core("val m = \\x:p. x.mutate()\nval a = new c\na ! m").find("(send a (fn x p (mutate x)))") !=
        std::string::npos);
  auto c = compile("val b = new c\nval m = \\x:p. b ! \\y:p. ()\nval b = new c\nb ! m");
  CHECK_FALSE(c.diagnostics.empty());
}

TEST_CASE("type errors surface after elaboration") {
  auto c = compile("val o = new p\nval a = new c\na ! \\x:p. o.mutate()");
  REQUIRE(c.diagnostics.empty());
  REQUIRE(c.type);
  CHECK_FALSE(c.type->ok());
  CHECK(c.type->error().ruleName == "e-send");
}

TEST_CASE("end to end: adjacent reads typecheck and explore clean") {
  for (bool batched : {true, false}) {
    auto c = compile(testing::adjacentReads(batched));
    REQUIRE(c.ok());
    CHECK(calculus::wfHeap(c.heap).ok());
    auto s = calculus::explore(c.heap);
    CHECK_FALSE(s.truncated);
    CHECK_FALSE(calculus::checkProgress(s));
    CHECK_FALSE(calculus::checkPreservation(s));
    CHECK_FALSE(calculus::checkRaceFreedom(s));
  }
}

TEST_CASE("end to end: iterator skeleton runs to quiescence") {
  // The list actor owns a node and hands a bestowed reference to a client,
  // which reads through it.
  const char* src = R"(
val list = new c
val client = new c
list ! \self:p. {
  val node = new p
  val it = bestow node
  client ! \c:p. { it ! \n:p. n.mutate(); it ! \n:p. n.mutate() }
}
)";
  auto c = compile(src);
  REQUIRE(c.ok());
  auto r = calculus::runToQuiescence(c.heap, calculus::SeededSchedule{11});
  CHECK(r.status == calculus::RunResult::Status::Terminal);
  int relayed = 0;
  for (const auto& ev : r.trace) relayed += ev.rule == calculus::Rule::SendBestowed;
  CHECK(relayed == 2);
}

TEST_CASE("typechecking programs give well-formed initial heaps") {
  for (const char* src : {"val a = new c", "val o = new p\nval r = bestow o\nr ! \\y:p. y.mutate()"}) {
    auto c = compile(src);
    REQUIRE(c.ok());
    CHECK(calculus::wfHeap(c.heap).ok());
  }
}
