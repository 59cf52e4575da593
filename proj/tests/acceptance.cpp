// Acceptance gate: one PASS/FAIL line per criterion, exit code 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "bestow/calculus/eval.hpp"
#include "bestow/calculus/explore.hpp"
#include "bestow/calculus/generate.hpp"
#include "bestow/calculus/sexpr.hpp"
#include "bestow/calculus/typecheck.hpp"
#include "bestow/calculus/wellformed.hpp"
#include "bestow/examples/list_iterator.hpp"
#include "bestow/runtime/runtime.hpp"
#include "bestow/surface/compile.hpp"
#include "golden_typing.hpp"
#include "scenarios.hpp"

namespace {

using namespace bestow;
using calculus::ActorId;
using calculus::Heap;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// --- 1 ---------------------------------------------------------------------

Outcome soundnessSweep() {
  constexpr int kPrograms = 1000;
  constexpr std::size_t kSize = 12;
  std::size_t maxStates = 0, totalStates = 0, truncated = 0, genFailures = 0;
  for (int seed = 0; seed < kPrograms; ++seed) {
    std::optional<calculus::Generated> g;
    try {
      g = calculus::generateWellTyped(static_cast<std::uint64_t>(seed), kSize);
    } catch (const calculus::GenerationFailed&) {
      ++genFailures;
      continue;
    }
    auto space = calculus::explore(calculus::initialHeap(g->expr));
    maxStates = std::max(maxStates, space.size());
    totalStates += space.size();
    if (space.truncated) ++truncated;
    auto fail = [&](const char* what) {
      return Outcome{false, std::string(what) + " counterexample for seed " + std::to_string(seed) + ": " +
                                calculus::toSexpr(g->expr)};
    };
    if (calculus::checkProgress(space)) return fail("progress");
    if (calculus::checkPreservation(space)) return fail("preservation");
    if (calculus::checkRaceFreedom(space)) return fail("race");
  }
  const bool pass = genFailures == 0 && truncated == 0;
  return {pass, std::to_string(kPrograms) + " programs, " + std::to_string(totalStates) + " states (max " +
                    std::to_string(maxStates) + "), truncated " + std::to_string(truncated) +
                    ", generation failures " + std::to_string(genFailures) + ", 0 counterexamples"};
}

// --- 2 ---------------------------------------------------------------------

bool onlyRule(const calculus::WfReport& r, const std::string& rule) {
  return !r.ok() && std::all_of(r.violations.begin(), r.violations.end(),
                                [&](const auto& v) { return v.ruleName == rule; });
}

Outcome negativeControls() {
  int detected = 0;
  std::string detail;
  auto note = [&](const char* name, bool ok) {
    detected += ok;
    detail += std::string(detail.empty() ? "" : ", ") + name + (ok ? " ok" : " MISSED");
  };
  note("shared location -> wf-heap", onlyRule(calculus::wfHeap(calculus::readHeap(testing::kSharedLocHeap)), "wf-heap"));
  note("foreign location -> wf-actor",
       onlyRule(calculus::wfHeap(calculus::readHeap(testing::kForeignLocHeap)), "wf-actor"));
  note("wrong bestower -> wf-actor",
       onlyRule(calculus::wfHeap(calculus::readHeap(testing::kWrongBestowerHeap)), "wf-actor"));
  auto race = calculus::findRace(calculus::readHeap(testing::kRacyHeap));
  note("racy heap -> RaceWitness", race && raw(race->location) == 2);
  return {detected == 4, std::to_string(detected) + "/4 (" + detail + ")"};
}

// --- 3 ---------------------------------------------------------------------

/// Runs the root to completion first, then lets the receiver drain its
/// queue. Returns the order in which the receiver ran mutate / new-passive.
std::vector<std::string> processingOrder(calculus::QueueOrder order) {
  surface::ElaborateOptions opts;
  opts.queueOrder = order;
  auto prog = surface::compile(testing::kTwoMessages, opts);
  if (!prog.ok()) return {"compile error"};
  Heap h = prog.heap;
  std::vector<std::string> out;
  for (std::size_t step = 0; step < 1000; ++step) {
    auto choices = calculus::enabledChoices(h);
    if (choices.empty()) break;
    // Lowest actor first: the root (#0) finishes sending before #1 moves.
    auto ev = calculus::stepSystemInPlace(h, choices.front(), step);
    if (raw(ev.actor) == 1 && (ev.rule == calculus::Rule::Mutate || ev.rule == calculus::Rule::NewPassive)) {
      out.emplace_back(calculus::ruleName(ev.rule));
    }
  }
  return out;
}

Outcome queueFidelity() {
  auto fifo = processingOrder(calculus::QueueOrder::Fifo);
  auto lifo = processingOrder(calculus::QueueOrder::Lifo);
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
  };
  const bool pass = fifo == std::vector<std::string>{"mutate", "new-passive"} &&
                    lifo == std::vector<std::string>{"new-passive", "mutate"};
  return {pass, "fifo [" + join(fifo) + "], lifo [" + join(lifo) + "]"};
}

// --- 4 ---------------------------------------------------------------------

Outcome atomicSerializability() {
  std::string detail;
  bool pass = true;
  for (bool batched : {true, false}) {
    auto prog = surface::compile(testing::adjacentReads(batched));
    if (!prog.ok()) return {false, "scenario does not compile"};
    auto space = calculus::explore(prog.heap);
    auto bad = calculus::findInterleavedSegment(space, ActorId{0}, 0, 2);
    const bool ok = !space.truncated && (batched ? !bad.has_value() : bad.has_value());
    pass = pass && ok;
    detail += std::string(batched ? "batched: " : "; unbatched: ") + std::to_string(space.size()) + " states, " +
              (bad ? "interleaving found" : "reads adjacent in every interleaving");
  }
  return {pass, detail};
}

// --- 5 ---------------------------------------------------------------------

Outcome complexity() {
  using namespace examples;
  bool pass = true;
  std::string detail;
  for (std::size_t m : {10u, 100u, 1000u}) {
    ListRunOptions opts;
    opts.elements = m;
    opts.mode = Mode::Get;
    auto get = runListIterator(opts);
    opts.mode = Mode::BestowedIterator;
    auto it = runListIterator(opts);
    const bool ok = get.hops == expectedGetHops(m) && it.hops == m && get.valuesInOrder() && it.valuesInOrder();
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("M=") + std::to_string(m) + " get " +
              std::to_string(get.hops) + "/" + std::to_string(expectedGetHops(m)) + ", iterator " +
              std::to_string(it.hops) + "/" + std::to_string(m);
  }
  return {pass, detail};
}

// --- 6 ---------------------------------------------------------------------

struct Counter {
  std::int64_t total = 0;
  runtime::ConfinementProbe probe;
  std::int64_t add(std::int64_t k) {
    probe.touch();
    total += k;
    return total;
  }
};

struct OwnerState {
  Counter counter;
};

Outcome confinement() {
  constexpr int kSeeds = 20, kThreads = 8, kOps = 1000;
  std::uint64_t offOwner = 0;
  int exactRuns = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    runtime::Runtime rt;
    auto owner = rt.spawn(OwnerState{});
    auto ref = owner
                   .perform([id = owner.id()](OwnerState& s) {
                     s.counter.probe.setOwner(id);
                     return runtime::bestow(s.counter);
                   })
                   .get();
    std::vector<std::int64_t> sent(kThreads, 0);
    std::vector<std::thread> threads;
    for (int t = 0; t < kThreads; ++t) {
      threads.emplace_back([&, t] {
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed) * 1000 + t);
        std::uniform_int_distribution<int> amount(1, 9), shape(0, 3);
        std::vector<runtime::Future<std::int64_t>> pending;
        for (int op = 0; op < kOps;) {
          if (shape(rng) == 0 && op + 2 <= kOps) {
            const std::int64_t a = amount(rng), b = amount(rng);
            sent[t] += a + b;
            using Op = std::function<std::int64_t(Counter&)>;
            runtime::atomicBatch(ref, std::vector<Op>{[a](Counter& c) { return c.add(a); },
                                                      [b](Counter& c) { return c.add(b); }})
                .get();
            op += 2;
          } else {
            const std::int64_t a = amount(rng);
            sent[t] += a;
            pending.push_back(runtime::sendBestowed(ref, [a](Counter& c) { return c.add(a); }));
            ++op;
          }
        }
        for (auto& f : pending) f.get();
      });
    }
    for (auto& th : threads) th.join();
    std::int64_t expected = 0;
    for (auto s : sent) expected += s;
    auto [total, off, on] = owner
                                .perform([](OwnerState& s) {
                                  return std::tuple{s.counter.total, s.counter.probe.offOwner(),
                                                    s.counter.probe.onOwner()};
                                })
                                .get();
    offOwner += off;
    if (total == expected && on == static_cast<std::uint64_t>(kThreads * kOps)) ++exactRuns;
  }
  return {offOwner == 0 && exactRuns == kSeeds, std::to_string(kSeeds) + " seeds x " + std::to_string(kThreads) +
                                                    " threads x " + std::to_string(kOps) + " ops: " +
                                                    std::to_string(offOwner) + " off-owner accesses, " +
                                                    std::to_string(exactRuns) + "/" + std::to_string(kSeeds) +
                                                    " exact totals"};
}

// --- 7 ---------------------------------------------------------------------

bool deferralOrder(std::string& detail) {
  runtime::Runtime rt;
  auto a = rt.spawn(std::vector<std::string>{});
  auto q = runtime::overrideQueue(a).get();

  std::thread foreign([&] {
    for (int i = 0; i < 10; ++i) {
      a.perform([i](std::vector<std::string>& log) { log.push_back("f" + std::to_string(i)); });
    }
  });
  foreign.join();  // all ten admitted to the mailbox while the window is open

  const auto n = q.submit([](std::vector<std::string>& log) {
                    log.push_back("p0");
                    return log.size();
                  }).get();
  q.submit([n](std::vector<std::string>& log) { log.push_back(n == 1 ? "p1" : "p1?"); }).get();
  q.resume().get();
  auto log = a.perform([](std::vector<std::string>& l) { return l; }).get();

  std::vector<std::string> want{"p0", "p1"};
  for (int i = 0; i < 10; ++i) want.push_back("f" + std::to_string(i));
  // Deferral completeness: every admitted message ran exactly once.
  const bool complete = a.cell()->admitted() == a.processed() + 1;  // the read above is still finishing
  detail = "deferred order " + std::string(log == want ? "ok" : "WRONG");
  return log == want && (complete || a.cell()->inFlight() <= 1);
}

using Op = std::function<std::int64_t(std::int64_t&)>;

std::vector<Op> randomOps(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 24), kind(0, 3), k(-9, 9);
  std::vector<Op> ops;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    const std::int64_t c = k(rng);
    switch (kind(rng)) {
      case 0: ops.push_back([c](std::int64_t& s) { return s += c; }); break;
      case 1: ops.push_back([c](std::int64_t& s) { return s = s * c % 1000003; }); break;
      case 2: ops.push_back([c](std::int64_t& s) { return s = c - s; }); break;
      default: ops.push_back([](std::int64_t& s) { return s; }); break;
    }
  }
  return ops;
}

Outcome overrideProtocol() {
  std::string detail;
  const bool ordered = deferralOrder(detail);

  int equal = 0;
  constexpr int kLists = 100;
  std::mt19937_64 rng(7);
  runtime::Runtime rt;
  for (int i = 0; i < kLists; ++i) {
    auto ops = randomOps(rng);
    const std::int64_t start = static_cast<std::int64_t>(rng() % 100);
    auto batchActor = rt.spawn(start);
    auto overrideActor = rt.spawn(start);

    auto batched = runtime::atomicBatch(batchActor, ops).get();

    auto q = runtime::overrideQueue(overrideActor).get();
    std::vector<runtime::Future<std::int64_t>> futures;
    for (const auto& op : ops) futures.push_back(q.submit(op));
    q.resume().get();
    std::vector<std::int64_t> overridden;
    for (auto& f : futures) overridden.push_back(f.get());

    const auto finalA = batchActor.perform([](std::int64_t& s) { return s; }).get();
    const auto finalB = overrideActor.perform([](std::int64_t& s) { return s; }).get();
    equal += batched == overridden && finalA == finalB;
  }
  detail += ", batch/override equivalence " + std::to_string(equal) + "/" + std::to_string(kLists);
  return {ordered && equal == kLists, detail};
}

// --- 8 ---------------------------------------------------------------------

Outcome goldenTyping() {
  const auto& cases = testing::goldenTypings();
  std::size_t match = 0;
  std::string first;
  for (const auto& c : cases) {
    const std::string got = testing::verdict(calculus::typecheck({}, calculus::readExpr(c.term)));
    if (got == c.expected) {
      ++match;
    } else if (first.empty()) {
      first = std::string(" first mismatch: ") + c.term + " gave " + got;
    }
  }
  return {cases.size() >= 30 && match == cases.size(),
          std::to_string(match) + "/" + std::to_string(cases.size()) + " judgments match" + first};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"soundness sweep", soundnessSweep},
      {"negative controls", negativeControls},
      {"queue-semantics fidelity", queueFidelity},
      {"atomic serializability", atomicSerializability},
      {"iteration complexity", complexity},
      {"runtime confinement", confinement},
      {"override protocol", overrideProtocol},
      {"golden typechecker suite", goldenTyping},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %s: %s (%s) [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
