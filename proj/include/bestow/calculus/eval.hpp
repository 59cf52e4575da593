#pragma once

// Small-step dynamic semantics. One logical scheduler owns the heap;
// concurrency is modelled as a nondeterministic choice of which actor moves.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bestow/calculus/heap.hpp"
#include "bestow/calculus/syntax.hpp"

namespace bestow::calculus {

class EvalError : public std::runtime_error {
public:
  enum class Kind { Stuck, SendToNonActive, ChoiceNotEnabled };
  EvalError(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Evaluation contexts
// ---------------------------------------------------------------------------

namespace frame {
struct AppFun {  // • e
  Expr arg;
};
struct AppArg {  // v •
  Value fun;
};
struct SendTarget {  // • ! v
  Value msg;
};
struct MutateTarget {};  // •.mutate()
struct BestowInner {};   // bestow •
}  // namespace frame

using Frame = std::variant<frame::AppFun, frame::AppArg, frame::SendTarget, frame::MutateTarget, frame::BestowInner>;

/// Frames from the outside in; empty is the hole •.
struct Context {
  std::vector<Frame> frames;
  Expr plug(Expr e) const;
};

struct Decomposition {
  Context context;
  Expr redex;
};

struct AlreadyValue {};

/// Unique decomposition e = E[r]. Throws EvalError(Stuck) when e is neither a
/// value nor decomposable (a free variable sits in evaluation position).
std::variant<Decomposition, AlreadyValue> decompose(const Expr& e);

// ---------------------------------------------------------------------------
// Steps and traces
// ---------------------------------------------------------------------------

enum class Rule { ActorMsg, SendActor, SendBestowed, Apply, Mutate, Bestow, NewPassive, NewActor };

std::string_view ruleName(Rule r);

struct TraceEvent {
  std::size_t stepIndex = 0;
  ActorId actor{};
  Rule rule = Rule::Apply;
  /// Set for mutate, bestow and new-passive.
  std::optional<Loc> touchedLoc;
  /// Actor whose queue gained a message (sends) or the spawned actor.
  std::optional<ActorId> receiver;
  /// Sender of the message the actor is running; empty for boot code.
  std::optional<ActorId> origin;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

/// One JSON object per line: {"step","actor","rule","loc","receiver","origin"}.
std::string toJsonLine(const TraceEvent& ev);

struct ExprStep {
  Heap heap;
  Expr next;
  TraceEvent event;
};

/// id ⊢ <H, e> ↪ <H', e'>. Requires e to be a non-value and id ∈ H. The
/// returned heap does not yet contain e' as the actor's current expression.
ExprStep stepExpr(ActorId self, const Heap& h, const Expr& e);

struct SchedulerChoice {
  enum class Action { PopMessage, RunStep };
  ActorId actor{};
  Action action = Action::RunStep;

  static SchedulerChoice pop(ActorId id) { return {id, Action::PopMessage}; }
  static SchedulerChoice run(ActorId id) { return {id, Action::RunStep}; }

  std::string str() const;
  friend auto operator<=>(const SchedulerChoice&, const SchedulerChoice&) = default;
};

/// In-place H ↪ H'. Throws EvalError(ChoiceNotEnabled) if the choice is not
/// enabled, leaving h unchanged.
TraceEvent stepSystemInPlace(Heap& h, SchedulerChoice choice, std::size_t stepIndex = 0);

struct SystemStep {
  Heap heap;
  TraceEvent event;
};
SystemStep stepSystem(const Heap& h, SchedulerChoice choice, std::size_t stepIndex = 0);

/// Exactly the choices stepSystem accepts, ordered by actor id.
std::vector<SchedulerChoice> enabledChoices(const Heap& h);

/// Every actor idle on a value with an empty queue.
bool isTerminal(const Heap& h);

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

struct SeededSchedule {
  std::uint64_t seed = 0;
};
using ScriptedSchedule = std::vector<SchedulerChoice>;
using Schedule = std::variant<SeededSchedule, ScriptedSchedule>;

inline constexpr std::size_t kDefaultFuel = 100'000;

struct RunResult {
  enum class Status {
    Terminal,       ///< no choice enabled, every actor idle
    FuelExhausted,  ///< budget spent with choices still enabled
    Stuck,          ///< no choice enabled but some actor is not idle
    ScriptEnded,    ///< a scripted schedule ran out first
  };
  Heap heap;
  Trace trace;
  Status status = Status::Terminal;
  std::size_t steps() const { return trace.size(); }
};

std::string_view statusName(RunResult::Status s);

RunResult runToQuiescence(Heap h, const Schedule& schedule, std::size_t fuel = kDefaultFuel);

}  // namespace bestow::calculus
