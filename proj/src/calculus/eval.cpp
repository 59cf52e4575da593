#include "bestow/calculus/eval.hpp"

#include <random>

#include <nlohmann/json.hpp>

namespace bestow::calculus {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

[[noreturn]] void stuck(const Expr& e, const std::string& why) {
  throw EvalError(EvalError::Kind::Stuck, "stuck at " + toSexpr(e) + ": " + why);
}

}  // namespace

Expr Context::plug(Expr e) const {
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    e = std::visit(overloaded{
                       [&](const frame::AppFun& f) { return Expr::app(e, f.arg); },
                       [&](const frame::AppArg& f) { return Expr::app(Expr::val(f.fun), e); },
                       [&](const frame::SendTarget& f) { return Expr::send(e, f.msg); },
                       [&](const frame::MutateTarget&) { return Expr::mutate(e); },
                       [&](const frame::BestowInner&) { return Expr::bestow(e); },
                   },
                   *it);
  }
  return e;
}

std::variant<Decomposition, AlreadyValue> decompose(const Expr& e) {
  if (e.isValue()) return AlreadyValue{};
  Context ctx;
  Expr cur = e;
  for (;;) {
    if (auto* a = as<expr::App>(cur)) {
      if (!a->fun.isValue()) {
        ctx.frames.push_back(frame::AppFun{a->arg});
        cur = a->fun;
        continue;
      }
      if (!a->arg.isValue()) {
        ctx.frames.push_back(frame::AppArg{a->fun.value()});
        cur = a->arg;
        continue;
      }
      return Decomposition{std::move(ctx), cur};
    }
    if (auto* s = as<expr::Send>(cur)) {
      if (!s->target.isValue()) {
        ctx.frames.push_back(frame::SendTarget{s->msg});
        cur = s->target;
        continue;
      }
      return Decomposition{std::move(ctx), cur};
    }
    if (auto* m = as<expr::Mutate>(cur)) {
      if (!m->target.isValue()) {
        ctx.frames.push_back(frame::MutateTarget{});
        cur = m->target;
        continue;
      }
      return Decomposition{std::move(ctx), cur};
    }
    if (auto* b = as<expr::Bestow>(cur)) {
      if (!b->inner.isValue()) {
        ctx.frames.push_back(frame::BestowInner{});
        cur = b->inner;
        continue;
      }
      return Decomposition{std::move(ctx), cur};
    }
    if (as<expr::NewPassive>(cur) || as<expr::NewActor>(cur)) return Decomposition{std::move(ctx), cur};
    // A variable in evaluation position: only reachable from open terms.
    stuck(cur, "free variable");
  }
}

std::string_view ruleName(Rule r) {
  switch (r) {
    case Rule::ActorMsg: return "actor-msg";
    case Rule::SendActor: return "send-actor";
    case Rule::SendBestowed: return "send-bestowed";
    case Rule::Apply: return "apply";
    case Rule::Mutate: return "mutate";
    case Rule::Bestow: return "bestow";
    case Rule::NewPassive: return "new-passive";
    case Rule::NewActor: return "new-actor";
  }
  return "?";
}

std::string toJsonLine(const TraceEvent& ev) {
  nlohmann::json j;
  j["step"] = ev.stepIndex;
  j["actor"] = raw(ev.actor);
  j["rule"] = ruleName(ev.rule);
  j["loc"] = ev.touchedLoc ? nlohmann::json(raw(*ev.touchedLoc)) : nlohmann::json(nullptr);
  j["receiver"] = ev.receiver ? nlohmann::json(raw(*ev.receiver)) : nlohmann::json(nullptr);
  j["origin"] = ev.origin ? nlohmann::json(raw(*ev.origin)) : nlohmann::json(nullptr);
  return j.dump();
}

std::string SchedulerChoice::str() const {
  return (action == Action::PopMessage ? "pop #" : "run #") + std::to_string(raw(actor));
}

namespace {

/// Can `redex` step in actor `self` of h? Mirrors stepRedex without effects.
bool redexEnabled(const Heap& h, const Expr& redex) {
  if (auto* a = as<expr::App>(redex)) return a->fun.value().isLambda();
  if (auto* s = as<expr::Send>(redex)) {
    if (!s->msg.isLambda()) return false;
    const Value& t = s->target.value();
    if (t.isActorId()) return h.contains(t.actorId());
    if (t.isBestowedLoc()) return h.contains(t.bestowedLoc().owner);
    return false;
  }
  if (auto* m = as<expr::Mutate>(redex)) return m->target.value().isLoc();
  if (auto* b = as<expr::Bestow>(redex)) return b->inner.value().isLoc();
  return as<expr::NewPassive>(redex) || as<expr::NewActor>(redex);
}

void enqueue(Heap& h, ActorId receiver, Message msg) {
  Actor& r = h.at(receiver);
  if (h.queueOrder() == QueueOrder::Lifo) {
    r.queue.push_front(std::move(msg));
  } else {
    r.queue.push_back(std::move(msg));
  }
}

/// Performs the redex in place on h. Returns the expression that replaces it.
Expr stepRedex(ActorId self, Heap& h, const Expr& redex, TraceEvent& ev) {
  ev.actor = self;
  ev.origin = h.at(self).origin;

  if (auto* a = as<expr::App>(redex)) {
    const Value& fun = a->fun.value();
    if (!fun.isLambda()) stuck(redex, "applying a non-function");
    ev.rule = Rule::Apply;
    return subst(fun.lambda().body, fun.lambda().param, a->arg.value());
  }
  if (auto* s = as<expr::Send>(redex)) {
    const Value& target = s->target.value();
    if (!s->msg.isLambda()) stuck(redex, "message is not a lambda");
    if (target.isActorId()) {
      if (!h.contains(target.actorId())) stuck(redex, "send to unknown actor");
      ev.rule = Rule::SendActor;
      ev.receiver = target.actorId();
      enqueue(h, target.actorId(), Message{s->msg, self});
      return Expr::unit();
    }
    if (target.isBestowedLoc()) {
      const BestowedLoc b = target.bestowedLoc();
      if (!h.contains(b.owner)) stuck(redex, "send to bestowed value of unknown actor");
      ev.rule = Rule::SendBestowed;
      ev.receiver = b.owner;
      // λ_:p. v ι: the wrapper ignores the owner's this.
      Value wrapper(Lambda{"_", Type::passive(), Expr::app(Expr::val(s->msg), Expr::val(b.loc))});
      enqueue(h, b.owner, Message{std::move(wrapper), self});
      return Expr::unit();
    }
    throw EvalError(EvalError::Kind::SendToNonActive, "send to non-active value " + toSexpr(target));
  }
  if (auto* m = as<expr::Mutate>(redex)) {
    const Value& target = m->target.value();
    if (!target.isLoc()) stuck(redex, "mutating a non-location");
    ev.rule = Rule::Mutate;
    ev.touchedLoc = target.loc();
    return Expr::unit();
  }
  if (auto* b = as<expr::Bestow>(redex)) {
    const Value& inner = b->inner.value();
    if (!inner.isLoc()) stuck(redex, "bestowing a non-location");
    ev.rule = Rule::Bestow;
    ev.touchedLoc = inner.loc();
    return Expr::val(BestowedLoc{inner.loc(), self});
  }
  if (as<expr::NewPassive>(redex)) {
    const Loc fresh = h.freshLoc();
    h.at(self).localHeap.insert(fresh);
    ev.rule = Rule::NewPassive;
    ev.touchedLoc = fresh;
    return Expr::val(fresh);
  }
  if (as<expr::NewActor>(redex)) {
    const ActorId fresh = h.spawn(Expr::unit());
    ev.rule = Rule::NewActor;
    ev.receiver = fresh;
    return Expr::val(fresh);
  }
  stuck(redex, "not a redex");
}

}  // namespace

ExprStep stepExpr(ActorId self, const Heap& h, const Expr& e) {
  if (!h.contains(self)) throw std::out_of_range("no actor #" + std::to_string(raw(self)));
  auto d = decompose(e);
  if (std::holds_alternative<AlreadyValue>(d)) stuck(e, "already a value");
  auto& [ctx, redex] = std::get<Decomposition>(d);
  ExprStep out{h, e, {}};
  Expr reduced = stepRedex(self, out.heap, redex, out.event);
  out.next = ctx.plug(std::move(reduced));
  return out;
}

TraceEvent stepSystemInPlace(Heap& h, SchedulerChoice choice, std::size_t stepIndex) {
  if (!h.contains(choice.actor)) {
    throw EvalError(EvalError::Kind::ChoiceNotEnabled, "no actor for choice " + choice.str());
  }
  Actor& actor = h.at(choice.actor);
  TraceEvent ev;
  ev.stepIndex = stepIndex;
  ev.actor = choice.actor;

  if (choice.action == SchedulerChoice::Action::PopMessage) {
    if (!actor.current.isValue() || actor.queue.empty()) {
      throw EvalError(EvalError::Kind::ChoiceNotEnabled, "choice not enabled: " + choice.str());
    }
    Message msg = std::move(actor.queue.front());
    actor.queue.pop_front();
    actor.current = Expr::app(Expr::val(std::move(msg.lambda)), Expr::val(actor.thisLoc));
    actor.origin = msg.sender;
    ev.rule = Rule::ActorMsg;
    ev.origin = msg.sender;
    return ev;
  }

  if (actor.current.isValue()) {
    throw EvalError(EvalError::Kind::ChoiceNotEnabled, "choice not enabled: " + choice.str());
  }
  auto d = decompose(actor.current);
  auto& [ctx, redex] = std::get<Decomposition>(d);
  if (!redexEnabled(h, redex)) stuck(redex, "no rule applies");
  Expr reduced = stepRedex(choice.actor, h, redex, ev);
  // stepRedex may have inserted actors; re-lookup.
  h.at(choice.actor).current = ctx.plug(std::move(reduced));
  return ev;
}

SystemStep stepSystem(const Heap& h, SchedulerChoice choice, std::size_t stepIndex) {
  SystemStep out{h, {}};
  out.event = stepSystemInPlace(out.heap, choice, stepIndex);
  return out;
}

std::vector<SchedulerChoice> enabledChoices(const Heap& h) {
  std::vector<SchedulerChoice> out;
  for (const auto& [id, actor] : h.actors()) {
    if (actor.current.isValue()) {
      if (!actor.queue.empty()) out.push_back(SchedulerChoice::pop(id));
      continue;
    }
    try {
      auto d = decompose(actor.current);
      if (redexEnabled(h, std::get<Decomposition>(d).redex)) out.push_back(SchedulerChoice::run(id));
    } catch (const EvalError&) {
    }
  }
  return out;
}

bool isTerminal(const Heap& h) {
  for (const auto& [id, actor] : h.actors()) {
    if (!actor.current.isValue() || !actor.queue.empty()) return false;
  }
  return true;
}

std::string_view statusName(RunResult::Status s) {
  switch (s) {
    case RunResult::Status::Terminal: return "terminal";
    case RunResult::Status::FuelExhausted: return "fuel-exhausted";
    case RunResult::Status::Stuck: return "stuck";
    case RunResult::Status::ScriptEnded: return "script-ended";
  }
  return "?";
}

RunResult runToQuiescence(Heap h, const Schedule& schedule, std::size_t fuel) {
  RunResult out{std::move(h), {}, RunResult::Status::Terminal};
  std::mt19937_64 rng(std::holds_alternative<SeededSchedule>(schedule) ? std::get<SeededSchedule>(schedule).seed : 0);
  const auto* script = std::get_if<ScriptedSchedule>(&schedule);
  std::size_t cursor = 0;

  for (;;) {
    auto enabled = enabledChoices(out.heap);
    if (enabled.empty()) {
      out.status = isTerminal(out.heap) ? RunResult::Status::Terminal : RunResult::Status::Stuck;
      return out;
    }
    if (out.trace.size() >= fuel) {
      out.status = RunResult::Status::FuelExhausted;
      return out;
    }
    SchedulerChoice choice;
    if (script) {
      if (cursor == script->size()) {
        out.status = RunResult::Status::ScriptEnded;
        return out;
      }
      choice = (*script)[cursor++];
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, enabled.size() - 1);
      choice = enabled[pick(rng)];
    }
    out.trace.push_back(stepSystemInPlace(out.heap, choice, out.trace.size()));
  }
}

}  // namespace bestow::calculus
