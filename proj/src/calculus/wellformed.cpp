#include "bestow/calculus/wellformed.hpp"

#include "bestow/calculus/typecheck.hpp"

namespace bestow::calculus {

void WfReport::merge(WfReport other) {
  for (auto& v : other.violations) violations.push_back(std::move(v));
}

bool WfReport::has(std::string_view rule) const {
  for (const auto& v : violations) {
    if (v.ruleName == rule) return true;
  }
  return false;
}

std::string WfReport::str() const {
  if (ok()) return "ok";
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "\n";
    s += v.ruleName + " [";
    for (std::size_t i = 0; i < v.actors.size(); ++i) s += (i ? " #" : "#") + std::to_string(raw(v.actors[i]));
    s += "]: " + v.detail;
  }
  return s;
}

namespace {

struct DynamicValues {
  std::vector<Loc> locs;
  std::vector<ActorId> ids;
  std::vector<BestowedLoc> bestowed;
};

void collect(const Expr& e, DynamicValues& out);

void collect(const Value& v, DynamicValues& out) {
  if (v.isLoc()) out.locs.push_back(v.loc());
  else if (v.isActorId()) out.ids.push_back(v.actorId());
  else if (v.isBestowedLoc()) out.bestowed.push_back(v.bestowedLoc());
  else if (v.isLambda()) collect(v.lambda().body, out);
}

void collect(const Expr& e, DynamicValues& out) {
  if (auto* a = as<expr::App>(e)) {
    collect(a->fun, out);
    collect(a->arg, out);
  } else if (auto* s = as<expr::Send>(e)) {
    collect(s->target, out);
    collect(s->msg, out);
  } else if (auto* m = as<expr::Mutate>(e)) {
    collect(m->target, out);
  } else if (auto* b = as<expr::Bestow>(e)) {
    collect(b->inner, out);
  } else if (e.isValue()) {
    collect(e.value(), out);
  }
}

/// The value restrictions shared by an actor's current expression and each
/// of its queued message bodies.
void checkValues(const Heap& h, ActorId owner, const DynamicValues& vals, const std::string& rule,
                 const std::string& where, WfReport& report) {
  const Actor& a = h.at(owner);
  for (Loc l : vals.locs) {
    if (!a.localHeap.contains(l)) {
      report.violations.push_back(
          {rule, {owner}, where + " mentions @" + std::to_string(raw(l)) + " outside the local heap"});
    }
  }
  for (ActorId id : vals.ids) {
    if (!h.contains(id)) {
      report.violations.push_back({rule, {owner}, where + " mentions unknown actor #" + std::to_string(raw(id))});
    }
  }
  for (const BestowedLoc& b : vals.bestowed) {
    const std::string name = "@" + std::to_string(raw(b.loc)) + "#" + std::to_string(raw(b.owner));
    if (!h.contains(b.owner)) {
      report.violations.push_back({rule, {owner}, where + " mentions " + name + " of an unknown bestower"});
    } else if (!h.at(b.owner).localHeap.contains(b.loc)) {
      report.violations.push_back({rule, {owner}, where + " mentions " + name + " not owned by its bestower"});
    }
  }
}

}  // namespace

WfReport wfQueue(const Heap& h, ActorId owner) {
  WfReport report;
  const Actor& a = h.at(owner);
  std::size_t index = 0;
  for (const Message& m : a.queue) {
    const std::string where = "message " + std::to_string(index++);
    if (!m.lambda.isLambda() || !m.lambda.lambda().paramType.isPassive()) {
      report.violations.push_back({"wf-queue-message", {owner}, where + " is not a lambda over p"});
      continue;
    }
    TypeResult t = typecheck(TypeEnv{}, m.lambda);
    if (!t) report.violations.push_back({"wf-queue-message", {owner}, where + " is ill-typed: " + t.str()});
    DynamicValues vals;
    collect(m.lambda, vals);
    checkValues(h, owner, vals, "wf-queue-message", where, report);
  }
  return report;
}

WfReport wfActor(const Heap& h, ActorId id) {
  WfReport report;
  const Actor& a = h.at(id);
  if (!a.localHeap.contains(a.thisLoc)) {
    report.violations.push_back({"wf-actor", {id}, "this is not in the local heap"});
  }
  report.merge(wfQueue(h, id));
  TypeResult t = typecheck(TypeEnv{}, a.current);
  if (!t) report.violations.push_back({"wf-actor", {id}, "current expression is ill-typed: " + t.str()});
  DynamicValues vals;
  collect(a.current, vals);
  checkValues(h, id, vals, "wf-actor", "current expression", report);
  return report;
}

WfReport wfHeap(const Heap& h) {
  WfReport report;
  for (const auto& [id, actor] : h.actors()) report.merge(wfActor(h, id));
  for (auto i = h.actors().begin(); i != h.actors().end(); ++i) {
    for (auto j = std::next(i); j != h.actors().end(); ++j) {
      for (Loc l : i->second.localHeap) {
        if (j->second.localHeap.contains(l)) {
          report.violations.push_back(
              {"wf-heap", {i->first, j->first}, "local heaps share @" + std::to_string(raw(l))});
        }
      }
    }
  }
  return report;
}

}  // namespace bestow::calculus
