#include "bestow/calculus/explore.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>

namespace bestow::calculus {

namespace {

class Renamer {
public:
  std::map<std::uint32_t, std::uint32_t> ids;
  std::map<std::uint32_t, std::uint32_t> locs;
  std::deque<ActorId> pending;

  void name(ActorId a) {
    if (ids.contains(raw(a))) return;
    const auto next = static_cast<std::uint32_t>(ids.size());
    ids.emplace(raw(a), next);
    pending.push_back(a);
  }
  void name(Loc l) {
    if (locs.contains(raw(l))) return;
    const auto next = static_cast<std::uint32_t>(locs.size());
    locs.emplace(raw(l), next);
  }

  void visit(const Value& v) {
    if (v.isLoc()) name(v.loc());
    else if (v.isActorId()) name(v.actorId());
    else if (v.isBestowedLoc()) {
      name(v.bestowedLoc().loc);
      name(v.bestowedLoc().owner);
    } else if (v.isLambda()) visit(v.lambda().body);
  }

  void visit(const Expr& e) {
    if (auto* a = as<expr::App>(e)) {
      visit(a->fun);
      visit(a->arg);
    } else if (auto* s = as<expr::Send>(e)) {
      visit(s->target);
      visit(s->msg);
    } else if (auto* m = as<expr::Mutate>(e)) {
      visit(m->target);
    } else if (auto* b = as<expr::Bestow>(e)) {
      visit(b->inner);
    } else if (e.isValue()) {
      visit(e.value());
    }
  }

  void visit(const Actor& a) {
    name(a.thisLoc);
    visit(a.current);
    if (a.origin) name(*a.origin);
    for (const Message& m : a.queue) {
      name(m.sender);
      visit(m.lambda);
    }
  }

  ActorId apply(ActorId a) const { return ActorId{ids.at(raw(a))}; }
  Loc apply(Loc l) const { return Loc{locs.at(raw(l))}; }

  Value apply(const Value& v) const {
    if (v.isLoc()) return apply(v.loc());
    if (v.isActorId()) return apply(v.actorId());
    if (v.isBestowedLoc()) return BestowedLoc{apply(v.bestowedLoc().loc), apply(v.bestowedLoc().owner)};
    if (v.isLambda()) {
      const Lambda& l = v.lambda();
      return Value(Lambda{l.param, l.paramType, apply(l.body)});
    }
    return v;
  }

  Expr apply(const Expr& e) const {
    if (auto* a = as<expr::App>(e)) return Expr::app(apply(a->fun), apply(a->arg));
    if (auto* s = as<expr::Send>(e)) return Expr::send(apply(s->target), apply(s->msg));
    if (auto* m = as<expr::Mutate>(e)) return Expr::mutate(apply(m->target));
    if (auto* b = as<expr::Bestow>(e)) return Expr::bestow(apply(b->inner));
    if (e.isValue()) return Expr::val(apply(e.value()));
    return e;
  }
};

}  // namespace

Canonical canonicalize(const Heap& h) {
  Renamer r;
  // Oldest actor first; actors unreachable from it fall back to creation order.
  for (const auto& [id, actor] : h.actors()) {
    r.name(id);
    while (!r.pending.empty()) {
      const ActorId next = r.pending.front();
      r.pending.pop_front();
      if (h.contains(next)) r.visit(h.at(next));
    }
  }
  // Locations nobody refers to are interchangeable; number them per actor.
  std::vector<std::pair<std::uint32_t, ActorId>> order;
  for (const auto& [id, actor] : h.actors()) order.emplace_back(r.ids.at(raw(id)), id);
  std::sort(order.begin(), order.end());
  for (const auto& [newId, oldId] : order) {
    for (Loc l : h.at(oldId).localHeap) r.name(l);
  }

  Canonical out{Heap(h.queueOrder()), r.ids, r.locs};
  for (const auto& [id, actor] : h.actors()) {
    Actor renamed{r.apply(actor.thisLoc), {}, {}, r.apply(actor.current), std::nullopt};
    for (Loc l : actor.localHeap) renamed.localHeap.insert(r.apply(l));
    for (const Message& m : actor.queue) renamed.queue.push_back(Message{r.apply(m.lambda), r.apply(m.sender)});
    if (actor.origin) renamed.origin = r.apply(*actor.origin);
    out.heap.actors().emplace(r.apply(id), std::move(renamed));
  }
  out.heap.setCounters(static_cast<std::uint32_t>(r.locs.size()), static_cast<std::uint32_t>(r.ids.size()));
  return out;
}

std::vector<SchedulerChoice> StateSpace::pathTo(StateId s) const {
  std::vector<SchedulerChoice> path;
  while (parentEdge[s]) {
    const Edge& e = edges[*parentEdge[s]];
    path.push_back(e.choice);
    s = e.from;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<SchedulerChoice> concretePath(const Heap& start, const std::vector<SchedulerChoice>& path) {
  std::vector<SchedulerChoice> out;
  Heap h = start;
  for (const SchedulerChoice& c : path) {
    ActorId concrete = c.actor;
    for (const auto& [from, to] : canonicalize(h).actorRenaming) {
      if (to == raw(c.actor)) concrete = ActorId{from};
    }
    out.push_back(SchedulerChoice{concrete, c.action});
    stepSystemInPlace(h, out.back());
  }
  return out;
}

StateSpace explore(const Heap& initial, ExploreBound bound) {
  StateSpace space;
  space.bound = bound;
  std::unordered_map<std::string, StateId> index;

  auto addState = [&](Heap h, std::size_t depth, std::optional<std::size_t> parent) {
    const StateId id = space.states.size();
    index.emplace(toSexpr(h), id);
    space.states.push_back(std::move(h));
    space.outgoing.emplace_back();
    space.depth.push_back(depth);
    space.parentEdge.push_back(parent);
    space.expanded.push_back(true);
    return id;
  };

  addState(canonicalize(initial).heap, 0, std::nullopt);
  std::deque<StateId> frontier{0};

  while (!frontier.empty()) {
    const StateId s = frontier.front();
    frontier.pop_front();
    const Heap source = space.states[s];
    const auto choices = enabledChoices(source);
    if (!choices.empty() && space.depth[s] >= bound.maxDepth) {
      space.expanded[s] = false;
      space.truncated = true;
      continue;
    }
    for (const SchedulerChoice& choice : choices) {
      SystemStep step = stepSystem(source, choice, space.depth[s]);
      Canonical c = canonicalize(step.heap);
      std::string key = toSexpr(c.heap);

      StateId target;
      if (auto it = index.find(key); it != index.end()) {
        target = it->second;
      } else if (space.states.size() >= bound.maxStates) {
        space.expanded[s] = false;
        space.truncated = true;
        continue;
      } else {
        target = addState(std::move(c.heap), space.depth[s] + 1, space.edges.size());
        frontier.push_back(target);
      }

      Edge edge{s, choice, target, step.event, {}};
      std::uint32_t maxOld = 0;
      for (const auto& [oldId, newId] : c.actorRenaming) maxOld = std::max(maxOld, oldId);
      edge.actorRenaming.assign(c.actorRenaming.empty() ? 0 : maxOld + 1, std::numeric_limits<std::uint32_t>::max());
      for (const auto& [oldId, newId] : c.actorRenaming) edge.actorRenaming[oldId] = newId;

      space.outgoing[s].push_back(space.edges.size());
      space.edges.push_back(std::move(edge));
    }
  }
  return space;
}

std::optional<ProgressViolation> checkProgress(const StateSpace& space) {
  for (StateId s = 0; s < space.size(); ++s) {
    const bool steps = space.expanded[s] ? !space.outgoing[s].empty() : !enabledChoices(space.states[s]).empty();
    if (!steps && !isTerminal(space.states[s])) return ProgressViolation{s, space.pathTo(s)};
  }
  return std::nullopt;
}

std::optional<PreservationViolation> checkPreservation(const StateSpace& space) {
  for (StateId s = 0; s < space.size(); ++s) {
    WfReport report = wfHeap(space.states[s]);
    if (report.ok()) continue;
    if (!space.parentEdge[s]) {
      return PreservationViolation{std::numeric_limits<std::size_t>::max(), std::move(report), {}};
    }
    const std::size_t e = *space.parentEdge[s];
    return PreservationViolation{e, std::move(report), space.pathTo(space.edges[e].from)};
  }
  return std::nullopt;
}

std::optional<RaceWitness> findRace(const Heap& h) {
  std::vector<std::pair<ActorId, Loc>> mutating;
  for (const auto& [id, actor] : h.actors()) {
    if (actor.current.isValue()) continue;
    try {
      auto d = decompose(actor.current);
      const Expr& redex = std::get<Decomposition>(d).redex;
      if (auto* m = as<expr::Mutate>(redex); m && m->target.isValue() && m->target.value().isLoc()) {
        mutating.emplace_back(id, m->target.value().loc());
      }
    } catch (const EvalError&) {
    }
  }
  for (std::size_t i = 0; i < mutating.size(); ++i) {
    for (std::size_t j = i + 1; j < mutating.size(); ++j) {
      if (mutating[i].second == mutating[j].second) {
        return RaceWitness{0, h, {mutating[i].first, mutating[j].first}, mutating[i].second, {}};
      }
    }
  }
  return std::nullopt;
}

std::optional<RaceWitness> checkRaceFreedom(const StateSpace& space) {
  for (StateId s = 0; s < space.size(); ++s) {
    if (auto w = findRace(space.states[s])) {
      w->state = s;
      w->path = space.pathTo(s);
      return w;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<SchedulerChoice>> findRejectedPath(const StateSpace& space, MonitorState init,
                                                             const MonitorStep& step) {
  struct Node {
    StateId state;
    MonitorState monitor;
    std::optional<std::size_t> parent;  // index into nodes
    std::optional<std::size_t> via;     // edge index
  };
  std::vector<Node> nodes{{0, std::move(init), std::nullopt, std::nullopt}};
  std::set<std::pair<StateId, MonitorState>> seen{{0, nodes[0].monitor}};

  auto pathOf = [&](std::size_t n, std::size_t lastEdge) {
    std::vector<SchedulerChoice> path{space.edges[lastEdge].choice};
    for (std::optional<std::size_t> cur = n; cur && nodes[*cur].via; cur = nodes[*cur].parent) {
      path.push_back(space.edges[*nodes[*cur].via].choice);
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  for (std::size_t n = 0; n < nodes.size(); ++n) {
    for (std::size_t e : space.outgoing[nodes[n].state]) {
      std::optional<MonitorState> next = step(nodes[n].monitor, space.edges[e]);
      if (!next) return pathOf(n, e);
      const StateId to = space.edges[e].to;
      if (seen.emplace(to, *next).second) nodes.push_back({to, std::move(*next), n, e});
    }
  }
  return std::nullopt;
}

std::optional<std::vector<SchedulerChoice>> findInterleavedSegment(const StateSpace& space, ActorId owner,
                                                                   std::uint32_t clientSpawnIndex,
                                                                   std::uint32_t count) {
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  // [owner, client, spawned, reads]
  MonitorState init{raw(owner), kNone, 0, 0};

  MonitorStep step = [=](const MonitorState& m, const Edge& e) -> std::optional<MonitorState> {
    MonitorState out = m;
    const TraceEvent& ev = e.event;
    if (raw(ev.actor) == m[0]) {
      if (ev.rule == Rule::NewActor) {
        if (m[2] == clientSpawnIndex) out[1] = raw(*ev.receiver);
        ++out[2];
      }
      const bool fromClient = m[1] != kNone && ev.origin && raw(*ev.origin) == m[1];
      if (fromClient && ev.rule == Rule::Mutate) {
        out[3] = std::min(m[3] + 1, count);
      } else if (!fromClient && m[3] > 0 && m[3] < count) {
        return std::nullopt;
      }
    }
    auto rename = [&](std::uint32_t id) {
      return id == kNone || id >= e.actorRenaming.size() ? id : e.actorRenaming[id];
    };
    out[0] = rename(out[0]);
    out[1] = rename(out[1]);
    return out;
  };
  return findRejectedPath(space, std::move(init), step);
}

}  // namespace bestow::calculus
