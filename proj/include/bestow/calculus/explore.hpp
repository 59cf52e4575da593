#pragma once

// Bounded breadth-first exploration of every interleaving of a heap, with
// states merged up to consistent renaming of actor ids and locations.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bestow/calculus/eval.hpp"
#include "bestow/calculus/heap.hpp"
#include "bestow/calculus/wellformed.hpp"

namespace bestow::calculus {

struct Canonical {
  Heap heap;
  std::map<std::uint32_t, std::uint32_t> actorRenaming;  ///< old id -> new id
  std::map<std::uint32_t, std::uint32_t> locRenaming;    ///< old loc -> new loc
};

/// Renames actors and locations in first-occurrence order of a deterministic
/// traversal starting at the oldest actor. Heaps equal up to a consistent
/// renaming of fresh names produce identical canonical heaps.
Canonical canonicalize(const Heap& h);

struct ExploreBound {
  std::size_t maxStates = 50'000;
  std::size_t maxDepth = 64;
};

using StateId = std::size_t;

struct Edge {
  StateId from = 0;
  SchedulerChoice choice;
  StateId to = 0;
  /// Event in the naming of `from`.
  TraceEvent event;
  /// Post-step actor id (naming of `from`, plus a freshly spawned id) to the
  /// actor id in the naming of `to`.
  std::vector<std::uint32_t> actorRenaming;
};

struct StateSpace {
  std::vector<Heap> states;  ///< canonical; states[0] is the initial heap
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> outgoing;  ///< edge indices per state
  std::vector<std::size_t> depth;
  std::vector<std::optional<std::size_t>> parentEdge;  ///< BFS tree, for minimal traces
  std::vector<bool> expanded;  ///< false when cut off by the bound
  ExploreBound bound;
  bool truncated = false;

  const Heap& initial() const { return states.front(); }
  std::size_t size() const { return states.size(); }

  /// Choices leading from the initial state to `s` along the BFS tree.
  /// Each choice is in the naming of the canonical state it leaves; see
  /// concretePath to replay it on an uncanonicalized heap.
  std::vector<SchedulerChoice> pathTo(StateId s) const;
};

/// Translates a path of canonical choices into choices that replay with
/// stepSystem from `start` directly. Throws EvalError if a step is not enabled.
std::vector<SchedulerChoice> concretePath(const Heap& start, const std::vector<SchedulerChoice>& path);

StateSpace explore(const Heap& initial, ExploreBound bound = {});

/// Either a state with no successor that isn't terminal, or nothing.
struct ProgressViolation {
  StateId state;
  std::vector<SchedulerChoice> path;
};
std::optional<ProgressViolation> checkProgress(const StateSpace& space);

struct PreservationViolation {
  std::size_t edge;
  WfReport report;
  std::vector<SchedulerChoice> path;  ///< reaches the source state; the edge's choice follows
};
/// Checks wfHeap on the initial state and on the target of every edge.
std::optional<PreservationViolation> checkPreservation(const StateSpace& space);

struct RaceWitness {
  StateId state;
  Heap heap;
  std::pair<ActorId, ActorId> actorPair;
  Loc location;
  std::vector<SchedulerChoice> path;
};
/// Two distinct actors whose active redexes are mutations of one location.
std::optional<RaceWitness> findRace(const Heap& h);
std::optional<RaceWitness> checkRaceFreedom(const StateSpace& space);

// ---------------------------------------------------------------------------
// Path properties
// ---------------------------------------------------------------------------

/// Small automaton state threaded along paths. `std::nullopt` from the step
/// function means the automaton rejects (a counterexample path was found).
using MonitorState = std::vector<std::uint32_t>;
using MonitorStep = std::function<std::optional<MonitorState>(const MonitorState&, const Edge&)>;

/// Searches every path of the space from the initial state for one the
/// monitor rejects. Returns the choices of the shortest such path.
std::optional<std::vector<SchedulerChoice>> findRejectedPath(const StateSpace& space, MonitorState init,
                                                             const MonitorStep& step);

/// Owner-trace contiguity. Watches the events executed by `owner` and
/// rejects a path when, between the first and the `count`-th mutation the
/// owner performs on behalf of the client, the owner executes any event of a
/// message from another sender. The client is the `clientSpawnIndex`-th
/// actor spawned by `owner` (0-based); both are tracked through renamings.
std::optional<std::vector<SchedulerChoice>> findInterleavedSegment(const StateSpace& space, ActorId owner,
                                                                   std::uint32_t clientSpawnIndex,
                                                                   std::uint32_t count);

}  // namespace bestow::calculus
