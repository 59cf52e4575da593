#pragma once

// Global configuration of a running program: a map from actor identifiers to
// actor quadruples (this, local heap, queue, current expression).

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "bestow/calculus/syntax.hpp"

namespace bestow::calculus {

/// Which end of the queue a send writes to. Pops always take the head.
enum class QueueOrder {
  Fifo,  ///< sends append at the tail
  Lifo,  ///< sends prepend at the head (the literal "prepend" reading)
};

/// A queued lambda. `sender` is bookkeeping for trace provenance and takes no
/// part in evaluation.
struct Message {
  Value lambda;
  ActorId sender;
  friend bool operator==(const Message&, const Message&) = default;
};

struct Actor {
  Loc thisLoc;
  std::set<Loc> localHeap;
  std::deque<Message> queue;
  Expr current;
  /// Sender of the message whose body is `current`; empty for the boot
  /// expression of the root actor. Bookkeeping only.
  std::optional<ActorId> origin;

  friend bool operator==(const Actor&, const Actor&) = default;
};

class Heap {
public:
  Heap() = default;
  explicit Heap(QueueOrder order) : order_(order) {}

  std::map<ActorId, Actor>& actors() { return actors_; }
  const std::map<ActorId, Actor>& actors() const { return actors_; }

  bool contains(ActorId id) const { return actors_.contains(id); }
  Actor& at(ActorId id);
  const Actor& at(ActorId id) const;

  /// Fresh names are minted from monotone counters and never reused.
  Loc freshLoc() { return Loc{nextLoc_++}; }
  ActorId freshId() { return ActorId{nextId_++}; }

  std::uint32_t nextLoc() const { return nextLoc_; }
  std::uint32_t nextId() const { return nextId_; }
  void setCounters(std::uint32_t nextLoc, std::uint32_t nextId) {
    nextLoc_ = nextLoc;
    nextId_ = nextId;
  }

  /// Installs (ι, {ι}, ε, e) under a fresh id.
  ActorId spawn(Expr initial, std::optional<ActorId> origin = std::nullopt);

  QueueOrder queueOrder() const { return order_; }
  void setQueueOrder(QueueOrder order) { order_ = order; }

  friend bool operator==(const Heap&, const Heap&) = default;

private:
  std::map<ActorId, Actor> actors_;
  std::uint32_t nextLoc_ = 0;
  std::uint32_t nextId_ = 0;
  QueueOrder order_ = QueueOrder::Fifo;
};

/// One root actor (ι0, {ι0}, ε, e).
Heap initialHeap(const Expr& program, QueueOrder order = QueueOrder::Fifo);

/// Canonical one-line text form. See "Text formats" in README.md.
std::string toSexpr(const Heap& h);
std::string toSexpr(const Actor& a);

}  // namespace bestow::calculus
