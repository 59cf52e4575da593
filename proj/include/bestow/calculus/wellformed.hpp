#pragma once

#include <string>
#include <vector>

#include "bestow/calculus/heap.hpp"

namespace bestow::calculus {

struct WfViolation {
  /// wf-heap, wf-actor, wf-queue-message or wf-queue-empty.
  std::string ruleName;
  /// One actor, or the offending pair for wf-heap.
  std::vector<ActorId> actors;
  std::string detail;
};

struct WfReport {
  std::vector<WfViolation> violations;

  bool ok() const { return violations.empty(); }
  void merge(WfReport other);
  bool has(std::string_view rule) const;
  std::string str() const;
};

/// H ⊢ (ι, L, Q, e)
WfReport wfActor(const Heap& h, ActorId id);
/// ⊢ H
WfReport wfHeap(const Heap& h);
/// H ⊢ Q for the queue of `owner`.
WfReport wfQueue(const Heap& h, ActorId owner);

}  // namespace bestow::calculus
