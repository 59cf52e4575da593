#pragma once

// References to passive objects that stay inside their owning actor.
//
// A BestowedRef pairs an owner with an object the owner holds. Operations
// sent through it are relayed: they become owner-performs of a closure over
// the object, so they run in the owner's loop like any other message.

#include <atomic>
#include <functional>
#include <memory>
#include <vector>

#include "bestow/runtime/actor.hpp"

namespace bestow::runtime {

template <class T>
class BestowedRef {
public:
  BestowedRef() = default;
  BestowedRef(std::shared_ptr<detail::ActorCell> owner, T* target) : owner_(std::move(owner)), target_(target) {}

  Ident owner() const { return owner_->id(); }
  const std::shared_ptr<detail::ActorCell>& ownerCell() const { return owner_; }

  /// Runs `op(object)` in the owner's loop. Throws DeliveryFailure if the
  /// owner is stopped.
  template <class F>
  Future<result_t<F, T&>> send(F op) const {
    T* target = target_;
    return detail::postCall(*owner_, [target, op = std::move(op)]() mutable { return invokeResult(op, *target); });
  }

private:
  std::shared_ptr<detail::ActorCell> owner_;
  T* target_ = nullptr;
};

/// Wraps an object owned by the running actor. Must be called from inside
/// that actor's loop, otherwise throws CalledOutsideActor. The object has to
/// outlive every use of the reference (keep it in the actor's state).
template <class T>
BestowedRef<T> bestow(T& obj) {
  detail::ActorCell* cell = detail::currentCell();
  if (!cell) throw CalledOutsideActor();
  return BestowedRef<T>(cell->shared_from_this(), &obj);
}

template <class T, class F>
Future<result_t<F, T&>> sendBestowed(const BestowedRef<T>& b, F op) {
  return b.send(std::move(op));
}

/// Batched form of sendBestowed: one message, ops back to back.
template <class T, class R>
Future<std::vector<R>> atomicBatch(const BestowedRef<T>& target, std::vector<std::function<R(T&)>> ops) {
  const std::size_t cap = target.ownerCell()->batchCap();
  if (ops.size() > cap) throw BatchTooLarge(ops.size(), cap);
  return target.send([ops = std::move(ops)](T& obj) {
    std::vector<R> out;
    out.reserve(ops.size());
    for (auto& op : ops) out.push_back(op(obj));
    return out;
  });
}

/// Counts accesses to an object by whether they ran on its owner's loop.
class ConfinementProbe {
public:
  ConfinementProbe() = default;
  explicit ConfinementProbe(Ident owner) : owner_(owner) {}
  ConfinementProbe(const ConfinementProbe& o)
      : owner_(o.owner_.load()), onOwner_(o.onOwner_.load()), offOwner_(o.offOwner_.load()) {}
  ConfinementProbe& operator=(const ConfinementProbe& o) {
    owner_.store(o.owner_.load());
    onOwner_.store(o.onOwner_.load());
    offOwner_.store(o.offOwner_.load());
    return *this;
  }

  void setOwner(Ident owner) { owner_.store(owner); }
  Ident owner() const { return owner_.load(); }

  void touch() {
    if (currentActorId() == owner_.load()) {
      onOwner_.fetch_add(1, std::memory_order_relaxed);
    } else {
      offOwner_.fetch_add(1, std::memory_order_relaxed);
    }
  }

  std::uint64_t onOwner() const { return onOwner_.load(); }
  std::uint64_t offOwner() const { return offOwner_.load(); }

private:
  std::atomic<Ident> owner_{0};
  std::atomic<std::uint64_t> onOwner_{0};
  std::atomic<std::uint64_t> offOwner_{0};
};

}  // namespace bestow::runtime
