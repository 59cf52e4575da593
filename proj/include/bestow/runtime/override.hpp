#pragma once

// Queue override: an actor temporarily consumes a caller-private queue.
//
// overrideQueue enqueues an override message in the regular mailbox. When
// the actor processes it, the actor switches to the private queue and stays
// there until the caller resumes. Mailbox messages arriving in between are
// deferred in order. A window left idle for RuntimeOptions::overrideTimeout
// is closed by the watchdog; later submissions then fail with
// DeliveryFailure.

#include <atomic>
#include <memory>
#include <thread>

#include "bestow/runtime/actor.hpp"

namespace bestow::runtime {

template <class State>
class PrivateQueue {
public:
  PrivateQueue() = default;
  PrivateQueue(std::shared_ptr<detail::StatefulCell<State>> cell, std::shared_ptr<detail::OverrideWindow> window)
      : cell_(std::move(cell)), window_(std::move(window)), resumed_(std::make_shared<std::atomic<bool>>(false)) {}

  Ident owner() const { return cell_->id(); }

  /// Runs `f(state)` in the actor's loop, ahead of any deferred mail.
  template <class F>
  Future<result_t<F, State&>> submit(F f) const {
    if (resumed_->load()) throw DeliveryFailure("override window already resumed");
    auto* cell = cell_.get();
    return detail::postCall(
        *cell_, [cell, f = std::move(f)]() mutable { return invokeResult(f, cell->state()); }, window_);
  }

  /// Returns the actor to its mailbox once every submitted operation has
  /// run. A window the watchdog already closed resumes trivially.
  Future<Done> resume() const {
    if (resumed_->exchange(true)) throw AlreadyResumed();
    cell_->releaseHolder(window_);
    if (cell_->windowClosed(window_)) return makeReadyFuture(Done{});
    auto* cell = cell_.get();
    auto window = window_;
    try {
      return detail::postCall(*cell_, [cell, window] { cell->deactivate(window); }, window_);
    } catch (const DeliveryFailure&) {
      return makeReadyFuture(Done{});  // closed by the watchdog meanwhile
    }
  }

  bool open() const { return !cell_->windowClosed(window_); }
  /// True if the watchdog closed this window.
  bool forced() const { return cell_->windowForced(window_); }

private:
  std::shared_ptr<detail::StatefulCell<State>> cell_;
  std::shared_ptr<detail::OverrideWindow> window_;
  std::shared_ptr<std::atomic<bool>> resumed_;
};

/// The future completes once the actor has switched to the private queue.
/// Throws NestedOverride if this thread already holds an unresumed window on
/// `a`, DeliveryFailure if `a` is stopped.
template <class State>
Future<PrivateQueue<State>> overrideQueue(const ActorRef<State>& a) {
  const auto& cell = a.cell();
  auto window = std::make_shared<detail::OverrideWindow>();
  window->cell = cell;
  window->holder = std::this_thread::get_id();
  cell->registerHolder(window);
  PrivateQueue<State> queue(cell, window);
  auto* raw = cell.get();
  try {
    auto ready = detail::postCall(*cell, [raw, window, queue] {
      raw->activate(window);
      return queue;
    });
    if (auto dog = cell->watchdog().lock()) dog->watch(window);
    return ready;
  } catch (...) {
    raw->deactivate(window);
    throw;
  }
}

}  // namespace bestow::runtime
