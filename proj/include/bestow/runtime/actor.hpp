#pragma once

// Actors with sequential mailboxes, multiplexed over a worker pool.
//
// Each actor's state is only ever touched from inside its own message loop:
// at most one message of a given actor runs at any instant, and messages are
// taken from the mailbox in admission order (so per-sender order holds).

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bestow/runtime/future.hpp"

namespace bestow::runtime {

class DeliveryFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CalledOutsideActor : public std::logic_error {
public:
  CalledOutsideActor() : std::logic_error("operation is only valid inside an actor's message loop") {}
};

class BatchTooLarge : public std::invalid_argument {
public:
  BatchTooLarge(std::size_t n, std::size_t cap)
      : std::invalid_argument("batch of " + std::to_string(n) + " operations exceeds the cap of " +
                              std::to_string(cap)) {}
};

class NestedOverride : public std::logic_error {
public:
  NestedOverride() : std::logic_error("this thread already holds an override window on the actor") {}
};

class AlreadyResumed : public std::logic_error {
public:
  AlreadyResumed() : std::logic_error("override window already resumed") {}
};

struct RuntimeOptions {
  unsigned workers = 0;  ///< 0: hardware concurrency
  std::size_t batchCap = 64;
  /// Idle time after which an abandoned override window is force-resumed.
  std::chrono::milliseconds overrideTimeout{5000};
};

/// Identity of an actor or of a client thread. 0 means "none".
using Ident = std::uint64_t;

/// The actor whose loop is running on this thread, or 0.
Ident currentActorId();

/// The actor if called from a loop, otherwise a stable id for this thread.
Ident currentSenderId();

/// One entry of an actor's owner trace.
struct TraceRecord {
  std::uint64_t turn = 0;  ///< ordinal of the message being processed
  Ident sender = 0;        ///< who submitted that message
  std::string label;
};

/// Appends to the running actor's owner trace. Throws CalledOutsideActor.
void record(std::string label);

class Runtime;

namespace detail {

class WorkerPool {
public:
  explicit WorkerPool(unsigned workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void submit(std::function<void()> task);
  /// Runs queued work to completion, then joins the workers.
  void shutdown();

private:
  void loop();

  std::mutex m_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> tasks_;
  std::vector<std::thread> threads_;
  bool stopping_ = false;
  bool closed_ = false;
};

class ActorCell;
struct OverrideWindow;

/// Force-resumes override windows whose holder went quiet.
class Watchdog {
public:
  explicit Watchdog(std::chrono::milliseconds timeout);
  ~Watchdog();
  Watchdog(const Watchdog&) = delete;
  Watchdog& operator=(const Watchdog&) = delete;

  void watch(std::shared_ptr<OverrideWindow> w);
  void stop();
  std::chrono::milliseconds timeout() const { return timeout_; }

private:
  void loop();

  std::chrono::milliseconds timeout_;
  std::mutex m_;
  std::condition_variable cv_;
  std::vector<std::weak_ptr<OverrideWindow>> watched_;
  bool stopping_ = false;
  std::thread thread_;
};

struct Envelope {
  std::function<void()> run;
  Ident sender = 0;
};

/// A caller-private queue an actor consumes instead of its mailbox while the
/// window is active. Guarded by the owning cell's mutex.
struct OverrideWindow {
  std::weak_ptr<ActorCell> cell;
  std::deque<Envelope> queue;
  std::thread::id holder;
  bool active = false;
  bool closed = false;
  bool forced = false;
  std::chrono::steady_clock::time_point lastActivity;
};

class ActorCell : public std::enable_shared_from_this<ActorCell> {
public:
  ActorCell(std::shared_ptr<WorkerPool> pool, std::weak_ptr<Watchdog> watchdog, Ident id, std::size_t batchCap);
  virtual ~ActorCell() = default;

  Ident id() const { return id_; }
  std::size_t batchCap() const { return batchCap_; }

  /// Regular mailbox. Throws DeliveryFailure once stopped.
  void post(Envelope e);
  /// Private queue of an override window. Throws DeliveryFailure once the
  /// window is closed.
  void postPrivate(const std::shared_ptr<OverrideWindow>& w, Envelope e);

  /// Rejects further sends; already queued messages still run.
  void stop();
  bool stopped() const;

  // Override protocol, called from inside this cell's loop.
  void activate(const std::shared_ptr<OverrideWindow>& w);
  void deactivate(const std::shared_ptr<OverrideWindow>& w);
  /// Registers a pending window opened by the calling thread; throws
  /// NestedOverride if that thread already holds one on this actor.
  void registerHolder(const std::shared_ptr<OverrideWindow>& w);
  /// The holder has asked to resume; it may open another window.
  void releaseHolder(const std::shared_ptr<OverrideWindow>& w);
  /// Watchdog entry point: closes `w` if it is active, empty and idle for
  /// at least `timeout`. Returns true if it did.
  bool forceResumeIfIdle(const std::shared_ptr<OverrideWindow>& w, std::chrono::milliseconds timeout);

  bool windowClosed(const std::shared_ptr<OverrideWindow>& w) const;
  bool windowForced(const std::shared_ptr<OverrideWindow>& w) const;
  const std::weak_ptr<Watchdog>& watchdog() const { return watchdog_; }

  std::uint64_t processed() const { return processed_.load(); }
  std::uint64_t admitted() const { return admitted_.load(); }
  /// Messages admitted but not yet processed (mailbox plus private queues).
  std::uint64_t inFlight() const { return admitted() - processed(); }

  // Loop-confined; only call from inside this cell's loop.
  std::vector<TraceRecord>& traceRecords() { return trace_; }
  std::uint64_t turn() const { return turn_; }
  Ident currentSender() const { return currentSender_; }

private:
  void runTurn();
  bool runnableLocked() const;
  void scheduleLocked();
  void dropHolderLocked(const std::shared_ptr<OverrideWindow>& w);

  std::shared_ptr<WorkerPool> pool_;
  std::weak_ptr<Watchdog> watchdog_;
  Ident id_;
  std::size_t batchCap_;

  mutable std::mutex m_;
  std::deque<Envelope> mailbox_;
  std::shared_ptr<OverrideWindow> window_;
  std::vector<std::shared_ptr<OverrideWindow>> pending_;
  bool scheduled_ = false;
  bool stopped_ = false;

  std::atomic<std::uint64_t> processed_{0};
  std::atomic<std::uint64_t> admitted_{0};
  std::uint64_t turn_ = 0;
  Ident currentSender_ = 0;
  std::vector<TraceRecord> trace_;
};

template <class State>
class StatefulCell : public ActorCell {
public:
  StatefulCell(std::shared_ptr<WorkerPool> pool, std::weak_ptr<Watchdog> watchdog, Ident id, std::size_t batchCap,
               State initial)
      : ActorCell(std::move(pool), std::move(watchdog), id, batchCap), state_(std::move(initial)) {}

  /// Loop-confined.
  State& state() { return state_; }

private:
  State state_;
};

/// Posts `f()` to `cell` (regular mailbox, or `window` when given) and
/// returns a future of its result.
template <class F>
Future<result_t<F>> postCall(ActorCell& cell, F f, const std::shared_ptr<OverrideWindow>& window = nullptr) {
  using R = result_t<F>;
  Promise<R> promise;
  Future<R> future = promise.future();
  Envelope e{[f = std::move(f), promise]() mutable {
               try {
                 promise.setValue(invokeResult(f));
               } catch (...) {
                 promise.setException(std::current_exception());
               }
             },
             currentSenderId()};
  if (window) {
    cell.postPrivate(window, std::move(e));
  } else {
    cell.post(std::move(e));
  }
  return future;
}

ActorCell* currentCell();

}  // namespace detail

template <class State>
class PrivateQueue;

template <class State>
class ActorRef {
public:
  ActorRef() = default;
  explicit ActorRef(std::shared_ptr<detail::StatefulCell<State>> cell) : cell_(std::move(cell)) {}

  Ident id() const { return cell_->id(); }
  bool stopped() const { return cell_->stopped(); }
  std::uint64_t processed() const { return cell_->processed(); }

  /// Runs `f(state)` inside the actor's loop. Throws DeliveryFailure if the
  /// actor is stopped.
  template <class F>
  Future<result_t<F, State&>> perform(F f) const {
    auto* cell = cell_.get();
    return detail::postCall(*cell_, [cell, f = std::move(f)]() mutable { return invokeResult(f, cell->state()); });
  }

  void stop() const { cell_->stop(); }

  /// Copy of the owner trace, taken inside the loop.
  Future<std::vector<TraceRecord>> trace() const {
    auto* cell = cell_.get();
    return detail::postCall(*cell_, [cell] { return cell->traceRecords(); });
  }

  const std::shared_ptr<detail::StatefulCell<State>>& cell() const { return cell_; }

private:
  std::shared_ptr<detail::StatefulCell<State>> cell_;
};

class Runtime {
public:
  explicit Runtime(RuntimeOptions options = {});
  ~Runtime();
  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  template <class State>
  ActorRef<State> spawn(State initial) {
    auto cell = std::make_shared<detail::StatefulCell<State>>(pool_, watchdog_, nextIdent(),
                                                              options_.batchCap, std::move(initial));
    return ActorRef<State>(std::move(cell));
  }

  const RuntimeOptions& options() const { return options_; }

  /// Drains all queued work and stops the workers. Called by the destructor.
  void shutdown();

  static Ident nextIdent();

private:
  RuntimeOptions options_;
  std::shared_ptr<detail::WorkerPool> pool_;
  std::shared_ptr<detail::Watchdog> watchdog_;
};

/// Runs all `ops` back-to-back in one turn of the actor's loop, so no other
/// message can interleave. Results are returned positionally.
template <class State, class R>
Future<std::vector<R>> atomicBatch(const ActorRef<State>& target, std::vector<std::function<R(State&)>> ops) {
  if (ops.size() > target.cell()->batchCap()) throw BatchTooLarge(ops.size(), target.cell()->batchCap());
  return target.perform([ops = std::move(ops)](State& s) {
    std::vector<R> out;
    out.reserve(ops.size());
    for (auto& op : ops) out.push_back(op(s));
    return out;
  });
}

}  // namespace bestow::runtime
