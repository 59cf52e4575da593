#pragma once

// Write-once result cells. The calculus abstracts message results away; the
// runtime needs them, so they are concretized here as futures with blocking
// and callback reads.
//
// Blocking on an unfinished future from inside an actor's message loop is a
// contract violation (the actor could be waiting on itself) and throws
// AwaitInsideActor. Use then() from inside actors.

#include <condition_variable>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace bestow::runtime {

class AwaitInsideActor : public std::logic_error {
public:
  AwaitInsideActor() : std::logic_error("blocking on a future inside an actor's message loop") {}
};

class FutureAlreadySet : public std::logic_error {
public:
  FutureAlreadySet() : std::logic_error("future completed twice") {}
};

/// Result type for operations that return nothing.
using Done = std::monostate;

template <class F, class... Args>
using result_t = std::conditional_t<std::is_void_v<std::invoke_result_t<F, Args...>>, Done,
                                    std::invoke_result_t<F, Args...>>;

/// Calls f, mapping a void result to Done.
template <class F, class... Args>
result_t<F, Args...> invokeResult(F& f, Args&&... args) {
  if constexpr (std::is_void_v<std::invoke_result_t<F, Args...>>) {
    std::invoke(f, std::forward<Args>(args)...);
    return Done{};
  } else {
    return std::invoke(f, std::forward<Args>(args)...);
  }
}

namespace detail {
/// True on a thread currently running an actor's message.
bool insideActorLoop();

template <class T>
struct SharedState {
  std::mutex m;
  std::condition_variable cv;
  std::optional<T> value;
  std::exception_ptr error;
  std::vector<std::function<void()>> observers;

  bool done() const { return value.has_value() || error != nullptr; }

  template <class Fill>
  void complete(Fill fill) {
    std::vector<std::function<void()>> run;
    {
      std::lock_guard lock(m);
      if (done()) throw FutureAlreadySet();
      fill();
      run.swap(observers);
    }
    cv.notify_all();
    for (auto& f : run) f();
  }
};
}  // namespace detail

template <class T>
class Future {
public:
  Future() = default;
  explicit Future(std::shared_ptr<detail::SharedState<T>> s) : s_(std::move(s)) {}

  bool valid() const { return s_ != nullptr; }

  bool ready() const {
    std::lock_guard lock(s_->m);
    return s_->done();
  }

  /// Blocks until completed. Rethrows a stored exception. Every call after
  /// completion returns the same value.
  T get() const {
    std::unique_lock lock(s_->m);
    if (!s_->done() && detail::insideActorLoop()) throw AwaitInsideActor();
    s_->cv.wait(lock, [&] { return s_->done(); });
    if (s_->error) std::rethrow_exception(s_->error);
    return *s_->value;
  }

  /// Runs `cb(*this)` once completed, on the completing thread (or right
  /// away if already complete).
  template <class Cb>
  void then(Cb cb) const {
    std::unique_lock lock(s_->m);
    if (!s_->done()) {
      s_->observers.push_back([cb = std::move(cb), self = *this]() mutable { cb(self); });
      return;
    }
    lock.unlock();
    cb(*this);
  }

private:
  std::shared_ptr<detail::SharedState<T>> s_;
};

template <class T>
class Promise {
public:
  Promise() : s_(std::make_shared<detail::SharedState<T>>()) {}

  Future<T> future() const { return Future<T>(s_); }

  void setValue(T v) {
    s_->complete([&] { s_->value.emplace(std::move(v)); });
  }
  void setException(std::exception_ptr e) {
    s_->complete([&] { s_->error = std::move(e); });
  }

private:
  std::shared_ptr<detail::SharedState<T>> s_;
};

/// A future that is already complete.
template <class T>
Future<T> makeReadyFuture(T v) {
  Promise<T> p;
  p.setValue(std::move(v));
  return p.future();
}

}  // namespace bestow::runtime
