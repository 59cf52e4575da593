#pragma once

// Lock-based bestowal: an aggregate guards the objects it owns with one
// reentrant lock, and a LockedRef takes that lock around every operation.
//
// The lock is never poisoned. If an operation throws, the lock is released
// and the exception reaches the caller; the object is left as the operation
// left it.

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace bestow::runtime {

/// A recursive mutex that counts outermost acquisitions.
class CountingRecursiveMutex {
public:
  void lock() {
    m_.lock();
    if (depth_++ == 0) acquisitions_.fetch_add(1, std::memory_order_relaxed);
  }
  bool try_lock() {
    if (!m_.try_lock()) return false;
    if (depth_++ == 0) acquisitions_.fetch_add(1, std::memory_order_relaxed);
    return true;
  }
  void unlock() {
    --depth_;
    m_.unlock();
  }

  std::uint64_t acquisitions() const { return acquisitions_.load(); }

private:
  std::recursive_mutex m_;
  unsigned depth_ = 0;  // guarded by m_
  std::atomic<std::uint64_t> acquisitions_{0};
};

template <class T>
class LockedRef {
public:
  LockedRef(std::shared_ptr<CountingRecursiveMutex> lock, T* target, std::shared_ptr<void> keepAlive)
      : lock_(std::move(lock)), target_(target), keepAlive_(std::move(keepAlive)) {}

  template <class F>
  decltype(auto) operator()(F&& op) const {
    std::lock_guard guard(*lock_);
    return std::forward<F>(op)(*target_);
  }

  /// Runs every op under a single acquisition.
  template <class R>
  std::vector<R> atomic(const std::vector<std::function<R(T&)>>& ops) const {
    std::lock_guard guard(*lock_);
    std::vector<R> out;
    out.reserve(ops.size());
    for (const auto& op : ops) out.push_back(op(*target_));
    return out;
  }

  CountingRecursiveMutex& mutex() const { return *lock_; }

private:
  std::shared_ptr<CountingRecursiveMutex> lock_;
  T* target_;
  std::shared_ptr<void> keepAlive_;
};

template <class A>
class LockedAggregate {
public:
  explicit LockedAggregate(A value = A{})
      : lock_(std::make_shared<CountingRecursiveMutex>()), value_(std::make_shared<A>(std::move(value))) {}

  /// Runs `f(aggregate)` holding the lock.
  template <class F>
  decltype(auto) with(F&& f) const {
    std::lock_guard guard(*lock_);
    return std::forward<F>(f)(*value_);
  }

  /// `obj` must live inside the aggregate (the reference keeps it alive).
  template <class T>
  LockedRef<T> lockBestow(T& obj) const {
    return LockedRef<T>(lock_, &obj, value_);
  }

  /// LockedRef to the part of the aggregate picked by `select`.
  template <class Sel>
  auto lockBestowWith(Sel select) const {
    std::lock_guard guard(*lock_);
    return lockBestow(select(*value_));
  }

  CountingRecursiveMutex& mutex() const { return *lock_; }

private:
  std::shared_ptr<CountingRecursiveMutex> lock_;
  std::shared_ptr<A> value_;
};

template <class A, class T>
LockedRef<T> lockBestow(const LockedAggregate<A>& aggregate, T& obj) {
  return aggregate.lockBestow(obj);
}

}  // namespace bestow::runtime
