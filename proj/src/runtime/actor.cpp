#include "bestow/runtime/actor.hpp"

#include <algorithm>

namespace bestow::runtime {

namespace {
std::atomic<Ident> gNextIdent{1};
thread_local detail::ActorCell* tCurrent = nullptr;
thread_local Ident tClientId = 0;
}  // namespace

Ident Runtime::nextIdent() { return gNextIdent.fetch_add(1); }

Ident currentActorId() { return tCurrent ? tCurrent->id() : 0; }

Ident currentSenderId() {
  if (tCurrent) return tCurrent->id();
  if (tClientId == 0) tClientId = Runtime::nextIdent();
  return tClientId;
}

void record(std::string label) {
  if (!tCurrent) throw CalledOutsideActor();
  tCurrent->traceRecords().push_back(TraceRecord{tCurrent->turn(), tCurrent->currentSender(), std::move(label)});
}

namespace detail {

bool insideActorLoop() { return tCurrent != nullptr; }
ActorCell* currentCell() { return tCurrent; }

WorkerPool::WorkerPool(unsigned workers) {
  if (workers == 0) workers = std::max(2u, std::thread::hardware_concurrency());
  threads_.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) threads_.emplace_back([this] { loop(); });
}

WorkerPool::~WorkerPool() { shutdown(); }

void WorkerPool::submit(std::function<void()> task) {
  {
    std::lock_guard lock(m_);
    if (closed_) throw DeliveryFailure("runtime has shut down");
    tasks_.push_back(std::move(task));
  }
  cv_.notify_one();
}

void WorkerPool::loop() {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lock(m_);
      cv_.wait(lock, [&] { return stopping_ || !tasks_.empty(); });
      if (tasks_.empty()) return;
      task = std::move(tasks_.front());
      tasks_.pop_front();
    }
    task();
  }
}

void WorkerPool::shutdown() {
  {
    std::lock_guard lock(m_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
  std::lock_guard lock(m_);
  closed_ = true;
}

Watchdog::Watchdog(std::chrono::milliseconds timeout)
    : timeout_(timeout), thread_([this] { loop(); }) {}

Watchdog::~Watchdog() { stop(); }

void Watchdog::stop() {
  if (!thread_.joinable()) return;
  {
    std::lock_guard lock(m_);
    stopping_ = true;
  }
  cv_.notify_all();
  thread_.join();
}

void Watchdog::watch(std::shared_ptr<OverrideWindow> w) {
  std::lock_guard lock(m_);
  watched_.push_back(std::move(w));
}

void Watchdog::loop() {
  const auto tick = std::clamp(timeout_ / 4, std::chrono::milliseconds(1), std::chrono::milliseconds(50));
  std::unique_lock lock(m_);
  while (!stopping_) {
    if (cv_.wait_for(lock, tick, [this] { return stopping_; })) break;
    std::vector<std::weak_ptr<OverrideWindow>> scan;
    scan.swap(watched_);
    lock.unlock();
    std::vector<std::weak_ptr<OverrideWindow>> keep;
    for (auto& weak : scan) {
      auto w = weak.lock();
      if (!w) continue;
      auto cell = w->cell.lock();
      if (!cell) continue;
      cell->forceResumeIfIdle(w, timeout_);
      if (!cell->windowClosed(w)) keep.push_back(w);
    }
    lock.lock();
    // Windows registered during the scan were appended to the emptied list.
    keep.insert(keep.end(), watched_.begin(), watched_.end());
    watched_ = std::move(keep);
  }
}

ActorCell::ActorCell(std::shared_ptr<WorkerPool> pool, std::weak_ptr<Watchdog> watchdog, Ident id,
                     std::size_t batchCap)
    : pool_(std::move(pool)), watchdog_(std::move(watchdog)), id_(id), batchCap_(batchCap) {}

bool ActorCell::windowClosed(const std::shared_ptr<OverrideWindow>& w) const {
  std::lock_guard lock(m_);
  return w->closed;
}

bool ActorCell::windowForced(const std::shared_ptr<OverrideWindow>& w) const {
  std::lock_guard lock(m_);
  return w->forced;
}

void ActorCell::post(Envelope e) {
  std::lock_guard lock(m_);
  if (stopped_) throw DeliveryFailure("actor " + std::to_string(id_) + " is stopped");
  mailbox_.push_back(std::move(e));
  admitted_.fetch_add(1);
  scheduleLocked();
}

void ActorCell::postPrivate(const std::shared_ptr<OverrideWindow>& w, Envelope e) {
  std::lock_guard lock(m_);
  if (w->closed) throw DeliveryFailure("override window is closed");
  w->queue.push_back(std::move(e));
  admitted_.fetch_add(1);
  w->lastActivity = std::chrono::steady_clock::now();
  scheduleLocked();
}

void ActorCell::stop() {
  std::lock_guard lock(m_);
  stopped_ = true;
}

bool ActorCell::stopped() const {
  std::lock_guard lock(m_);
  return stopped_;
}

bool ActorCell::runnableLocked() const { return window_ ? !window_->queue.empty() : !mailbox_.empty(); }

void ActorCell::scheduleLocked() {
  if (scheduled_ || !runnableLocked()) return;
  scheduled_ = true;
  pool_->submit([self = shared_from_this()] { self->runTurn(); });
}

void ActorCell::runTurn() {
  Envelope e;
  {
    std::lock_guard lock(m_);
    auto& q = window_ ? window_->queue : mailbox_;
    if (q.empty()) {
      scheduled_ = false;
      return;
    }
    e = std::move(q.front());
    q.pop_front();
    if (window_) window_->lastActivity = std::chrono::steady_clock::now();
  }

  ActorCell* outer = tCurrent;
  tCurrent = this;
  ++turn_;
  currentSender_ = e.sender;
  try {
    e.run();
  } catch (...) {
    // Thunks report through their futures; nothing should escape.
  }
  tCurrent = outer;
  processed_.fetch_add(1);

  std::lock_guard lock(m_);
  scheduled_ = false;
  scheduleLocked();
}

void ActorCell::activate(const std::shared_ptr<OverrideWindow>& w) {
  std::lock_guard lock(m_);
  if (w->closed) return;  // resumed (or abandoned) before it ever opened
  window_ = w;
  w->active = true;
  w->lastActivity = std::chrono::steady_clock::now();
}

void ActorCell::deactivate(const std::shared_ptr<OverrideWindow>& w) {
  std::lock_guard lock(m_);
  if (window_ == w) window_.reset();
  w->active = false;
  w->closed = true;
  dropHolderLocked(w);
}

void ActorCell::registerHolder(const std::shared_ptr<OverrideWindow>& w) {
  std::lock_guard lock(m_);
  for (const auto& p : pending_) {
    if (p->holder == w->holder && !p->closed) throw NestedOverride();
  }
  pending_.push_back(w);
}

void ActorCell::releaseHolder(const std::shared_ptr<OverrideWindow>& w) {
  std::lock_guard lock(m_);
  dropHolderLocked(w);
}

void ActorCell::dropHolderLocked(const std::shared_ptr<OverrideWindow>& w) {
  pending_.erase(std::remove(pending_.begin(), pending_.end(), w), pending_.end());
}

bool ActorCell::forceResumeIfIdle(const std::shared_ptr<OverrideWindow>& w, std::chrono::milliseconds timeout) {
  std::lock_guard lock(m_);
  if (window_ != w || !w->queue.empty()) return false;
  if (std::chrono::steady_clock::now() - w->lastActivity < timeout) return false;
  window_.reset();
  w->active = false;
  w->closed = true;
  w->forced = true;
  dropHolderLocked(w);
  scheduleLocked();
  return true;
}

}  // namespace detail

Runtime::Runtime(RuntimeOptions options)
    : options_(options),
      pool_(std::make_shared<detail::WorkerPool>(options.workers)),
      watchdog_(std::make_shared<detail::Watchdog>(options.overrideTimeout)) {}

Runtime::~Runtime() { shutdown(); }

void Runtime::shutdown() {
  watchdog_->stop();
  pool_->shutdown();
}

}  // namespace bestow::runtime
