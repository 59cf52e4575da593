#include "bestow/calculus/heap.hpp"

#include <stdexcept>

namespace bestow::calculus {

Actor& Heap::at(ActorId id) {
  auto it = actors_.find(id);
  if (it == actors_.end()) throw std::out_of_range("no actor #" + std::to_string(raw(id)));
  return it->second;
}

const Actor& Heap::at(ActorId id) const {
  auto it = actors_.find(id);
  if (it == actors_.end()) throw std::out_of_range("no actor #" + std::to_string(raw(id)));
  return it->second;
}

ActorId Heap::spawn(Expr initial, std::optional<ActorId> origin) {
  const ActorId id = freshId();
  const Loc self = freshLoc();
  actors_.emplace(id, Actor{self, {self}, {}, std::move(initial), origin});
  return id;
}

Heap initialHeap(const Expr& program, QueueOrder order) {
  Heap h(order);
  h.spawn(program);
  return h;
}

std::string toSexpr(const Actor& a) {
  std::string s = "(this @" + std::to_string(raw(a.thisLoc)) + ") (local";
  for (Loc l : a.localHeap) s += " @" + std::to_string(raw(l));
  s += ") (queue";
  for (const Message& m : a.queue) s += " (msg #" + std::to_string(raw(m.sender)) + " " + toSexpr(m.lambda) + ")";
  s += ") (expr " + toSexpr(a.current) + ")";
  if (a.origin) s += " (origin #" + std::to_string(raw(*a.origin)) + ")";
  return s;
}

std::string toSexpr(const Heap& h) {
  std::string s = "(heap";
  for (const auto& [id, actor] : h.actors()) {
    s += " (actor #" + std::to_string(raw(id)) + " " + toSexpr(actor) + ")";
  }
  return s + ")";
}

}  // namespace bestow::calculus
