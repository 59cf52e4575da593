#include "bestow/examples/list_iterator.hpp"

#include <functional>
#include <thread>

namespace bestow::examples {

using runtime::BestowedRef;

void LinkedList::append(int v) {
  auto node = std::make_unique<Node>();
  node->value = v;
  Node* raw = node.get();
  if (tail_) {
    tail_->next = std::move(node);
  } else {
    head_ = std::move(node);
  }
  tail_ = raw;
  ++size_;
}

int LinkedList::get(std::size_t index) {
  Node* n = head_.get();
  countHop();
  for (std::size_t i = 0; i < index; ++i) {
    n = n->next.get();
    countHop();
  }
  return n->value;
}

std::optional<int> ListIterator::getNext() {
  if (!current_) return std::nullopt;
  list_->countHop();
  const int v = current_->value;
  current_ = current_->next.get();
  return v;
}

std::optional<Mode> parseMode(const std::string& s) {
  if (s == "get") return Mode::Get;
  if (s == "bestowed-iterator") return Mode::BestowedIterator;
  if (s == "atomic-pairs") return Mode::AtomicPairs;
  return std::nullopt;
}

std::string modeName(Mode m) {
  switch (m) {
    case Mode::Get: return "get";
    case Mode::BestowedIterator: return "bestowed-iterator";
    case Mode::AtomicPairs: return "atomic-pairs";
  }
  return "?";
}

namespace {

std::vector<int> readByIndex(const runtime::ActorRef<ListState>& list, std::size_t m) {
  std::vector<int> out;
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back(list
                      .perform([i](ListState& s) {
                        runtime::record("get");
                        return s.list.get(i);
                      })
                      .get());
  }
  return out;
}

BestowedRef<ListIterator> openIterator(const runtime::ActorRef<ListState>& list) {
  return list
      .perform([](ListState& s) {
        runtime::record("iterator");
        s.iterators.push_back(std::make_unique<ListIterator>(s.list));
        return runtime::bestow(*s.iterators.back());
      })
      .get();
}

std::vector<int> readByIterator(const runtime::ActorRef<ListState>& list) {
  auto it = openIterator(list);
  std::vector<int> out;
  for (;;) {
    auto v = it.send([](ListIterator& i) {
                 runtime::record("next");
                 return i.getNext();
               })
                 .get();
    if (!v) break;
    out.push_back(*v);
  }
  return out;
}

std::vector<int> readByPairs(const runtime::ActorRef<ListState>& list) {
  auto it = openIterator(list);
  using Op = std::function<std::optional<int>(ListIterator&)>;
  const Op next = [](ListIterator& i) {
    if (!i.hasNext()) return std::optional<int>{};
    runtime::record("pair-next");
    return i.getNext();
  };
  std::vector<int> out;
  for (;;) {
    auto pair = runtime::atomicBatch(it, std::vector<Op>{next, next}).get();
    for (const auto& v : pair) {
      if (v) out.push_back(*v);
    }
    if (!pair[1]) break;
  }
  return out;
}

}  // namespace

ListRunReport runListIterator(const ListRunOptions& options) {
  runtime::RuntimeOptions ro;
  ro.workers = options.workers;
  runtime::Runtime rt(ro);

  ListState initial;
  for (std::size_t i = 0; i < options.elements; ++i) initial.list.append(static_cast<int>(i));
  auto list = rt.spawn(std::move(initial));
  list.perform([id = list.id()](ListState& s) { s.list.probe().setOwner(id); }).get();

  ListRunReport report;
  report.options = options;
  report.owner = list.id();
  report.clients.resize(options.clients);

  std::vector<std::thread> threads;
  for (unsigned c = 0; c < options.clients; ++c) {
    threads.emplace_back([&, c] {
      ClientResult& r = report.clients[c];
      r.id = runtime::currentSenderId();
      switch (options.mode) {
        case Mode::Get: r.values = readByIndex(list, options.elements); break;
        case Mode::BestowedIterator: r.values = readByIterator(list); break;
        case Mode::AtomicPairs: r.values = readByPairs(list); break;
      }
    });
  }
  for (auto& t : threads) t.join();

  auto stats = list
                   .perform([](ListState& s) {
                     return std::pair{s.list.hops(), s.list.probe().offOwner()};
                   })
                   .get();
  report.hops = stats.first;
  report.offOwnerAccesses = stats.second;
  report.ownerTrace = list.trace().get();
  report.messages = list.processed();
  return report;
}

bool ListRunReport::valuesInOrder() const {
  for (const auto& c : clients) {
    if (c.values.size() != options.elements) return false;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      if (c.values[i] != static_cast<int>(i)) return false;
    }
  }
  return true;
}

bool ListRunReport::pairsAdjacent() const {
  // Both reads of a batch share one turn, so within a turn the pair-next
  // records must be consecutive and no other record may separate them.
  for (std::size_t i = 0; i < ownerTrace.size(); ++i) {
    if (ownerTrace[i].label != "pair-next") continue;
    std::size_t j = i + 1;
    if (j < ownerTrace.size() && ownerTrace[j].turn == ownerTrace[i].turn) {
      if (ownerTrace[j].label != "pair-next") return false;
      i = j;
    }
  }
  return true;
}

nlohmann::json ListRunReport::toJson(bool withTrace) const {
  nlohmann::json j;
  j["mode"] = modeName(options.mode);
  j["clients"] = options.clients;
  j["elements"] = options.elements;
  j["owner"] = owner;
  j["hops"] = hops;
  j["hops_per_client"] = options.clients ? hops / options.clients : 0;
  j["expected_get_hops_per_client"] = expectedGetHops(options.elements);
  j["messages"] = messages;
  j["off_owner_accesses"] = offOwnerAccesses;
  j["values_in_order"] = valuesInOrder();
  if (options.mode == Mode::AtomicPairs) j["pairs_adjacent"] = pairsAdjacent();
  if (withTrace) {
    auto& t = j["owner_trace"] = nlohmann::json::array();
    for (const auto& r : ownerTrace) t.push_back({{"turn", r.turn}, {"sender", r.sender}, {"label", r.label}});
  }
  return j;
}

}  // namespace bestow::examples
