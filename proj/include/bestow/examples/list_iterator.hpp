#pragma once

// The linked list and iterator example, run on the actor runtime.
//
// A list actor owns a singly linked list. Clients read it either by index
// (each get walks from the head), through a bestowed iterator (each step
// relays one getNext to the list actor), or through a bestowed iterator
// with reads batched in pairs. Node hops are counted to compare the modes.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bestow/runtime/runtime.hpp"

namespace bestow::examples {

struct Node {
  int value = 0;
  std::unique_ptr<Node> next;
};

class LinkedList {
public:
  void append(int v);
  /// Walks from the head, visiting index + 1 nodes.
  int get(std::size_t index);
  std::size_t size() const { return size_; }
  Node* head() const { return head_.get(); }

  void countHop() {
    ++hops_;
    probe_.touch();
  }
  std::uint64_t hops() const { return hops_; }
  runtime::ConfinementProbe& probe() { return probe_; }

private:
  std::unique_ptr<Node> head_;
  Node* tail_ = nullptr;
  std::size_t size_ = 0;
  std::uint64_t hops_ = 0;
  runtime::ConfinementProbe probe_;
};

class ListIterator {
public:
  explicit ListIterator(LinkedList& list) : list_(&list), current_(list.head()) {}
  bool hasNext() const { return current_ != nullptr; }
  /// One hop: reads the current node and advances.
  std::optional<int> getNext();

private:
  LinkedList* list_;
  Node* current_;
};

struct ListState {
  LinkedList list;
  std::vector<std::unique_ptr<ListIterator>> iterators;
};

enum class Mode { Get, BestowedIterator, AtomicPairs };

std::optional<Mode> parseMode(const std::string& s);
std::string modeName(Mode m);

struct ListRunOptions {
  unsigned clients = 1;
  std::size_t elements = 10;
  Mode mode = Mode::Get;
  unsigned workers = 0;
};

struct ClientResult {
  runtime::Ident id = 0;
  std::vector<int> values;
};

struct ListRunReport {
  ListRunOptions options;
  std::uint64_t hops = 0;
  std::uint64_t messages = 0;
  std::uint64_t offOwnerAccesses = 0;
  std::vector<ClientResult> clients;
  std::vector<runtime::TraceRecord> ownerTrace;
  runtime::Ident owner = 0;

  /// Every client saw 0..M-1 in order.
  bool valuesInOrder() const;
  /// In atomic-pairs mode, every pair of reads is adjacent in the owner trace.
  bool pairsAdjacent() const;

  nlohmann::json toJson(bool withTrace) const;
};

/// Hops for get-based iteration over M elements: sum of (i + 1).
constexpr std::uint64_t expectedGetHops(std::uint64_t m) { return m * (m - 1) / 2 + m; }

ListRunReport runListIterator(const ListRunOptions& options);

}  // namespace bestow::examples
