#include "bestow/calculus/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <vector>

namespace bestow::calculus {

namespace {

struct Node {
  std::string atom;  ///< empty for lists
  std::vector<Node> items;
  bool isList() const { return atom.empty(); }
};

class Reader {
public:
  explicit Reader(std::string_view s) : s_(s) {}

  Node read() {
    Node n = node();
    skipSpace();
    if (i_ != s_.size()) throw SexprError("trailing input at offset " + std::to_string(i_));
    return n;
  }

private:
  void skipSpace() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  Node node() {
    skipSpace();
    if (i_ == s_.size()) throw SexprError("unexpected end of input");
    if (s_[i_] == ')') throw SexprError("unexpected ')' at offset " + std::to_string(i_));
    if (s_[i_] == '(') {
      ++i_;
      Node list;
      for (;;) {
        skipSpace();
        if (i_ == s_.size()) throw SexprError("unclosed '('");
        if (s_[i_] == ')') {
          ++i_;
          return list;
        }
        list.items.push_back(node());
      }
    }
    const std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')') ++i_;
    return Node{std::string(s_.substr(start, i_ - start)), {}};
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::uint32_t number(std::string_view digits, const std::string& whole) {
  std::uint32_t n = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || p != digits.data() + digits.size() || digits.empty()) {
    throw SexprError("bad number in '" + whole + "'");
  }
  return n;
}

class Builder {
public:
  std::uint32_t maxLoc = 0, maxId = 0;
  bool anyLoc = false, anyId = false;

  ActorId id(const std::string& a) {
    if (a.size() < 2 || a[0] != '#') throw SexprError("expected #n, got '" + a + "'");
    return noteId(number(std::string_view(a).substr(1), a));
  }

  Loc loc(const std::string& a) {
    if (a.size() < 2 || a[0] != '@') throw SexprError("expected @n, got '" + a + "'");
    return noteLoc(number(std::string_view(a).substr(1), a));
  }

  Type type(const Node& n) {
    if (!n.isList()) {
      if (n.atom == "p") return Type::passive();
      if (n.atom == "c") return Type::actor();
      if (n.atom == "Unit") return Type::unit();
      throw SexprError("unknown type '" + n.atom + "'");
    }
    if (n.items.size() == 2 && n.items[0].atom == "B" && n.items[1].atom == "p") return Type::bestowed();
    if (n.items.size() == 3 && n.items[0].atom == "->") return Type::arrow(type(n.items[1]), type(n.items[2]));
    throw SexprError("malformed type");
  }

  Value value(const Node& n) {
    if (!n.isList()) {
      const std::string& a = n.atom;
      if (a == "unit") return Value::unit();
      if (a[0] == '#') return id(a);
      if (a[0] == '@') {
        const auto hash = a.find('#');
        if (hash == std::string::npos) return loc(a);
        Loc l = noteLoc(number(std::string_view(a).substr(1, hash - 1), a));
        return BestowedLoc{l, noteId(number(std::string_view(a).substr(hash + 1), a))};
      }
      throw SexprError("expected a value, got '" + a + "'");
    }
    if (n.items.size() == 4 && n.items[0].atom == "fn" && !n.items[1].isList()) {
      return Lambda{n.items[1].atom, type(n.items[2]), expr(n.items[3])};
    }
    throw SexprError("expected a value");
  }

  Expr expr(const Node& n) {
    if (!n.isList()) {
      const std::string& a = n.atom;
      if (a == "unit" || a[0] == '#' || a[0] == '@') return Expr::val(value(n));
      return Expr::var(a);
    }
    if (n.items.empty() || n.items[0].isList()) throw SexprError("malformed expression");
    const std::string& head = n.items[0].atom;
    const std::size_t arity = n.items.size() - 1;
    auto need = [&](std::size_t k) {
      if (arity != k) throw SexprError("'" + head + "' takes " + std::to_string(k) + " arguments");
    };
    if (head == "app") {
      need(2);
      return Expr::app(expr(n.items[1]), expr(n.items[2]));
    }
    if (head == "send") {
      need(2);
      return Expr::send(expr(n.items[1]), value(n.items[2]));
    }
    if (head == "mutate") {
      need(1);
      return Expr::mutate(expr(n.items[1]));
    }
    if (head == "bestow") {
      need(1);
      return Expr::bestow(expr(n.items[1]));
    }
    if (head == "new") {
      need(1);
      if (n.items[1].atom == "p") return Expr::newPassive();
      if (n.items[1].atom == "c") return Expr::newActor();
      throw SexprError("new takes p or c");
    }
    if (head == "fn") return Expr::val(value(n));
    throw SexprError("unknown form '" + head + "'");
  }

  Actor actor(const Node& n, ActorId& idOut) {
    if (n.items.size() < 2 || n.items[0].atom != "actor") throw SexprError("expected (actor #n ...)");
    idOut = id(n.items[1].atom);
    Actor a{Loc{0}, {}, {}, Expr::unit(), std::nullopt};
    bool sawThis = false, sawExpr = false;
    for (std::size_t k = 2; k < n.items.size(); ++k) {
      const Node& f = n.items[k];
      if (!f.isList() || f.items.empty()) throw SexprError("malformed actor field");
      const std::string& tag = f.items[0].atom;
      if (tag == "this" && f.items.size() == 2) {
        a.thisLoc = loc(f.items[1].atom);
        sawThis = true;
      } else if (tag == "local") {
        for (std::size_t j = 1; j < f.items.size(); ++j) a.localHeap.insert(loc(f.items[j].atom));
      } else if (tag == "queue") {
        for (std::size_t j = 1; j < f.items.size(); ++j) {
          const Node& m = f.items[j];
          if (m.items.size() != 3 || m.items[0].atom != "msg") throw SexprError("expected (msg #s lambda)");
          a.queue.push_back(Message{value(m.items[2]), id(m.items[1].atom)});
        }
      } else if (tag == "expr" && f.items.size() == 2) {
        a.current = expr(f.items[1]);
        sawExpr = true;
      } else if (tag == "origin" && f.items.size() == 2) {
        a.origin = id(f.items[1].atom);
      } else {
        throw SexprError("unknown actor field '" + tag + "'");
      }
    }
    if (!sawThis || !sawExpr) throw SexprError("actor needs (this ...) and (expr ...)");
    return a;
  }

private:
  Loc noteLoc(std::uint32_t n) {
    maxLoc = std::max(maxLoc, n);
    anyLoc = true;
    return Loc{n};
  }
  ActorId noteId(std::uint32_t n) {
    maxId = std::max(maxId, n);
    anyId = true;
    return ActorId{n};
  }
};

}  // namespace

Expr readExpr(std::string_view text) {
  Builder b;
  return b.expr(Reader(text).read());
}

Type readType(std::string_view text) {
  Builder b;
  return b.type(Reader(text).read());
}

Heap readHeap(std::string_view text, QueueOrder order) {
  Node root = Reader(text).read();
  if (root.items.empty() || root.items[0].atom != "heap") throw SexprError("expected (heap ...)");
  Builder b;
  Heap h(order);
  for (std::size_t k = 1; k < root.items.size(); ++k) {
    ActorId id{};
    Actor a = b.actor(root.items[k], id);
    if (!h.actors().emplace(id, std::move(a)).second) throw SexprError("duplicate actor");
  }
  h.setCounters(b.anyLoc ? b.maxLoc + 1 : 0, b.anyId ? b.maxId + 1 : 0);
  return h;
}

}  // namespace bestow::calculus
