#include "bestow/surface/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>

namespace bestow::surface {

namespace {

enum class Tok {
  Ident,
  KwVal,
  KwAtomic,
  KwNew,
  KwBestow,
  Backslash,  // \ or λ
  Colon,
  Dot,
  Bang,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semi,
  Equals,
  LArrow,  // <-
  Arrow,   // ->
  Dynamic,  // #3, @2
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Position pos;
  bool newlineBefore = false;
};

struct ParseError {
  Diagnostic diag;
};

[[noreturn]] void error(Position pos, std::string msg) { throw ParseError{{pos, Severity::Error, std::move(msg)}}; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  Position pos;
  bool newline = true;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++pos.column;
      }
    }
  };
  auto push = [&](Tok k, std::string text, Position at) {
    out.push_back(Token{k, std::move(text), at, newline});
    newline = false;
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      newline = true;
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const Position at = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word(src.substr(i, j - i));
      Tok k = Tok::Ident;
      if (word == "val") k = Tok::KwVal;
      else if (word == "atomic") k = Tok::KwAtomic;
      else if (word == "new") k = Tok::KwNew;
      else if (word == "bestow") k = Tok::KwBestow;
      push(k, word, at);
      advance(j - i);
      continue;
    }
    if ((c == '#' || c == '@') && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
      std::size_t j = i + 1;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '#')) ++j;
      push(Tok::Dynamic, std::string(src.substr(i, j - i)), at);
      advance(j - i);
      continue;
    }
    if (src.substr(i, 2) == "\xCE\xBB") {  // λ
      push(Tok::Backslash, "\\", at);
      advance(2);
      continue;
    }
    if (src.substr(i, 2) == "<-") {
      push(Tok::LArrow, "<-", at);
      advance(2);
      continue;
    }
    if (src.substr(i, 2) == "->") {
      push(Tok::Arrow, "->", at);
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '\\': k = Tok::Backslash; break;
      case ':': k = Tok::Colon; break;
      case '.': k = Tok::Dot; break;
      case '!': k = Tok::Bang; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case ';': k = Tok::Semi; break;
      case '=': k = Tok::Equals; break;
      default: error(at, std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c), at);
    advance(1);
  }
  out.push_back(Token{Tok::End, "", pos, true});
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SurfaceProgram program() {
    SurfaceProgram p;
    p.stmts = stmts(Tok::End);
    expect(Tok::End, "end of input");
    return p;
  }

private:
  const Token& peek() const { return toks_[i_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token next() { return toks_[i_++]; }

  Token expect(Tok k, const char* what) {
    if (!at(k)) {
      if (at(Tok::End)) error(peek().pos, std::string("unexpected end of input, expected ") + what);
      error(peek().pos, std::string("expected ") + what + ", found '" + peek().text + "'");
    }
    return next();
  }

  /// Newlines separate statements unless inside parentheses.
  bool continues() const { return parens_ > 0 || !peek().newlineBefore; }

  template <class Node>
  SExprPtr make(Position pos, Node n) {
    return std::make_shared<const SExpr>(SExpr{pos, std::move(n)});
  }

  std::vector<Stmt> stmts(Tok closer) {
    std::vector<Stmt> out;
    const int savedParens = parens_;
    parens_ = 0;
    while (!at(closer) && !at(Tok::End)) {
      if (at(Tok::Semi)) {
        next();
        continue;
      }
      if (!out.empty() && !peek().newlineBefore && !(toks_[i_ - 1].kind == Tok::Semi)) {
        error(peek().pos, "expected ';' or newline between statements, found '" + peek().text + "'");
      }
      out.push_back(stmt());
    }
    parens_ = savedParens;
    return out;
  }

  Stmt stmt() {
    const Position pos = peek().pos;
    if (at(Tok::KwVal)) {
      next();
      std::string name = expect(Tok::Ident, "a name after 'val'").text;
      expect(Tok::Equals, "'='");
      return Stmt{pos, st::Val{std::move(name), expr()}};
    }
    if (at(Tok::KwAtomic)) {
      next();
      std::string name = expect(Tok::Ident, "a name after 'atomic'").text;
      expect(Tok::LArrow, "'<-'");
      noBraceArg_ = true;
      SExprPtr target = expr();
      noBraceArg_ = false;
      const Position open = expect(Tok::LBrace, "'{' to open the atomic block").pos;
      std::vector<Stmt> body = stmts(Tok::RBrace);
      if (!at(Tok::RBrace)) error(open, "unbalanced '{': atomic block is never closed");
      next();
      return Stmt{pos, st::Atomic{std::move(name), std::move(target), std::move(body)}};
    }
    return Stmt{pos, st::Expr{expr()}};
  }

  SExprPtr expr() {
    const Position pos = peek().pos;
    if (at(Tok::Backslash)) return lambda();
    if (at(Tok::KwBestow)) {
      next();
      return make(pos, sx::Bestow{expr()});
    }
    return send();
  }

  SExprPtr lambda() {
    const Position pos = expect(Tok::Backslash, "'\\'").pos;
    std::string param = expect(Tok::Ident, "a parameter name").text;
    expect(Tok::Colon, "':' after the parameter");
    calculus::Type t = type();
    expect(Tok::Dot, "'.' after the parameter type");
    return make(pos, sx::Lambda{std::move(param), std::move(t), expr()});
  }

  calculus::Type type() {
    calculus::Type dom = typeAtom();
    if (at(Tok::Arrow)) {
      next();
      return calculus::Type::arrow(std::move(dom), type());
    }
    return dom;
  }

  calculus::Type typeAtom() {
    if (at(Tok::LParen)) {
      next();
      calculus::Type t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    const Token t = expect(Tok::Ident, "a type");
    if (t.text == "p") return calculus::Type::passive();
    if (t.text == "c") return calculus::Type::actor();
    if (t.text == "Unit") return calculus::Type::unit();
    if (t.text == "B") {
      expect(Tok::LParen, "'(' after B");
      const Token inner = expect(Tok::Ident, "'p'");
      if (inner.text != "p") error(inner.pos, "only B(p) is a bestowed type");
      expect(Tok::RParen, "')'");
      return calculus::Type::bestowed();
    }
    error(t.pos, "unknown type '" + t.text + "'");
  }

  SExprPtr send() {
    SExprPtr e = app();
    while (at(Tok::Bang) && continues()) {
      const Position pos = next().pos;
      e = make(pos, sx::Send{e, message()});
    }
    return e;
  }

  SExprPtr message() {
    if (at(Tok::Backslash)) return lambda();
    return atom();
  }

  bool startsAtom() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::LParen:
      case Tok::KwNew:
      case Tok::Dynamic: return true;
      case Tok::LBrace: return !noBraceArg_;
      default: return false;
    }
  }

  SExprPtr app() {
    SExprPtr e = postfix();
    while (startsAtom() && continues()) {
      const Position pos = peek().pos;
      e = make(pos, sx::App{e, postfix()});
    }
    return e;
  }

  SExprPtr postfix() {
    SExprPtr e = atom();
    while (at(Tok::Dot) && continues()) {
      const Position pos = next().pos;
      const Token m = expect(Tok::Ident, "'mutate'");
      if (m.text != "mutate") error(m.pos, "unknown operation '" + m.text + "', only mutate() is supported");
      expect(Tok::LParen, "'('");
      expect(Tok::RParen, "')'");
      e = make(pos, sx::Mutate{e});
    }
    return e;
  }

  SExprPtr atom() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Ident: next(); return make(t.pos, sx::Name{t.text});
      case Tok::Dynamic: error(t.pos, "runtime value '" + t.text + "' cannot appear in source");
      case Tok::KwNew: {
        next();
        const Token k = expect(Tok::Ident, "'p' or 'c' after new");
        if (k.text != "p" && k.text != "c") error(k.pos, "can only create 'new p' or 'new c'");
        return make(t.pos, sx::New{k.text == "c"});
      }
      case Tok::LParen: {
        next();
        if (at(Tok::RParen)) {
          next();
          return make(t.pos, sx::Unit{});
        }
        ++parens_;
        const bool savedNoBrace = noBraceArg_;
        noBraceArg_ = false;
        SExprPtr inner = expr();
        noBraceArg_ = savedNoBrace;
        --parens_;
        if (!at(Tok::RParen)) error(peek().pos, "expected ')' to close '(' opened at " + std::to_string(t.pos.line) + ":" + std::to_string(t.pos.column));
        next();
        return inner;
      }
      case Tok::LBrace: {
        next();
        const bool savedNoBrace = noBraceArg_;
        noBraceArg_ = false;
        std::vector<Stmt> body = stmts(Tok::RBrace);
        noBraceArg_ = savedNoBrace;
        if (!at(Tok::RBrace)) error(t.pos, "unbalanced '{': block is never closed");
        next();
        return make(t.pos, sx::Block{std::move(body)});
      }
      case Tok::RBrace: error(t.pos, "unbalanced '}'");
      case Tok::End: error(t.pos, "unexpected end of input, expected an expression");
      default: error(t.pos, "expected an expression, found '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  int parens_ = 0;
  bool noBraceArg_ = false;
};

// All names must be bound before use.
class ScopeChecker {
public:
  std::vector<Diagnostic> diags;

  void stmts(const std::vector<Stmt>& ss, std::vector<std::string>& scope) {
    const std::size_t mark = scope.size();
    for (const Stmt& s : ss) {
      if (auto* v = std::get_if<st::Val>(&s.node)) {
        expr(*v->rhs, scope);
        scope.push_back(v->name);
      } else if (auto* a = std::get_if<st::Atomic>(&s.node)) {
        expr(*a->target, scope);
        scope.push_back(a->name);
        stmts(a->body, scope);
        scope.pop_back();
      } else {
        expr(*std::get<st::Expr>(s.node).expr, scope);
      }
    }
    scope.resize(mark);
  }

  void expr(const SExpr& e, std::vector<std::string>& scope) {
    if (auto* n = std::get_if<sx::Name>(&e.node)) {
      if (std::find(scope.begin(), scope.end(), n->id) == scope.end()) {
        diags.push_back({e.pos, Severity::Error, "unbound name '" + n->id + "'"});
      }
    } else if (auto* a = std::get_if<sx::App>(&e.node)) {
      expr(*a->fun, scope);
      expr(*a->arg, scope);
    } else if (auto* s = std::get_if<sx::Send>(&e.node)) {
      expr(*s->target, scope);
      expr(*s->msg, scope);
    } else if (auto* m = std::get_if<sx::Mutate>(&e.node)) {
      expr(*m->target, scope);
    } else if (auto* b = std::get_if<sx::Bestow>(&e.node)) {
      expr(*b->inner, scope);
    } else if (auto* l = std::get_if<sx::Lambda>(&e.node)) {
      scope.push_back(l->param);
      expr(*l->body, scope);
      scope.pop_back();
    } else if (auto* blk = std::get_if<sx::Block>(&e.node)) {
      stmts(blk->stmts, scope);
    }
  }
};

}  // namespace

std::variant<SurfaceProgram, std::vector<Diagnostic>> parse(std::string_view source) {
  try {
    SurfaceProgram p = Parser(lex(source)).program();
    ScopeChecker scopes;
    std::vector<std::string> scope;
    scopes.stmts(p.stmts, scope);
    if (!scopes.diags.empty()) return scopes.diags;
    return p;
  } catch (const ParseError& e) {
    return std::vector<Diagnostic>{e.diag};
  }
}

}  // namespace bestow::surface
