#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skinet/skillset.hpp"

namespace skinet {

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line(line),
        column(column) {}

  std::size_t line;
  std::size_t column;
};

namespace detail {

enum class Tok { Ident, Arrow, EqEq, NotEq, LBrace, RBrace, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Arrow: return "'->'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < src.size() && src[i + 1] == b; };
    if (two('-', '>')) {
      out.push_back({Tok::Arrow, "->", l, cl});
      advance(2);
    } else if (two('=', '=')) {
      out.push_back({Tok::EqEq, "==", l, cl});
      advance(2);
    } else if (two('!', '=')) {
      out.push_back({Tok::NotEq, "!=", l, cl});
      advance(2);
    } else if (c == '{') {
      out.push_back({Tok::LBrace, "{", l, cl});
      advance(1);
    } else if (c == '}') {
      out.push_back({Tok::RBrace, "}", l, cl});
      advance(1);
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", l, cl});
      advance(1);
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", l, cl});
      advance(1);
    } else {
      throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

inline bool is_operator_word(const std::string& w) {
  return w == "and" || w == "or" || w == "not" || w == "true";
}

// Recursive descent over the token stream. Keywords other than the boolean
// operators are contextual.
class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Skillset parse_skillset() {
    Skillset ss;
    expect_word("skillset");
    ss.name = identifier("skillset name");
    expect(Tok::LBrace, "after skillset name");
    while (!at(Tok::RBrace)) {
      if (at_word("resource")) {
        next();
        parse_resource_block(ss);
      } else if (at_word("event")) {
        next();
        parse_event_block(ss);
      } else if (at_word("skill")) {
        next();
        ss.skills.push_back(parse_skill());
      } else {
        fail("'resource', 'event', 'skill' or '}'");
      }
    }
    next();
    if (!at(Tok::End)) fail("end of input after the skillset");
    return ss;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(const char* w) const { return at(Tok::Ident) && peek().text == w; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::Ident ? "'" + t.text + "'" : describe(t.kind);
    throw ParseError(t.line, t.column, "expected " + expected + ", found " + found);
  }

  void expect(Tok kind, const std::string& context) {
    if (!at(kind)) fail(std::string(describe(kind)) + " " + context);
    next();
  }

  void expect_word(const char* w) {
    if (!at_word(w)) fail(std::string("'") + w + "'");
    next();
  }

  std::string identifier(const std::string& what) {
    if (!at(Tok::Ident) || is_operator_word(peek().text)) fail(what);
    return next().text;
  }

  void parse_resource_block(Skillset& ss) {
    expect(Tok::LBrace, "after 'resource'");
    do {
      ss.resources.push_back(parse_resource());
    } while (!at(Tok::RBrace));
    next();
  }

  Resource parse_resource() {
    Resource r;
    r.name = identifier("resource name");
    expect(Tok::LBrace, "after resource name");
    if (!at_word("initial")) fail("'initial' in resource '" + r.name + "'");
    next();
    auto intern = [&r](const std::string& s) {
      if (auto idx = r.state_index(s)) return *idx;
      r.states.push_back(s);
      return r.states.size() - 1;
    };
    r.initial = intern(identifier("initial state of resource '" + r.name + "'"));
    while (!at(Tok::RBrace)) {
      const std::size_t from = intern(identifier("state transition or '}' in resource '" + r.name + "'"));
      expect(Tok::Arrow, "in state transition of resource '" + r.name + "'");
      const std::size_t to = intern(identifier("destination state"));
      r.transitions.emplace_back(from, to);
    }
    next();
    return r;
  }

  void parse_event_block(Skillset& ss) {
    expect(Tok::LBrace, "after 'event'");
    do {
      Event ev;
      ev.name = identifier("event name");
      expect(Tok::LBrace, "after event name");
      bool guarded = false;
      while (!at(Tok::RBrace)) {
        if (at_word("guard")) {
          if (guarded) fail("a single 'guard' per event");
          next();
          ev.guard = parse_expr();
          guarded = true;
        } else if (at(Tok::LBrace)) {
          append(ev.effects, parse_effects());
        } else {
          ev.effects.push_back(parse_effect());
        }
      }
      next();
      ss.events.push_back(std::move(ev));
    } while (!at(Tok::RBrace));
    next();
  }

  Skill parse_skill() {
    Skill sk;
    sk.name = identifier("skill name");
    expect(Tok::LBrace, "after skill name");
    bool started = false;
    while (!at(Tok::RBrace)) {
      if (at_word("precondition")) {
        next();
        parse_named_guard_block(sk.preconditions);
      } else if (at_word("invariant")) {
        next();
        parse_named_guard_block(sk.invariants);
      } else if (at_word("start")) {
        if (started) fail("a single 'start' clause");
        next();
        sk.start_effects = parse_effects();
        started = true;
      } else if (at_word("interrupt")) {
        next();
        sk.interrupts.push_back(parse_effects());
      } else if (at_word("success") || at_word("failure")) {
        const bool success = peek().text == "success";
        next();
        Terminator t;
        t.name = identifier(success ? "success name" : "failure name");
        t.effects = parse_effects();
        (success ? sk.successes : sk.failures).push_back(std::move(t));
      } else if (at(Tok::Ident) && peek(1).kind == Tok::LBrace) {
        // A named guard written outside the precondition block.
        sk.preconditions.push_back(parse_named_guard());
      } else {
        fail("skill clause or '}' in skill '" + sk.name + "'");
      }
    }
    next();
    return sk;
  }

  void parse_named_guard_block(std::vector<NamedGuard>& into) {
    expect(Tok::LBrace, "to open the block");
    do {
      into.push_back(parse_named_guard());
    } while (!at(Tok::RBrace));
    next();
  }

  NamedGuard parse_named_guard() {
    NamedGuard ng;
    ng.name = identifier("guard name");
    expect(Tok::LBrace, "after guard name");
    expect_word("guard");
    ng.guard = parse_expr();
    if (at_word("effect")) {
      next();
      ng.failure_effects = parse_effects();
    }
    expect(Tok::RBrace, "to close '" + ng.name + "'");
    return ng;
  }

  EffectSet parse_effects() {
    if (!at(Tok::LBrace)) return {parse_effect()};
    next();
    EffectSet out;
    while (!at(Tok::RBrace)) out.push_back(parse_effect());
    next();
    return out;
  }

  Effect parse_effect() {
    Effect e;
    e.resource = identifier("effect ('resource -> State')");
    expect(Tok::Arrow, "in effect on '" + e.resource + "'");
    e.state = identifier("destination state");
    return e;
  }

  static void append(EffectSet& into, EffectSet more) {
    for (auto& e : more) into.push_back(std::move(e));
  }

  // expr := conj ("or" conj)* ; conj := unary ("and" unary)*
  Guard parse_expr() {
    std::vector<Guard> parts{parse_conj()};
    while (at_word("or")) {
      next();
      parts.push_back(parse_conj());
    }
    return Guard::any_of(std::move(parts));
  }

  Guard parse_conj() {
    std::vector<Guard> parts{parse_unary()};
    while (at_word("and")) {
      next();
      parts.push_back(parse_unary());
    }
    return Guard::all_of(std::move(parts));
  }

  Guard parse_unary() {
    if (at_word("not")) {
      next();
      return Guard::negate(parse_unary());
    }
    if (at_word("true")) {
      next();
      return Guard::truth();
    }
    if (at(Tok::LParen)) {
      next();
      Guard g = parse_expr();
      expect(Tok::RParen, "to close '('");
      return g;
    }
    std::string resource = identifier("guard atom ('resource == State')");
    if (at(Tok::EqEq)) {
      next();
      return Guard::atom(std::move(resource), identifier("state name"));
    }
    if (at(Tok::NotEq)) {
      next();
      return Guard::negate(Guard::atom(std::move(resource), identifier("state name")));
    }
    fail("'==' or '!=' after '" + resource + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Skillset parse_skillset(std::string_view source) {
  return detail::Parser(source).parse_skillset();
}

}  // namespace skinet
