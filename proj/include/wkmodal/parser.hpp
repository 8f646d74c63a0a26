#pragma once

#include <cctype>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"

// Concrete syntax, loosest to tightest binding:
//   <->  ===        left associative
//   ->              right associative
//   |               left associative
//   &               left associative
//   ~ J0 J1 J2 + [] <>   prefix
//   0 1 identifiers ?metavariables ( ... )
// The Unicode forms ¬ ∨ ∧ → ↔ ≡ □ ◇ are accepted as synonyms.

namespace wkmodal {

namespace detail {

enum class Tok { end, ident, meta, zero, one, lparen, rparen, neg, disj, conj, imp, iff, equiv, j0, j1, j2, plus, box, dia };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

inline std::vector<Token> tokenize(std::string_view s) {
  struct Utf8Op {
    std::string_view bytes;
    Tok kind;
  };
  static constexpr Utf8Op utf8_ops[] = {
      {"\xC2\xAC", Tok::neg},      {"\xE2\x88\xA8", Tok::disj}, {"\xE2\x88\xA7", Tok::conj},
      {"\xE2\x86\x92", Tok::imp},  {"\xE2\x86\x94", Tok::iff},  {"\xE2\x89\xA1", Tok::equiv},
      {"\xE2\x96\xA1", Tok::box},  {"\xE2\x97\x87", Tok::dia},
  };

  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t pos = i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word(s.substr(i, j - i));
      i = j;
      Tok kind = Tok::ident;
      if (word == "J0") kind = Tok::j0;
      else if (word == "J1") kind = Tok::j1;
      else if (word == "J2") kind = Tok::j2;
      out.push_back({kind, pos, std::move(word)});
      continue;
    }
    if (c == '?') {
      std::size_t j = i + 1;
      if (j >= s.size() || !ident_start(s[j])) throw ParseError(pos, "expected metavariable name after '?'");
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::meta, pos, std::string(s.substr(i, j - i))});
      i = j;
      continue;
    }
    if (starts("<->")) { out.push_back({Tok::iff, pos, "<->"}); i += 3; continue; }
    if (starts("===")) { out.push_back({Tok::equiv, pos, "==="}); i += 3; continue; }
    if (starts("->")) { out.push_back({Tok::imp, pos, "->"}); i += 2; continue; }
    if (starts("[]")) { out.push_back({Tok::box, pos, "[]"}); i += 2; continue; }
    if (starts("<>")) { out.push_back({Tok::dia, pos, "<>"}); i += 2; continue; }
    switch (c) {
      case '0': out.push_back({Tok::zero, pos, "0"}); ++i; continue;
      case '1': out.push_back({Tok::one, pos, "1"}); ++i; continue;
      case '(': out.push_back({Tok::lparen, pos, "("}); ++i; continue;
      case ')': out.push_back({Tok::rparen, pos, ")"}); ++i; continue;
      case '~': out.push_back({Tok::neg, pos, "~"}); ++i; continue;
      case '|': out.push_back({Tok::disj, pos, "|"}); ++i; continue;
      case '&': out.push_back({Tok::conj, pos, "&"}); ++i; continue;
      case '+': out.push_back({Tok::plus, pos, "+"}); ++i; continue;
      default: break;
    }
    bool matched = false;
    for (const auto& op : utf8_ops) {
      if (starts(op.bytes)) {
        out.push_back({op.kind, pos, std::string(op.bytes)});
        i += op.bytes.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, s.size(), ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Formula parse_all() {
    Formula f = equivalence();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  Token next() { return toks_[at_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    if (peek().kind == Tok::end) throw ParseError(peek().pos, "unexpected end of input");
    throw ParseError(peek().pos, msg);
  }

  Formula equivalence() {
    Formula lhs = implication();
    while (peek().kind == Tok::iff || peek().kind == Tok::equiv) {
      Tok k = next().kind;
      Formula rhs = implication();
      lhs = k == Tok::iff ? Formula::iff(lhs, rhs) : Formula::equiv(lhs, rhs);
    }
    return lhs;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::imp) {
      next();
      return Formula::imp(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (peek().kind == Tok::disj) {
      next();
      lhs = Formula::disj(lhs, conjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = prefix();
    while (peek().kind == Tok::conj) {
      next();
      lhs = Formula::conj(lhs, prefix());
    }
    return lhs;
  }

  Formula prefix() {
    switch (peek().kind) {
      case Tok::neg: next(); return Formula::neg(prefix());
      case Tok::j0: next(); return Formula::j0(prefix());
      case Tok::j1: next(); return Formula::j1(prefix());
      case Tok::j2: next(); return Formula::j2(prefix());
      case Tok::plus: next(); return Formula::plus(prefix());
      case Tok::box: next(); return Formula::box(prefix());
      case Tok::dia: next(); return Formula::dia(prefix());
      default: return atom();
    }
  }

  Formula atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::zero: next(); return Formula::zero();
      case Tok::one: next(); return Formula::one();
      case Tok::ident:
      case Tok::meta: return Formula::var(next().text);
      case Tok::lparen: {
        next();
        Formula f = equivalence();
        if (peek().kind != Tok::rparen) fail("expected ')'");
        next();
        return f;
      }
      default: fail("expected a formula, found '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

// 1: <-> ===, 2: ->, 3: |, 4: &, 5: prefix, 6: atom
inline int precedence(Op op) {
  switch (op) {
    case Op::iff:
    case Op::equiv:
      return 1;
    case Op::imp:
      return 2;
    case Op::disj:
      return 3;
    case Op::conj:
      return 4;
    case Op::var:
    case Op::zero:
    case Op::one:
      return 6;
    default:
      return 5;
  }
}

inline void print(std::string& out, const Formula& f) {
  auto wrapped = [&](const Formula& g, bool parens) {
    if (parens) out += '(';
    print(out, g);
    if (parens) out += ')';
  };
  switch (f.op()) {
    case Op::var: out += f.name(); return;
    case Op::zero: out += '0'; return;
    case Op::one: out += '1'; return;
    default: break;
  }
  int level = precedence(f.op());
  if (arity(f.op()) == 1) {
    bool parens = precedence(f.arg(0).op()) < 5;
    switch (f.op()) {
      case Op::neg: out += "~"; break;
      case Op::plus: out += "+"; break;
      case Op::box: out += "[]"; break;
      case Op::dia: out += "<>"; break;
      case Op::j0: out += parens ? "J0" : "J0 "; break;
      case Op::j1: out += parens ? "J1" : "J1 "; break;
      case Op::j2: out += parens ? "J2" : "J2 "; break;
      default: break;
    }
    wrapped(f.arg(0), parens);
    return;
  }
  std::string_view sym;
  switch (f.op()) {
    case Op::iff: sym = " <-> "; break;
    case Op::equiv: sym = " === "; break;
    case Op::imp: sym = " -> "; break;
    case Op::disj: sym = " | "; break;
    default: sym = " & "; break;
  }
  int l = precedence(f.arg(0).op());
  int r = precedence(f.arg(1).op());
  bool right_assoc = f.op() == Op::imp;
  wrapped(f.arg(0), right_assoc ? l <= level : l < level);
  out += sym;
  wrapped(f.arg(1), right_assoc ? r < level : r <= level);
}

}  // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print(out, f);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

}  // namespace wkmodal
