#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "eplan/errors.hpp"
#include "eplan/formula.hpp"

namespace eplan {
namespace detail {

enum class TokKind { Ident, True, False, Next, Fin, Glob, Until, Not, And, Or, Implies, LParen, RParen, End };

struct Token {
  TokKind kind;
  std::string text;
  std::size_t pos;  // 1-based offset in the input
};

inline const char* token_name(TokKind k) {
  switch (k) {
    case TokKind::Ident: return "identifier";
    case TokKind::True: return "'true'";
    case TokKind::False: return "'false'";
    case TokKind::Next: return "'X'";
    case TokKind::Fin: return "'F'";
    case TokKind::Glob: return "'G'";
    case TokKind::Until: return "'U'";
    case TokKind::Not: return "'!'";
    case TokKind::And: return "'&'";
    case TokKind::Or: return "'|'";
    case TokKind::Implies: return "'->'";
    case TokKind::LParen: return "'('";
    case TokKind::RParen: return "')'";
    case TokKind::End: return "end of input";
  }
  return "?";
}

inline std::vector<Token> lex_formula(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { ++i; continue; }
    std::size_t pos = i + 1;
    if (is_word(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      TokKind k = TokKind::Ident;
      if (word == "true") k = TokKind::True;
      else if (word == "false") k = TokKind::False;
      else if (word == "X") k = TokKind::Next;
      else if (word == "F") k = TokKind::Fin;
      else if (word == "G") k = TokKind::Glob;
      else if (word == "U") k = TokKind::Until;
      out.push_back({k, std::move(word), pos});
      i = j;
      continue;
    }
    switch (c) {
      case '!': out.push_back({TokKind::Not, "!", pos}); ++i; break;
      case '&': out.push_back({TokKind::And, "&", pos}); ++i; break;
      case '|': out.push_back({TokKind::Or, "|", pos}); ++i; break;
      case '(': out.push_back({TokKind::LParen, "(", pos}); ++i; break;
      case ')': out.push_back({TokKind::RParen, ")", pos}); ++i; break;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({TokKind::Implies, "->", pos});
          i += 2;
          break;
        }
        throw SyntaxError("expected '->' after '-'", pos);
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({TokKind::End, "", text.size() + 1});
  return out;
}

// Recursive descent over: implies <- or <- and <- until <- unary <- primary.
// '->' and 'U' associate to the right; '&' and '|' to the left.
class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : toks_(lex_formula(text)) {}

  Formula parse() {
    Formula f = implies();
    expect(TokKind::End);
    return f;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  Token take() { return toks_[at_++]; }

  [[noreturn]] void fail(const std::string& want) {
    const Token& t = peek();
    std::string got = t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError("expected " + want + ", found " + got, t.pos);
  }

  void expect(TokKind k) {
    if (peek().kind != k) fail(token_name(k));
    ++at_;
  }

  Formula implies() {
    Formula lhs = disj();
    if (peek().kind == TokKind::Implies) {
      take();
      return Formula::implication(std::move(lhs), implies());
    }
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (peek().kind == TokKind::Or) {
      take();
      f = Formula::disjunction(std::move(f), conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = until();
    while (peek().kind == TokKind::And) {
      take();
      f = Formula::conjunction(std::move(f), until());
    }
    return f;
  }

  Formula until() {
    Formula lhs = unary();
    if (peek().kind == TokKind::Until) {
      take();
      return Formula::until(std::move(lhs), until());
    }
    return lhs;
  }

  Formula unary() {
    switch (peek().kind) {
      case TokKind::Not: take(); return Formula::negation(unary());
      case TokKind::Next: take(); return Formula::next(unary());
      case TokKind::Fin: take(); return Formula::eventually(unary());
      case TokKind::Glob: take(); return Formula::henceforth(unary());
      default: return primary();
    }
  }

  Formula primary() {
    switch (peek().kind) {
      case TokKind::True: take(); return Formula::tt();
      case TokKind::False: take(); return Formula::ff();
      case TokKind::Ident: return Formula::atom(take().text);
      case TokKind::LParen: {
        take();
        Formula f = implies();
        expect(TokKind::RParen);
        return f;
      }
      default: fail("a formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

}  // namespace detail

// Parses the ASCII formula syntax; throws SyntaxError with a 1-based
// character position on malformed input.
inline Formula parse_formula(std::string_view text) {
  return detail::FormulaParser(text).parse();
}

}  // namespace eplan
