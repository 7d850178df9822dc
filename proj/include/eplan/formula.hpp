#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eplan/errors.hpp"

namespace eplan {

inline bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

// Atomic proposition. Equality is by name; names are case-sensitive tokens
// over [a-zA-Z0-9_].
class Proposition {
 public:
  explicit Proposition(std::string name) : name_(std::move(name)) {
    if (!is_identifier(name_))
      throw Error("invalid proposition name: '" + name_ + "'");
  }

  const std::string& name() const { return name_; }

  friend bool operator==(const Proposition& a, const Proposition& b) { return a.name_ == b.name_; }
  friend auto operator<=>(const Proposition& a, const Proposition& b) { return a.name_ <=> b.name_; }
  friend std::ostream& operator<<(std::ostream& os, const Proposition& p) { return os << p.name_; }

 private:
  std::string name_;
};

// Proposition reserved for desugaring the boolean constants; user domains
// must not declare it.
inline constexpr std::string_view kReservedTopName = "__top";

// Immutable LTLf formula tree. Atom/Not/And/Next/Until form the core
// grammar; True/False/Or/Implies/Eventually/Henceforth are first-class
// abbreviations that `desugar` rewrites away. Copies share structure.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    Atom,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Eventually,
    Henceforth,
  };

  static Formula atom(Proposition p) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->prop = std::move(p);
    return Formula(std::move(n));
  }
  static Formula atom(std::string name) { return atom(Proposition(std::move(name))); }
  static Formula tt() { return leaf(Kind::True); }
  static Formula ff() { return leaf(Kind::False); }
  static Formula negation(Formula f) { return unary(Kind::Not, std::move(f)); }
  static Formula conjunction(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static Formula disjunction(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
  static Formula implication(Formula a, Formula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }
  static Formula next(Formula f) { return unary(Kind::Next, std::move(f)); }
  static Formula until(Formula a, Formula b) { return binary(Kind::Until, std::move(a), std::move(b)); }
  static Formula eventually(Formula f) { return unary(Kind::Eventually, std::move(f)); }
  static Formula henceforth(Formula f) { return unary(Kind::Henceforth, std::move(f)); }

  Kind kind() const { return node_->kind; }

  // Atom payload; valid only when kind() == Kind::Atom.
  const Proposition& prop() const { return *node_->prop; }

  // left()/right() for binary nodes; child() for unary nodes.
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }
  Formula child() const { return Formula(node_->lhs); }

  // Number of AST nodes (>= 1).
  std::size_t size() const { return node_->size; }

  // Stable address of the shared node; usable as a memoization key for the
  // lifetime of any copy of this formula.
  const void* identity() const { return node_.get(); }

  // True when the formula contains no temporal operator.
  bool is_propositional() const { return node_->propositional; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    return compare(a, b) == 0;
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  // Structural total order: by size, then kind, then atom name, then
  // children left to right.
  static int compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    if (a.kind() == Kind::Atom) {
      int c = a.prop().name().compare(b.prop().name());
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    if (!a.node_->lhs) return 0;  // leaves: True/False
    if (int c = compare(a.left(), b.left()); c != 0) return c;
    if (!a.node_->rhs) return 0;
    return compare(a.right(), b.right());
  }

  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind = Kind::True;
    std::optional<Proposition> prop;
    NodePtr lhs;
    NodePtr rhs;
    std::size_t size = 1;
    bool propositional = true;
  };

  explicit Formula(NodePtr node) : node_(std::move(node)) {}

  static Formula leaf(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return Formula(std::move(n));
  }
  static Formula unary(Kind k, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->size = 1 + f.size();
    n->propositional = (k == Kind::Not) && f.is_propositional();
    n->lhs = std::move(f.node_);
    return Formula(std::move(n));
  }
  static Formula binary(Kind k, Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->size = 1 + a.size() + b.size();
    n->propositional = (k == Kind::And || k == Kind::Or || k == Kind::Implies) &&
                       a.is_propositional() && b.is_propositional();
    n->lhs = std::move(a.node_);
    n->rhs = std::move(b.node_);
    return Formula(std::move(n));
  }

  NodePtr node_;
};

inline Formula operator!(Formula f) { return Formula::negation(std::move(f)); }
inline Formula operator&&(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }
inline Formula operator||(Formula a, Formula b) { return Formula::disjunction(std::move(a), std::move(b)); }

// Rewrites a formula into the core grammar {Atom, Not, And, Next, Until}.
// True becomes (r | !r) over the reserved proposition and the derived
// operators unfold as G f = !(true U !f), F f = !G !f; the sugar introduced
// by those steps is desugared in turn.
inline Formula desugar(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      return f;
    case K::True: {
      Formula r = Formula::atom(std::string(kReservedTopName));
      return Formula::negation(Formula::conjunction(Formula::negation(r), Formula::negation(Formula::negation(r))));
    }
    case K::False:
      return Formula::negation(desugar(Formula::tt()));
    case K::Not:
      return Formula::negation(desugar(f.child()));
    case K::And:
      return Formula::conjunction(desugar(f.left()), desugar(f.right()));
    case K::Or:
      return Formula::negation(Formula::conjunction(Formula::negation(desugar(f.left())),
                                                    Formula::negation(desugar(f.right()))));
    case K::Implies:
      return Formula::negation(Formula::conjunction(desugar(f.left()), Formula::negation(desugar(f.right()))));
    case K::Next:
      return Formula::next(desugar(f.child()));
    case K::Until:
      return Formula::until(desugar(f.left()), desugar(f.right()));
    case K::Henceforth:
      return Formula::negation(Formula::until(desugar(Formula::tt()), Formula::negation(desugar(f.child()))));
    case K::Eventually:
      return desugar(Formula::negation(Formula::henceforth(Formula::negation(f.child()))));
  }
  throw Error("desugar: unreachable");
}

namespace detail {

// Precedence for printing, loosest first: -> | & U unary atom.
inline int precedence(Formula::Kind k) {
  using K = Formula::Kind;
  switch (k) {
    case K::Implies: return 0;
    case K::Or: return 1;
    case K::And: return 2;
    case K::Until: return 3;
    case K::Not:
    case K::Next:
    case K::Eventually:
    case K::Henceforth: return 4;
    default: return 5;
  }
}

struct PrintSymbols {
  std::string_view tt, ff, nt, an, orr, imp, nx, un, ev, hf;
  bool tight_not;
};

inline void print_formula(std::ostream& os, const Formula& f, const PrintSymbols& sym) {
  using K = Formula::Kind;
  auto child = [&](const Formula& c, bool strict) {
    int pf = precedence(f.kind());
    int pc = precedence(c.kind());
    bool parens = strict ? pc <= pf : pc < pf;
    if (parens) os << '(';
    print_formula(os, c, sym);
    if (parens) os << ')';
  };
  switch (f.kind()) {
    case K::Atom: os << f.prop().name(); return;
    case K::True: os << sym.tt; return;
    case K::False: os << sym.ff; return;
    case K::Not:
      os << sym.nt;
      if (!sym.tight_not) os << ' ';
      child(f.child(), false);
      return;
    case K::Next:
    case K::Eventually:
    case K::Henceforth:
      os << (f.kind() == K::Next ? sym.nx : f.kind() == K::Eventually ? sym.ev : sym.hf) << ' ';
      child(f.child(), false);
      return;
    case K::And:
      child(f.left(), false); os << ' ' << sym.an << ' '; child(f.right(), true);
      return;
    case K::Or:
      child(f.left(), false); os << ' ' << sym.orr << ' '; child(f.right(), true);
      return;
    case K::Implies:
      child(f.left(), true); os << ' ' << sym.imp << ' '; child(f.right(), false);
      return;
    case K::Until:
      child(f.left(), true); os << ' ' << sym.un << ' '; child(f.right(), false);
      return;
  }
}

}  // namespace detail

// ASCII rendering; parse_formula(to_string(f)) reproduces f.
inline std::string to_string(const Formula& f) {
  static constexpr detail::PrintSymbols ascii{"true", "false", "!", "&", "|", "->", "X", "U", "F", "G", true};
  std::ostringstream os;
  detail::print_formula(os, f, ascii);
  return os.str();
}

// Display-only Unicode rendering.
inline std::string to_unicode(const Formula& f) {
  static const detail::PrintSymbols uni{"⊤", "⊥", "¬", "∧", "∨",
                                        "→", "○", "U", "◇", "□", true};
  std::ostringstream os;
  detail::print_formula(os, f, uni);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  detail::PrintSymbols ascii{"true", "false", "!", "&", "|", "->", "X", "U", "F", "G", true};
  detail::print_formula(os, f, ascii);
  return os;
}

// Set helpers over vectors of structurally distinct formulas.

inline bool contains(const std::vector<Formula>& set, const Formula& f) {
  return std::any_of(set.begin(), set.end(), [&](const Formula& g) { return g == f; });
}

// Deduplicates preserving first occurrence.
inline std::vector<Formula> dedup(const std::vector<Formula>& in) {
  std::vector<Formula> out;
  out.reserve(in.size());
  for (const Formula& f : in)
    if (!contains(out, f)) out.push_back(f);
  return out;
}

inline bool is_subset(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  return std::all_of(a.begin(), a.end(), [&](const Formula& f) { return contains(b, f); });
}

inline bool set_equal(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  return is_subset(a, b) && is_subset(b, a);
}

inline bool is_strict_subset(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  return is_subset(a, b) && !is_subset(b, a);
}

}  // namespace eplan
