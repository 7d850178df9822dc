#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "eplan/errors.hpp"
#include "eplan/formula.hpp"
#include "eplan/history.hpp"

namespace eplan {

// Evaluates a propositional formula at a single state.
inline bool eval_state(const Formula& f, const State& s) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: return s.holds(f.prop());
    case K::True: return true;
    case K::False: return false;
    case K::Not: return !eval_state(f.child(), s);
    case K::And: return eval_state(f.left(), s) && eval_state(f.right(), s);
    case K::Or: return eval_state(f.left(), s) || eval_state(f.right(), s);
    case K::Implies: return !eval_state(f.left(), s) || eval_state(f.right(), s);
    default:
      throw Error("eval_state: temporal operator in propositional context: " + to_string(f));
  }
}

namespace detail {

// Truth tables per subterm x time point; shared subterms are computed once,
// so a full pass costs O(size(f) * (k+1)).
class HistoryEvaluator {
 public:
  explicit HistoryEvaluator(const History& h) : h_(h), k_(h.length()) {}

  const std::vector<char>& table(const Formula& f) {
    auto it = memo_.find(f.identity());
    if (it != memo_.end()) return it->second;

    using K = Formula::Kind;
    std::vector<char> row(k_ + 1, 0);
    switch (f.kind()) {
      case K::Atom:
        for (std::size_t t = 0; t <= k_; ++t) row[t] = h_.state(t).holds(f.prop());
        break;
      case K::True:
        row.assign(k_ + 1, 1);
        break;
      case K::False:
        break;
      case K::Not: {
        const auto& c = table(f.child());
        for (std::size_t t = 0; t <= k_; ++t) row[t] = !c[t];
        break;
      }
      case K::And: {
        const auto& a = table(f.left());
        const auto& b = table(f.right());
        for (std::size_t t = 0; t <= k_; ++t) row[t] = a[t] && b[t];
        break;
      }
      case K::Or: {
        const auto& a = table(f.left());
        const auto& b = table(f.right());
        for (std::size_t t = 0; t <= k_; ++t) row[t] = a[t] || b[t];
        break;
      }
      case K::Implies: {
        const auto& a = table(f.left());
        const auto& b = table(f.right());
        for (std::size_t t = 0; t <= k_; ++t) row[t] = !a[t] || b[t];
        break;
      }
      case K::Next: {
        const auto& c = table(f.child());
        for (std::size_t t = 0; t < k_; ++t) row[t] = c[t + 1];
        row[k_] = 0;
        break;
      }
      case K::Until: {
        const auto& a = table(f.left());
        const auto& b = table(f.right());
        row[k_] = b[k_];
        for (std::size_t t = k_; t-- > 0;) row[t] = b[t] || (a[t] && row[t + 1]);
        break;
      }
      case K::Eventually: {
        const auto& c = table(f.child());
        row[k_] = c[k_];
        for (std::size_t t = k_; t-- > 0;) row[t] = c[t] || row[t + 1];
        break;
      }
      case K::Henceforth: {
        const auto& c = table(f.child());
        row[k_] = c[k_];
        for (std::size_t t = k_; t-- > 0;) row[t] = c[t] && row[t + 1];
        break;
      }
    }
    return memo_.emplace(f.identity(), std::move(row)).first->second;
  }

 private:
  const History& h_;
  std::size_t k_;
  std::unordered_map<const void*, std::vector<char>> memo_;
};

}  // namespace detail

// Finite-trace semantics: H, t |= f. Next is strong (false at t = k); Until
// needs a witness t' in [t,k] for its right operand with the left operand
// true on [t,t').
inline bool evaluate(const Formula& f, const History& h, std::size_t t = 0) {
  if (t > h.length())
    throw IndexError("time point " + std::to_string(t) + " out of range [0," +
                     std::to_string(h.length()) + "]");
  detail::HistoryEvaluator ev(h);
  return ev.table(f)[t] != 0;
}

}  // namespace eplan
