#pragma once

#include <cstddef>

#include "eplan/formula.hpp"
#include "eplan/history.hpp"

namespace testutil {

// Reference evaluator: a literal transcription of the satisfaction clauses,
// quantifier loops and all, with no sharing or memoization. Slow on purpose;
// it is the oracle the production evaluator is checked against.
inline bool naive_eval(const eplan::Formula& f, const eplan::History& h, std::size_t t) {
  using K = eplan::Formula::Kind;
  const std::size_t k = h.length();
  switch (f.kind()) {
    case K::Atom:
      return h.state(t).holds(f.prop());
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Not:
      return !naive_eval(f.child(), h, t);
    case K::And:
      return naive_eval(f.left(), h, t) && naive_eval(f.right(), h, t);
    case K::Or:
      return naive_eval(f.left(), h, t) || naive_eval(f.right(), h, t);
    case K::Implies:
      return !naive_eval(f.left(), h, t) || naive_eval(f.right(), h, t);
    case K::Next:
      return t < k && naive_eval(f.child(), h, t + 1);
    case K::Until:
      for (std::size_t t2 = t; t2 <= k; ++t2) {
        if (!naive_eval(f.right(), h, t2)) continue;
        bool prefix = true;
        for (std::size_t t1 = t; t1 < t2 && prefix; ++t1)
          prefix = naive_eval(f.left(), h, t1);
        if (prefix) return true;
      }
      return false;
    case K::Eventually:
      for (std::size_t t2 = t; t2 <= k; ++t2)
        if (naive_eval(f.child(), h, t2)) return true;
      return false;
    case K::Henceforth:
      for (std::size_t t2 = t; t2 <= k; ++t2)
        if (!naive_eval(f.child(), h, t2)) return false;
      return true;
  }
  return false;
}

}  // namespace testutil
