#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eplan/errors.hpp"
#include "eplan/evaluate.hpp"
#include "eplan/formula.hpp"
#include "eplan/history.hpp"

namespace eplan {

// The pair of effect precondition functions (positive, negative) over a
// declared finite universe of propositions and actions. Lookups are total:
// unmapped pairs are bottom, and the reserved action `noop` stays bottom
// everywhere.
class ActionTheory {
 public:
  ActionTheory(std::vector<Proposition> universe, std::vector<ActionName> actions)
      : universe_(std::move(universe)), actions_(std::move(actions)) {
    for (const Proposition& p : universe_) {
      if (p.name() == kReservedTopName)
        throw Error("proposition name '" + p.name() + "' is reserved");
      if (std::count(universe_.begin(), universe_.end(), p) > 1)
        throw Error("duplicate proposition '" + p.name() + "'");
    }
    for (const ActionName& a : actions_) {
      if (!is_identifier(a)) throw Error("invalid action name: '" + a + "'");
      if (std::count(actions_.begin(), actions_.end(), a) > 1)
        throw Error("duplicate action '" + a + "'");
    }
    if (!has_action(ActionName(kNoopName))) actions_.emplace_back(kNoopName);
    std::vector<Proposition> sorted = universe_;
    std::sort(sorted.begin(), sorted.end());
    sorted_universe_ = std::move(sorted);
  }

  const std::vector<Proposition>& universe() const { return universe_; }
  const std::vector<ActionName>& actions() const { return actions_; }

  bool has_action(const ActionName& a) const {
    return std::find(actions_.begin(), actions_.end(), a) != actions_.end();
  }
  bool has_proposition(const Proposition& p) const {
    return std::binary_search(sorted_universe_.begin(), sorted_universe_.end(), p);
  }

  void set_positive(const ActionName& a, const Proposition& p, Formula condition) {
    set_effect(positive_, a, p, std::move(condition));
  }
  void set_negative(const ActionName& a, const Proposition& p, Formula condition) {
    set_effect(negative_, a, p, std::move(condition));
  }

  const Formula& positive(const ActionName& a, const Proposition& p) const {
    return effect(positive_, a, p);
  }
  const Formula& negative(const ActionName& a, const Proposition& p) const {
    return effect(negative_, a, p);
  }

  // One transition step: p becomes true where the positive condition holds
  // alone, false where the negative one holds alone, and keeps its value
  // where both or neither hold (inertia). Conditions are read on the
  // pre-state.
  State successor(const State& s, const ActionName& a) const {
    require_action(a);
    require_state(s);
    std::vector<Proposition> next;
    for (const Proposition& p : universe_) {
      bool pos = eval_state(positive(a, p), s);
      bool neg = eval_state(negative(a, p), s);
      bool now = s.holds(p);
      bool then = pos == neg ? now : pos;
      if (then) next.push_back(p);
    }
    return State(std::move(next));
  }

  friend bool operator==(const ActionTheory& x, const ActionTheory& y) {
    return x.universe_ == y.universe_ && x.actions_ == y.actions_ &&
           effect_map_equal(x.positive_, y.positive_) && effect_map_equal(x.negative_, y.negative_);
  }

 private:
  using EffectMap = std::map<std::pair<ActionName, std::string>, Formula>;

  static bool effect_map_equal(const EffectMap& x, const EffectMap& y) {
    return x.size() == y.size() &&
           std::equal(x.begin(), x.end(), y.begin(), [](const auto& l, const auto& r) {
             return l.first == r.first && l.second == r.second;
           });
  }

  void require_action(const ActionName& a) const {
    if (!has_action(a)) throw UnknownActionError("unknown action '" + a + "'");
  }
  void require_state(const State& s) const {
    for (const Proposition& p : s)
      if (!has_proposition(p))
        throw UndeclaredNameError("undeclared proposition '" + p.name() + "'");
  }

  void set_effect(EffectMap& map, const ActionName& a, const Proposition& p, Formula condition) {
    require_action(a);
    if (a == kNoopName) throw Error("'noop' cannot have effects");
    if (!has_proposition(p))
      throw UndeclaredNameError("undeclared proposition '" + p.name() + "'");
    if (!condition.is_propositional())
      throw NonPropositionalEffectError("effect condition for (" + a + ", " + p.name() +
                                        ") is not propositional: " + to_string(condition));
    require_propositional_atoms(condition);
    map.insert_or_assign({a, p.name()}, std::move(condition));
  }

  void require_propositional_atoms(const Formula& f) const {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom:
        if (!has_proposition(f.prop()))
          throw UndeclaredNameError("undeclared proposition '" + f.prop().name() +
                                    "' in effect condition");
        return;
      case K::True:
      case K::False:
        return;
      case K::Not:
        require_propositional_atoms(f.child());
        return;
      default:
        require_propositional_atoms(f.left());
        require_propositional_atoms(f.right());
        return;
    }
  }

  const Formula& effect(const EffectMap& map, const ActionName& a, const Proposition& p) const {
    require_action(a);
    if (!has_proposition(p))
      throw UndeclaredNameError("undeclared proposition '" + p.name() + "'");
    auto it = map.find({a, p.name()});
    return it == map.end() ? bottom() : it->second;
  }

  static const Formula& bottom() {
    static const Formula ff = Formula::ff();
    return ff;
  }

  std::vector<Proposition> universe_;
  std::vector<Proposition> sorted_universe_;
  std::vector<ActionName> actions_;
  EffectMap positive_;
  EffectMap negative_;
};

inline State successor(const State& s, const ActionName& a, const ActionTheory& gamma) {
  return gamma.successor(s, a);
}

// The unique gamma-compatible history that starts at s0 and follows the
// plan's actions at steps 1..k.
inline History generate_history(const Plan& plan, const State& s0, const ActionTheory& gamma) {
  std::vector<State> states;
  states.reserve(plan.size() + 1);
  states.push_back(s0);
  for (const ActionName& a : plan) states.push_back(gamma.successor(states.back(), a));
  return History(std::move(states), plan);
}

// Checks the compatibility equation directly: each post-state must equal
// (pre \ del) ∪ add with del/add decided by the effect conditions on the
// pre-state. Deliberately recomputed from set algebra rather than through
// successor(), so the two can serve as oracles for one another.
inline bool is_compatible(const History& h, const ActionTheory& gamma) {
  for (const State& s : h.states())
    for (const Proposition& p : s)
      if (!gamma.has_proposition(p)) return false;
  for (std::size_t t = 1; t <= h.length(); ++t) {
    const ActionName& a = h.action(t);
    if (!gamma.has_action(a)) return false;
    const State& pre = h.state(t - 1);
    std::vector<Proposition> del, add;
    for (const Proposition& p : gamma.universe()) {
      Formula pos = gamma.positive(a, p);
      Formula neg = gamma.negative(a, p);
      if (eval_state(Formula::conjunction(Formula::negation(pos), neg), pre)) del.push_back(p);
      if (eval_state(Formula::conjunction(pos, Formula::negation(neg)), pre)) add.push_back(p);
    }
    std::sort(del.begin(), del.end());
    std::sort(add.begin(), add.end());
    std::vector<Proposition> kept, expected;
    std::set_difference(pre.begin(), pre.end(), del.begin(), del.end(), std::back_inserter(kept));
    std::set_union(kept.begin(), kept.end(), add.begin(), add.end(), std::back_inserter(expected));
    if (State(std::move(expected)) != h.state(t)) return false;
  }
  return true;
}

// Sat(Σ, π, s0, γ): the formulas of Σ guaranteed true at time 0 of the
// history π generates. Duplicates in Σ count once; input order is kept.
inline std::vector<Formula> sat_set(const std::vector<Formula>& sigma, const Plan& plan,
                                    const State& s0, const ActionTheory& gamma) {
  History h = generate_history(plan, s0, gamma);
  std::vector<Formula> out;
  for (const Formula& f : dedup(sigma))
    if (evaluate(f, h, 0)) out.push_back(f);
  return out;
}

}  // namespace eplan
