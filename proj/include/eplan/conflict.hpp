#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "eplan/domain.hpp"
#include "eplan/errors.hpp"
#include "eplan/evaluation.hpp"
#include "eplan/search.hpp"

namespace eplan {

// M = (Ω, γ, s0): a flat value set over an action theory and initial state.
struct MoralProblem {
  MoralProblem(std::vector<Formula> values_, ActionTheory theory_, State initial_)
      : values(dedup(values_)), theory(std::move(theory_)), initial(std::move(initial_)) {
    detail::require_initial_state(theory, initial);
  }

  std::vector<Formula> values;
  ActionTheory theory;
  State initial;

  // Value sets compare as sets; the shared context must match exactly.
  friend bool operator==(const MoralProblem& a, const MoralProblem& b) {
    return set_equal(a.values, b.values) && a.theory == b.theory && a.initial == b.initial;
  }
};

namespace detail {

inline void require_same_context(const MoralProblem& a, const MoralProblem& b) {
  if (!(a.theory == b.theory) || !(a.initial == b.initial))
    throw MismatchedContextError("problems differ in action theory or initial state");
}

inline std::optional<Plan> find_plan_satisfying(const std::vector<Formula>& values,
                                                const ActionTheory& theory, const State& initial,
                                                Horizon k) {
  PlanEnumerator en(theory.actions(), k.max_len, LengthMode::UpTo);
  Plan plan;
  while (en.next(plan)) {
    History h = generate_history(plan, initial, theory);
    bool all = true;
    for (const Formula& f : values) {
      if (!evaluate(f, h, 0)) {
        all = false;
        break;
      }
    }
    if (all) return plan;
  }
  return std::nullopt;
}

// Subsets of a problem's value set as bitmasks over its value indices.
using ValueMask = std::uint64_t;

inline void require_maskable(const MoralProblem& m) {
  if (m.values.size() > 63)
    throw Error("value set too large to enumerate (" + std::to_string(m.values.size()) + " > 63)");
}

inline ValueMask mask_of(const std::vector<Formula>& subset, const std::vector<Formula>& values) {
  ValueMask mask = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (contains(subset, values[i])) mask |= ValueMask(1) << i;
  return mask;
}

inline std::vector<Formula> values_of(ValueMask mask, const std::vector<Formula>& values) {
  std::vector<Formula> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mask >> i & 1) out.push_back(values[i]);
  return out;
}

inline ValueMask sat_mask(const std::vector<Formula>& values, const History& h) {
  ValueMask mask = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (evaluate(values[i], h, 0)) mask |= ValueMask(1) << i;
  return mask;
}

// Distinct Sat(Ω, π) over all plans of length <= K, in first-appearance
// order.
inline std::vector<ValueMask> realized_masks(const MoralProblem& m, Horizon k) {
  std::vector<ValueMask> order;
  std::unordered_set<ValueMask> seen;
  PlanEnumerator en(m.theory.actions(), k.max_len, LengthMode::UpTo);
  Plan plan;
  while (en.next(plan)) {
    ValueMask mask = sat_mask(m.values, generate_history(plan, m.initial, m.theory));
    if (seen.insert(mask).second) order.push_back(mask);
  }
  return order;
}

// Does a strictly lex-beat b under the per-level restriction masks?
inline bool lex_beats(ValueMask a, ValueMask b, const std::vector<ValueMask>& level_masks) {
  for (ValueMask lvl : level_masks) {
    ValueMask x = a & lvl;
    ValueMask y = b & lvl;
    if (x == y) continue;
    return (x & y) == y;  // strict superset, since x != y
  }
  return false;
}

inline std::vector<ValueMask> level_masks_of(const ValueBase& base,
                                             const std::vector<Formula>& values) {
  std::vector<ValueMask> out;
  out.reserve(base.degree());
  for (const auto& level : base.levels()) out.push_back(mask_of(level, values));
  return out;
}

}  // namespace detail

// First enumerated plan of length <= K whose Sat-set is all of Ω, if any.
inline std::optional<Plan> find_satisfying_plan(const MoralProblem& m, Horizon k) {
  return detail::find_plan_satisfying(m.values, m.theory, m.initial, k);
}

// K-bounded conflict: no plan of length <= K satisfies every value. A false
// answer is exact; a true answer is relative to the horizon.
inline bool is_conflict(const MoralProblem& m, Horizon k) {
  return !find_satisfying_plan(m, k).has_value();
}

inline bool is_contraction(const MoralProblem& m, const MoralProblem& contracted, Horizon k) {
  detail::require_same_context(m, contracted);
  return is_subset(contracted.values, m.values) && !is_conflict(contracted, k);
}

// The contraction generated by a plan: keep exactly the values the plan
// satisfies.
inline MoralProblem contraction_of_plan(const MoralProblem& m, const Plan& plan) {
  return MoralProblem(sat_set(m.values, plan, m.initial, m.theory), m.theory, m.initial);
}

// The one-element-extension algorithm: Ω' is qual-minimal iff it is
// satisfiable and every single value added back makes it unsatisfiable.
inline bool is_qual_minimal(const MoralProblem& m, const MoralProblem& contracted, Horizon k) {
  detail::require_same_context(m, contracted);
  if (!is_subset(contracted.values, m.values)) return false;
  if (is_conflict(contracted, k)) return false;
  for (const Formula& a : m.values) {
    if (contains(contracted.values, a)) continue;
    std::vector<Formula> extended = contracted.values;
    extended.push_back(a);
    if (detail::find_plan_satisfying(extended, m.theory, m.initial, k)) return false;
  }
  return true;
}

// Literal reading of qual-minimality: no satisfiable strict superset of Ω'
// within Ω, checked over every superset rather than one-element extensions.
inline bool is_qual_minimal_exhaustive(const MoralProblem& m, const MoralProblem& contracted,
                                       Horizon k) {
  detail::require_same_context(m, contracted);
  if (!is_subset(contracted.values, m.values)) return false;
  if (is_conflict(contracted, k)) return false;
  std::vector<Formula> missing;
  for (const Formula& f : m.values)
    if (!contains(contracted.values, f)) missing.push_back(f);
  if (missing.size() > 20)
    throw Error("superset check too large (" + std::to_string(missing.size()) + " free values)");
  for (std::uint64_t bits = 1; bits < (std::uint64_t(1) << missing.size()); ++bits) {
    std::vector<Formula> extended = contracted.values;
    for (std::size_t i = 0; i < missing.size(); ++i)
      if (bits >> i & 1) extended.push_back(missing[i]);
    if (detail::find_plan_satisfying(extended, m.theory, m.initial, k)) return false;
  }
  return true;
}

// No contraction keeps more values by count. The largest satisfiable subset
// of Ω is always some plan's full Sat-set, so a sweep over plan Sat-set
// cardinalities decides this.
inline bool is_quant_minimal(const MoralProblem& m, const MoralProblem& contracted, Horizon k) {
  if (!is_contraction(m, contracted, k)) return false;
  std::size_t target = contracted.values.size();
  PlanEnumerator en(m.theory.actions(), k.max_len, LengthMode::UpTo);
  Plan plan;
  while (en.next(plan)) {
    History h = generate_history(plan, m.initial, m.theory);
    std::size_t count = 0;
    for (const Formula& f : m.values)
      if (evaluate(f, h, 0)) ++count;
    if (count > target) return false;
  }
  return true;
}

// Lexicographic minimality relative to a level structure with union Ω: no
// contraction is strictly better at the first level where their
// level-restrictions differ. Only realized Sat-sets can witness a strictly
// better contraction, so those are what gets checked.
inline bool is_lex_minimal(const MoralProblem& m, const ValueBase& base,
                           const MoralProblem& contracted, Horizon k) {
  detail::require_same_context(m, contracted);
  if (!set_equal(base.flatten(), m.values))
    throw BaseMismatchError("the value base levels do not union to the problem's value set");
  detail::require_maskable(m);
  if (!is_subset(contracted.values, m.values)) return false;
  if (is_conflict(contracted, k)) return false;
  std::vector<detail::ValueMask> levels = detail::level_masks_of(base, m.values);
  detail::ValueMask mine = detail::mask_of(contracted.values, m.values);
  for (detail::ValueMask other : detail::realized_masks(m, k))
    if (detail::lex_beats(other, mine, levels)) return false;
  return true;
}

enum class MinimalityCriterion { Qual, Quant, Lex };

// How enumerate_minimal_contractions walks the candidate space; Auto picks
// whichever frontier is smaller, plans or subsets.
enum class ContractionStrategy { Auto, PlanSweep, SubsetFirst };

namespace detail {

inline bool mask_satisfiable(const MoralProblem& m, ValueMask mask, Horizon k,
                             std::unordered_map<ValueMask, bool>& memo) {
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  bool sat = find_plan_satisfying(values_of(mask, m.values), m.theory, m.initial, k).has_value();
  memo.emplace(mask, sat);
  return sat;
}

// Maximal satisfiable subsets via the realized Sat-sets of plans.
inline std::vector<ValueMask> maximal_masks_by_plans(const MoralProblem& m, Horizon k) {
  std::vector<ValueMask> realized = realized_masks(m, k);
  std::vector<ValueMask> out;
  for (ValueMask a : realized) {
    bool maximal = true;
    for (ValueMask b : realized) {
      if (b != a && (a & b) == a) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(a);
  }
  return out;
}

// Maximal satisfiable subsets by walking subsets largest-first.
inline std::vector<ValueMask> maximal_masks_by_subsets(const MoralProblem& m, Horizon k) {
  std::size_t n = m.values.size();
  if (n > 25) throw Error("subset enumeration too large (" + std::to_string(n) + " values)");
  std::vector<ValueMask> order;
  order.reserve(std::size_t(1) << n);
  for (ValueMask mask = 0; mask < (ValueMask(1) << n); ++mask) order.push_back(mask);
  std::sort(order.begin(), order.end(), [](ValueMask a, ValueMask b) {
    int pa = std::popcount(a);
    int pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });
  std::unordered_map<ValueMask, bool> memo;
  std::vector<ValueMask> accepted;
  for (ValueMask mask : order) {
    bool covered = false;
    for (ValueMask big : accepted) {
      if ((mask & big) == mask) {
        covered = true;
        break;
      }
    }
    if (!covered && mask_satisfiable(m, mask, k, memo)) accepted.push_back(mask);
  }
  return accepted;
}

}  // namespace detail

// All minimal contractions under the chosen criterion; lex needs the level
// structure. Results are in a canonical order (ascending value-index
// bitmask).
inline std::vector<MoralProblem> enumerate_minimal_contractions(
    const MoralProblem& m, Horizon k, MinimalityCriterion criterion,
    const ValueBase* base = nullptr, ContractionStrategy strategy = ContractionStrategy::Auto) {
  detail::require_maskable(m);
  if (criterion == MinimalityCriterion::Lex) {
    if (!base) throw Error("the lex criterion needs a value base");
    if (!set_equal(base->flatten(), m.values))
      throw BaseMismatchError("the value base levels do not union to the problem's value set");
  }

  if (strategy == ContractionStrategy::Auto) {
    unsigned long long plans;
    try {
      plans = plan_count(m.theory.actions().size(), k.max_len, LengthMode::UpTo);
    } catch (const Error&) {
      plans = std::numeric_limits<unsigned long long>::max();
    }
    bool subsets_smaller = m.values.size() < 25 &&
                           (unsigned long long)(1ull << m.values.size()) < plans;
    strategy = subsets_smaller ? ContractionStrategy::SubsetFirst : ContractionStrategy::PlanSweep;
  }

  std::vector<detail::ValueMask> maximal = strategy == ContractionStrategy::SubsetFirst
                                               ? detail::maximal_masks_by_subsets(m, k)
                                               : detail::maximal_masks_by_plans(m, k);

  std::vector<detail::ValueMask> result;
  switch (criterion) {
    case MinimalityCriterion::Qual:
      result = maximal;
      break;
    case MinimalityCriterion::Quant: {
      // Largest satisfiable subsets are maximal ones of top cardinality.
      int best = -1;
      for (detail::ValueMask mask : maximal) best = std::max(best, std::popcount(mask));
      for (detail::ValueMask mask : maximal)
        if (std::popcount(mask) == best) result.push_back(mask);
      break;
    }
    case MinimalityCriterion::Lex: {
      std::vector<detail::ValueMask> levels = detail::level_masks_of(*base, m.values);
      for (detail::ValueMask mask : maximal) {
        bool beaten = false;
        for (detail::ValueMask other : maximal) {
          if (other != mask && detail::lex_beats(other, mask, levels)) {
            beaten = true;
            break;
          }
        }
        if (!beaten) result.push_back(mask);
      }
      break;
    }
  }

  std::sort(result.begin(), result.end());
  std::vector<MoralProblem> out;
  out.reserve(result.size());
  for (detail::ValueMask mask : result)
    out.emplace_back(detail::values_of(mask, m.values), m.theory, m.initial);
  return out;
}

// A physical moral problem (Ω, γ) is a K-bounded conflict when every start
// state over the declared universe yields a conflict. Brute force over
// 2^|universe| states; desk scale only.
inline bool is_physical_conflict(const std::vector<Formula>& values, const ActionTheory& theory,
                                 Horizon k) {
  std::size_t n = theory.universe().size();
  if (n > 12)
    throw UniverseTooLargeError("universe of " + std::to_string(n) +
                                " propositions exceeds the physical-conflict limit of 12");
  std::vector<Formula> flat = dedup(values);
  for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << n); ++bits) {
    std::vector<Proposition> props;
    for (std::size_t i = 0; i < n; ++i)
      if (bits >> i & 1) props.push_back(theory.universe()[i]);
    if (detail::find_plan_satisfying(flat, theory, State(std::move(props)), k)) return false;
  }
  return true;
}

// The logical-conflict criterion evaluated over an explicit finite family of
// action theories, not over all theories.
inline bool is_logical_conflict_over(const std::vector<Formula>& values,
                                     const std::vector<ActionTheory>& family, Horizon k) {
  for (const ActionTheory& theory : family)
    if (!is_physical_conflict(values, theory, k)) return false;
  return true;
}

}  // namespace eplan
