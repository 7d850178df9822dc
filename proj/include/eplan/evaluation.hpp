#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eplan/domain.hpp"
#include "eplan/errors.hpp"
#include "eplan/formula.hpp"
#include "eplan/history.hpp"

namespace eplan {

// Priority-ordered value levels Ω1..Ωm; level 1 outranks level 2 and so on.
// Each level is a set (duplicates within a level are dropped); the same
// formula may appear at several levels, which lint() flags since
// quantitative comparison then counts it twice.
class ValueBase {
 public:
  ValueBase() = default;
  explicit ValueBase(std::vector<std::vector<Formula>> levels) : levels_(std::move(levels)) {
    for (auto& level : levels_) level = dedup(level);
  }

  std::size_t degree() const { return levels_.size(); }

  // 1-based level access.
  const std::vector<Formula>& level(std::size_t k) const {
    if (k < 1 || k > levels_.size())
      throw IndexError("level " + std::to_string(k) + " out of range [1," +
                       std::to_string(levels_.size()) + "]");
    return levels_[k - 1];
  }

  const std::vector<std::vector<Formula>>& levels() const { return levels_; }

  // Union of all levels, first occurrence order.
  std::vector<Formula> flatten() const {
    std::vector<Formula> out;
    for (const auto& level : levels_)
      for (const Formula& f : level)
        if (!contains(out, f)) out.push_back(f);
    return out;
  }

  std::vector<std::string> lint() const {
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < levels_.size(); ++i)
      for (const Formula& f : levels_[i])
        for (std::size_t j = i + 1; j < levels_.size(); ++j)
          if (contains(levels_[j], f))
            warnings.push_back("value '" + to_string(f) + "' appears at levels " +
                               std::to_string(i + 1) + " and " + std::to_string(j + 1));
    return warnings;
  }

  friend bool operator==(const ValueBase&, const ValueBase&) = default;

 private:
  std::vector<std::vector<Formula>> levels_;
};

namespace detail {
inline void require_initial_state(const ActionTheory& theory, const State& initial) {
  for (const Proposition& p : initial)
    if (!theory.has_proposition(p))
      throw UndeclaredNameError("initial state mentions undeclared proposition '" + p.name() +
                                "'");
}
}  // namespace detail

// Δ = (γ, s0, Ω̄).
struct EthicalPlanningDomain {
  EthicalPlanningDomain(ActionTheory theory_, State initial_, ValueBase values_)
      : theory(std::move(theory_)), initial(std::move(initial_)), values(std::move(values_)) {
    detail::require_initial_state(theory, initial);
  }

  ActionTheory theory;
  State initial;
  ValueBase values;
};

// (γ, s0, Ω̄, ΩD, μ): an ethical planning domain plus desires and the degree
// of morality μ, the priority slot the desires take in the induced domain.
struct MixedMotiveDomain {
  MixedMotiveDomain(ActionTheory theory_, State initial_, ValueBase values_,
                    std::vector<Formula> desires_, std::size_t morality_,
                    std::optional<std::pair<std::size_t, std::size_t>> allowed_morality_ = {})
      : theory(std::move(theory_)),
        initial(std::move(initial_)),
        values(std::move(values_)),
        desires(dedup(desires_)),
        morality(morality_),
        allowed_morality(allowed_morality_) {
    detail::require_initial_state(theory, initial);
    if (allowed_morality) {
      auto [lo, hi] = *allowed_morality;
      if (lo < 1 || lo > hi || hi > values.degree() + 1)
        throw MoralityOutOfRangeError("allowed morality range " + std::to_string(lo) + ".." +
                                      std::to_string(hi) + " not within 1.." +
                                      std::to_string(values.degree() + 1));
    }
    check_morality(*this, morality);
  }

  ActionTheory theory;
  State initial;
  ValueBase values;
  std::vector<Formula> desires;
  std::size_t morality;
  std::optional<std::pair<std::size_t, std::size_t>> allowed_morality;

  static void check_morality(const MixedMotiveDomain& m, std::size_t mu) {
    if (mu < 1 || mu > m.values.degree() + 1)
      throw MoralityOutOfRangeError("morality " + std::to_string(mu) + " not within 1.." +
                                    std::to_string(m.values.degree() + 1));
    if (m.allowed_morality && (mu < m.allowed_morality->first || mu > m.allowed_morality->second))
      throw MoralityOutOfRangeError("morality " + std::to_string(mu) +
                                    " outside the allowed range " +
                                    std::to_string(m.allowed_morality->first) + ".." +
                                    std::to_string(m.allowed_morality->second));
  }
};

// The induced domain: desires become value level mu, levels below keep their
// index, levels at or above shift down one slot.
inline EthicalPlanningDomain induce(const MixedMotiveDomain& m, std::size_t mu) {
  MixedMotiveDomain::check_morality(m, mu);
  std::vector<std::vector<Formula>> levels;
  levels.reserve(m.values.degree() + 1);
  for (std::size_t k = 1; k < mu; ++k) levels.push_back(m.values.level(k));
  levels.push_back(m.desires);
  for (std::size_t k = mu; k <= m.values.degree(); ++k) levels.push_back(m.values.level(k));
  return EthicalPlanningDomain(m.theory, m.initial, ValueBase(std::move(levels)));
}

inline EthicalPlanningDomain induce(const MixedMotiveDomain& m) { return induce(m, m.morality); }

enum class CompareMode { Qualitative, Quantitative };
enum class Relation { FirstPreferred, SecondPreferred, Equivalent, Incomparable };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::FirstPreferred: return "plan1-preferred";
    case Relation::SecondPreferred: return "plan2-preferred";
    case Relation::Equivalent: return "equivalent";
    case Relation::Incomparable: return "incomparable";
  }
  return "?";
}

// Outcome of a lexicographic comparison; for anything but Equivalent,
// deciding_level is the first level whose Sat-sets split the plans and
// witness carries both plans' Sat-sets restricted to it.
struct ComparisonResult {
  Relation relation = Relation::Equivalent;
  std::optional<std::size_t> deciding_level;
  std::optional<std::pair<std::vector<Formula>, std::vector<Formula>>> witness;
};

// Per-level Sat-sets of one plan.
using SatProfile = std::vector<std::vector<Formula>>;

inline SatProfile sat_profile(const EthicalPlanningDomain& domain, const Plan& plan) {
  History h = generate_history(plan, domain.initial, domain.theory);
  SatProfile profile;
  profile.reserve(domain.values.degree());
  for (const auto& level : domain.values.levels()) {
    std::vector<Formula> sat;
    for (const Formula& f : level)
      if (evaluate(f, h, 0)) sat.push_back(f);
    profile.push_back(std::move(sat));
  }
  return profile;
}

// Lexicographic comparison of two per-level Sat profiles, by set inclusion
// (qualitative) or cardinality (quantitative) at the first differing level.
inline ComparisonResult compare_profiles(const SatProfile& s1, const SatProfile& s2,
                                         CompareMode mode) {
  if (s1.size() != s2.size()) throw Error("profiles disagree on the number of levels");
  for (std::size_t k = 0; k < s1.size(); ++k) {
    const auto& a = s1[k];
    const auto& b = s2[k];
    if (mode == CompareMode::Quantitative) {
      if (a.size() == b.size()) continue;
      return {a.size() > b.size() ? Relation::FirstPreferred : Relation::SecondPreferred, k + 1,
              std::pair(a, b)};
    }
    if (set_equal(a, b)) continue;
    Relation rel = Relation::Incomparable;
    if (is_subset(b, a)) rel = Relation::FirstPreferred;
    else if (is_subset(a, b)) rel = Relation::SecondPreferred;
    return {rel, k + 1, std::pair(a, b)};
  }
  return {};
}

inline ComparisonResult compare(const EthicalPlanningDomain& domain, const Plan& plan1,
                                const Plan& plan2, CompareMode mode) {
  return compare_profiles(sat_profile(domain, plan1), sat_profile(domain, plan2), mode);
}

inline ComparisonResult qual_compare(const EthicalPlanningDomain& domain, const Plan& plan1,
                                     const Plan& plan2) {
  return compare(domain, plan1, plan2, CompareMode::Qualitative);
}

inline ComparisonResult quant_compare(const EthicalPlanningDomain& domain, const Plan& plan1,
                                      const Plan& plan2) {
  return compare(domain, plan1, plan2, CompareMode::Quantitative);
}

namespace detail {

inline std::string formula_list(const std::vector<Formula>& fs) {
  std::string out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) out += ", ";
    out += to_string(fs[i]);
  }
  return out;
}

inline std::vector<Formula> difference(const std::vector<Formula>& a,
                                       const std::vector<Formula>& b) {
  std::vector<Formula> out;
  for (const Formula& f : a)
    if (!contains(b, f)) out.push_back(f);
  return out;
}

}  // namespace detail

// One-line verdict, e.g. "plan1 preferred (level 2: G !annoyed)".
inline std::string render_verdict(const ComparisonResult& r) {
  switch (r.relation) {
    case Relation::Equivalent:
      return "plans equivalent";
    case Relation::FirstPreferred:
      return "plan1 preferred (level " + std::to_string(*r.deciding_level) + ": " +
             detail::formula_list(detail::difference(r.witness->first, r.witness->second)) + ")";
    case Relation::SecondPreferred:
      return "plan2 preferred (level " + std::to_string(*r.deciding_level) + ": " +
             detail::formula_list(detail::difference(r.witness->second, r.witness->first)) + ")";
    case Relation::Incomparable:
      return "plans incomparable (level " + std::to_string(*r.deciding_level) + ": {" +
             detail::formula_list(detail::difference(r.witness->first, r.witness->second)) +
             "} vs {" +
             detail::formula_list(detail::difference(r.witness->second, r.witness->first)) + "})";
  }
  return "?";
}

// Human-readable comparison: the verdict plus, for a strict preference, the
// deciding level's Sat-sets; for Equivalent/Incomparable the full
// level-by-level table.
inline std::string explain(const EthicalPlanningDomain& domain, const Plan& plan1,
                           const Plan& plan2, CompareMode mode) {
  SatProfile s1 = sat_profile(domain, plan1);
  SatProfile s2 = sat_profile(domain, plan2);
  ComparisonResult r = compare_profiles(s1, s2, mode);
  std::ostringstream os;
  auto level_row = [&](std::size_t k) {
    os << "level " << k << ": plan1 {" << detail::formula_list(s1[k - 1]) << "} | plan2 {"
       << detail::formula_list(s2[k - 1]) << "}\n";
  };
  switch (r.relation) {
    case Relation::FirstPreferred:
    case Relation::SecondPreferred:
      os << render_verdict(r) << "\n";
      level_row(*r.deciding_level);
      break;
    case Relation::Equivalent:
      os << render_verdict(r) << "\n";
      for (std::size_t k = 1; k <= domain.values.degree(); ++k) level_row(k);
      break;
    case Relation::Incomparable:
      os << render_verdict(r) << "\n";
      for (std::size_t k = 1; k <= domain.values.degree(); ++k) level_row(k);
      break;
  }
  return os.str();
}

}  // namespace eplan
