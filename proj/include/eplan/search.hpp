#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "eplan/errors.hpp"
#include "eplan/evaluation.hpp"
#include "eplan/history.hpp"

namespace eplan {

// Bound K for the otherwise unbounded plan quantifiers.
struct Horizon {
  std::size_t max_len = 0;
};

enum class LengthMode { UpTo, Exact };

// Streams plans in length-lexicographic order: shorter plans first, plans of
// equal length ordered by declared action indices. Uses O(K) memory.
class PlanEnumerator {
 public:
  PlanEnumerator(std::vector<ActionName> actions, std::size_t max_len,
                 LengthMode mode = LengthMode::UpTo)
      : actions_(std::move(actions)), max_len_(max_len), mode_(mode) {
    if (actions_.empty()) throw Error("cannot enumerate plans without actions");
    reset();
  }

  void reset() {
    len_ = mode_ == LengthMode::Exact ? max_len_ : 0;
    idx_.assign(len_, 0);
    started_ = false;
    done_ = false;
  }

  // Writes the next plan into out; returns false once exhausted.
  bool next(Plan& out) {
    if (done_) return false;
    if (started_ && !advance()) {
      done_ = true;
      return false;
    }
    started_ = true;
    out.clear();
    out.reserve(idx_.size());
    for (std::size_t i : idx_) out.push_back(actions_[i]);
    return true;
  }

 private:
  bool advance() {
    for (std::size_t i = idx_.size(); i-- > 0;) {
      if (++idx_[i] < actions_.size()) return true;
      idx_[i] = 0;
    }
    if (len_ == max_len_) return false;
    idx_.assign(++len_, 0);
    return true;
  }

  std::vector<ActionName> actions_;
  std::size_t max_len_;
  LengthMode mode_;
  std::vector<std::size_t> idx_;
  std::size_t len_ = 0;
  bool started_ = false;
  bool done_ = false;
};

// |acts|^K plans at exact length, or the sum over lengths 0..K; throws on
// unsigned overflow rather than wrapping.
inline unsigned long long plan_count(std::size_t n_actions, std::size_t max_len, LengthMode mode) {
  const unsigned long long limit = std::numeric_limits<unsigned long long>::max();
  unsigned long long total = mode == LengthMode::Exact ? 0 : 1;
  unsigned long long pow = 1;
  for (std::size_t g = 1; g <= max_len; ++g) {
    if (n_actions != 0 && pow > limit / n_actions) throw Error("plan count overflow");
    pow *= n_actions;
    if (mode == LengthMode::UpTo) {
      if (total > limit - pow) throw Error("plan count overflow");
      total += pow;
    }
  }
  return mode == LengthMode::Exact ? pow : total;
}

// One non-dominance query: which plans of length <= K (or exactly K) are
// maximal under the chosen ordering.
struct PlanQuery {
  EthicalPlanningDomain domain;
  Horizon horizon;
  CompareMode mode = CompareMode::Qualitative;
  LengthMode lengths = LengthMode::UpTo;
  bool parallel = false;
};

// Returns the first enumerated plan strictly better than plan, if any.
// Keeps only the probe and one candidate in memory at a time.
inline std::optional<Plan> is_dominated(const PlanQuery& q, const Plan& plan) {
  if (plan.size() > q.horizon.max_len)
    throw Error("plan of length " + std::to_string(plan.size()) + " exceeds horizon " +
                std::to_string(q.horizon.max_len));
  SatProfile mine = sat_profile(q.domain, plan);
  PlanEnumerator en(q.domain.theory.actions(), q.horizon.max_len, q.lengths);
  Plan candidate;
  while (en.next(candidate)) {
    ComparisonResult r = compare_profiles(mine, sat_profile(q.domain, candidate), q.mode);
    if (r.relation == Relation::SecondPreferred) return candidate;
  }
  return std::nullopt;
}

// All plans sharing one Sat profile, keyed by the first of them.
struct ProfileGroup {
  SatProfile profile;
  Plan representative;
  std::size_t plans = 0;

  friend bool operator==(const ProfileGroup&, const ProfileGroup&) = default;
};

namespace detail {

// (representative length, partition index, appearance index): lexicographic
// rank of a group's first plan in the global enumeration order.
using GroupRank = std::tuple<std::size_t, std::size_t, std::size_t>;

struct RankedGroups {
  std::vector<ProfileGroup> groups;
  std::vector<GroupRank> ranks;

  void add(SatProfile profile, const Plan& plan, std::size_t partition) {
    for (ProfileGroup& g : groups) {
      if (g.profile == profile) {
        ++g.plans;
        return;
      }
    }
    ranks.emplace_back(plan.size(), partition, groups.size());
    groups.push_back({std::move(profile), plan, 1});
  }

  void merge(RankedGroups&& other) {
    for (std::size_t i = 0; i < other.groups.size(); ++i) {
      ProfileGroup& in = other.groups[i];
      bool found = false;
      for (std::size_t j = 0; j < groups.size(); ++j) {
        if (groups[j].profile == in.profile) {
          groups[j].plans += in.plans;
          if (other.ranks[i] < ranks[j]) {
            ranks[j] = other.ranks[i];
            groups[j].representative = std::move(in.representative);
          }
          found = true;
          break;
        }
      }
      if (!found) {
        groups.push_back(std::move(in));
        ranks.push_back(other.ranks[i]);
      }
    }
  }

  void sort_by_rank() {
    std::vector<std::size_t> by(groups.size());
    for (std::size_t i = 0; i < by.size(); ++i) by[i] = i;
    std::sort(by.begin(), by.end(),
              [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
    std::vector<ProfileGroup> out;
    out.reserve(groups.size());
    for (std::size_t i : by) out.push_back(std::move(groups[i]));
    groups = std::move(out);
    ranks.clear();
  }
};

inline RankedGroups collect_groups(const PlanQuery& q) {
  RankedGroups acc;
  if (!q.parallel || q.horizon.max_len == 0) {
    PlanEnumerator en(q.domain.theory.actions(), q.horizon.max_len, q.lengths);
    Plan plan;
    while (en.next(plan)) acc.add(sat_profile(q.domain, plan), plan, 0);
    return acc;
  }

  // Partition by first action; each worker streams the suffix space. A merge
  // by global rank reproduces the sequential result exactly.
  if (q.lengths == LengthMode::UpTo) acc.add(sat_profile(q.domain, {}), {}, 0);
  const std::vector<ActionName>& acts = q.domain.theory.actions();
  std::vector<std::future<RankedGroups>> futures;
  futures.reserve(acts.size());
  for (std::size_t ai = 0; ai < acts.size(); ++ai) {
    futures.push_back(std::async(std::launch::async, [&q, &acts, ai] {
      RankedGroups local;
      PlanEnumerator en(acts, q.horizon.max_len - 1, q.lengths);
      Plan suffix;
      Plan plan;
      while (en.next(suffix)) {
        plan.clear();
        plan.push_back(acts[ai]);
        plan.insert(plan.end(), suffix.begin(), suffix.end());
        local.add(sat_profile(q.domain, plan), plan, ai + 1);
      }
      return local;
    }));
  }
  for (auto& f : futures) acc.merge(f.get());
  acc.sort_by_rank();
  return acc;
}

inline bool profile_beats(const SatProfile& a, const SatProfile& b, CompareMode mode) {
  return compare_profiles(b, a, mode).relation == Relation::SecondPreferred;
}

}  // namespace detail

// Distinct Sat profiles of the non-dominated plans, each with its first
// realizing plan and how many plans share it. Memory grows with the number
// of distinct profiles, not with |acts|^K.
inline std::vector<ProfileGroup> non_dominated_profiles(const PlanQuery& q) {
  detail::RankedGroups acc = detail::collect_groups(q);
  std::vector<bool> keep(acc.groups.size());
  for (std::size_t i = 0; i < acc.groups.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; !dominated && j < acc.groups.size(); ++j)
      dominated = j != i && detail::profile_beats(acc.groups[j].profile, acc.groups[i].profile, q.mode);
    keep[i] = !dominated;
  }
  std::vector<ProfileGroup> out;
  for (std::size_t i = 0; i < acc.groups.size(); ++i)
    if (keep[i]) out.push_back(std::move(acc.groups[i]));
  return out;
}

// Streams every non-dominated plan in enumeration order.
inline void for_each_non_dominated(const PlanQuery& q,
                                   const std::function<void(const Plan&)>& fn) {
  std::vector<ProfileGroup> winners = non_dominated_profiles(q);
  PlanEnumerator en(q.domain.theory.actions(), q.horizon.max_len, q.lengths);
  Plan plan;
  while (en.next(plan)) {
    SatProfile profile = sat_profile(q.domain, plan);
    for (const ProfileGroup& g : winners) {
      if (g.profile == profile) {
        fn(plan);
        break;
      }
    }
  }
}

inline std::vector<Plan> non_dominated_set(const PlanQuery& q) {
  std::vector<Plan> out;
  for_each_non_dominated(q, [&](const Plan& p) { out.push_back(p); });
  return out;
}

}  // namespace eplan
