#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eplan/errors.hpp"
#include "eplan/formula.hpp"

namespace eplan {

using ActionName = std::string;

// A k-plan: the k actions executed at steps 1..k.
using Plan = std::vector<ActionName>;

inline constexpr std::string_view kNoopName = "noop";

// A set of true propositions, kept sorted and duplicate-free.
class State {
 public:
  State() = default;
  explicit State(std::vector<Proposition> props) : props_(std::move(props)) {
    std::sort(props_.begin(), props_.end());
    props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
  }
  State(std::initializer_list<std::string> names) {
    props_.reserve(names.size());
    for (const std::string& n : names) props_.emplace_back(n);
    std::sort(props_.begin(), props_.end());
    props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
  }

  bool holds(const Proposition& p) const {
    return std::binary_search(props_.begin(), props_.end(), p);
  }

  const std::vector<Proposition>& props() const { return props_; }
  std::size_t size() const { return props_.size(); }
  bool empty() const { return props_.empty(); }

  auto begin() const { return props_.begin(); }
  auto end() const { return props_.end(); }

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;

 private:
  std::vector<Proposition> props_;
};

inline std::string to_string(const State& s) {
  std::string out = "{";
  bool first = true;
  for (const Proposition& p : s) {
    if (!first) out += ", ";
    out += p.name();
    first = false;
  }
  return out + "}";
}

inline std::ostream& operator<<(std::ostream& os, const State& s) { return os << to_string(s); }

// A k-history: states at time points 0..k and the actions taken at steps
// 1..k.
class History {
 public:
  History(std::vector<State> states, std::vector<ActionName> actions)
      : states_(std::move(states)), actions_(std::move(actions)) {
    if (states_.empty() || states_.size() != actions_.size() + 1)
      throw Error("history needs exactly one more state than actions (got " +
                  std::to_string(states_.size()) + " states, " + std::to_string(actions_.size()) +
                  " actions)");
  }

  // k: the number of actions.
  std::size_t length() const { return actions_.size(); }

  const State& state(std::size_t t) const {
    if (t >= states_.size())
      throw IndexError("time point " + std::to_string(t) + " out of range [0," +
                       std::to_string(length()) + "]");
    return states_[t];
  }

  // The action taken at step t, for t in [1,k].
  const ActionName& action(std::size_t t) const {
    if (t < 1 || t > actions_.size())
      throw IndexError("action step " + std::to_string(t) + " out of range [1," +
                       std::to_string(actions_.size()) + "]");
    return actions_[t - 1];
  }

  const std::vector<State>& states() const { return states_; }
  const std::vector<ActionName>& actions() const { return actions_; }

  friend bool operator==(const History&, const History&) = default;

 private:
  std::vector<State> states_;
  std::vector<ActionName> actions_;
};

inline std::string to_string(const Plan& plan) {
  if (plan.empty()) return "(empty)";
  std::string out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (i) out += ",";
    out += plan[i];
  }
  return out;
}

}  // namespace eplan
