#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "eplan/domain.hpp"
#include "eplan/parse.hpp"
#include "support/enumerate.hpp"

using eplan::ActionTheory;
using eplan::Formula;
using eplan::History;
using eplan::Plan;
using eplan::Proposition;
using eplan::State;

namespace {

Formula f(std::string_view text) { return eplan::parse_formula(text); }

std::vector<Proposition> props(std::initializer_list<const char*> names) {
  std::vector<Proposition> out;
  for (const char* n : names) out.emplace_back(n);
  return out;
}

ActionTheory hospital_theory() {
  ActionTheory t(props({"blocked", "surgery", "destination", "waited", "annoyed", "dangerous"}),
                 {"move", "ask", "horn", "noop"});
  t.set_positive("move", Proposition("destination"), f("!blocked"));
  t.set_negative("ask", Proposition("blocked"), f("blocked"));
  t.set_positive("ask", Proposition("waited"), f("true"));
  t.set_negative("horn", Proposition("blocked"), f("blocked"));
  t.set_positive("horn", Proposition("annoyed"), f("true"));
  t.set_positive("horn", Proposition("dangerous"), f("surgery"));
  return t;
}

}  // namespace

TEST_CASE("theory construction validates the universe") {
  CHECK_NOTHROW(ActionTheory(props({"p"}), {"a"}));
  CHECK_THROWS_AS(ActionTheory(props({"p", "p"}), {"a"}), eplan::Error);
  CHECK_THROWS_AS(ActionTheory(props({"__top"}), {"a"}), eplan::Error);
  CHECK_THROWS_AS(ActionTheory(props({"p"}), {"a", "a"}), eplan::Error);
  CHECK_THROWS_AS(ActionTheory(props({"p"}), {"bad name"}), eplan::Error);

  ActionTheory t(props({"p"}), {"a"});
  CHECK(t.has_action("noop"));
  ActionTheory t2(props({"p"}), {"noop", "a"});
  CHECK(t2.actions().size() == 2);
}

TEST_CASE("effect assignment is validated") {
  ActionTheory t(props({"p", "q"}), {"a"});
  CHECK_NOTHROW(t.set_positive("a", Proposition("p"), f("q -> p")));
  CHECK_THROWS_AS(t.set_positive("b", Proposition("p"), f("q")), eplan::UnknownActionError);
  CHECK_THROWS_AS(t.set_positive("noop", Proposition("p"), f("q")), eplan::Error);
  CHECK_THROWS_AS(t.set_positive("a", Proposition("zz"), f("q")), eplan::UndeclaredNameError);
  CHECK_THROWS_AS(t.set_positive("a", Proposition("p"), f("X q")),
                  eplan::NonPropositionalEffectError);
  CHECK_THROWS_AS(t.set_positive("a", Proposition("p"), f("q & undeclared")),
                  eplan::UndeclaredNameError);
}

TEST_CASE("effect lookup is total with bottom default") {
  ActionTheory t = hospital_theory();
  CHECK(t.positive("horn", Proposition("dangerous")) == f("surgery"));
  CHECK(t.positive("move", Proposition("annoyed")) == Formula::ff());
  CHECK(t.negative("noop", Proposition("blocked")) == Formula::ff());
}

TEST_CASE("successor applies conditional effects with inertia") {
  ActionTheory t = hospital_theory();
  CHECK(eplan::successor(State{"blocked"}, "horn", t) == State{"annoyed"});
  CHECK(eplan::successor(State{"blocked", "surgery"}, "horn", t) ==
        State{"annoyed", "dangerous", "surgery"});
  CHECK(eplan::successor(State{"blocked", "waited"}, "noop", t) == State{"blocked", "waited"});
  CHECK_THROWS_AS(eplan::successor(State{"blocked"}, "fly", t), eplan::UnknownActionError);
  CHECK_THROWS_AS(eplan::successor(State{"zz"}, "horn", t), eplan::Error);
}

TEST_CASE("simultaneous positive and negative effects leave the value unchanged") {
  ActionTheory t(props({"p", "q"}), {"a"});
  t.set_positive("a", Proposition("p"), f("true"));
  t.set_negative("a", Proposition("p"), f("true"));
  CHECK(eplan::successor(State{"p"}, "a", t) == State{"p"});
  CHECK(eplan::successor(State{}, "a", t) == State{});
}

TEST_CASE("generate_history reproduces the hospital rows") {
  ActionTheory t = hospital_theory();
  History h1 = eplan::generate_history({"ask", "move"}, State{"blocked"}, t);
  CHECK(h1.states() == std::vector<State>{State{"blocked"}, State{"waited"},
                                          State{"waited", "destination"}});
  History h2 = eplan::generate_history({"horn", "move"}, State{"blocked"}, t);
  CHECK(h2.states() == std::vector<State>{State{"blocked"}, State{"annoyed"},
                                          State{"annoyed", "destination"}});
  History h0 = eplan::generate_history({}, State{}, t);
  CHECK(h0.length() == 0);
  CHECK(h0.states() == std::vector<State>{State{}});
}

TEST_CASE("noop plans are fixpoints") {
  ActionTheory t = hospital_theory();
  History h = eplan::generate_history({"noop", "noop", "noop"}, State{"blocked", "surgery"}, t);
  for (const State& s : h.states()) CHECK(s == State{"blocked", "surgery"});
}

TEST_CASE("history shape is validated") {
  CHECK_THROWS_AS(History({State{}, State{}}, {}), eplan::Error);
  History h({State{"p"}, State{}}, {"a"});
  CHECK(h.length() == 1);
  CHECK(h.state(0) == State{"p"});
  CHECK(h.action(1) == "a");
  CHECK_THROWS_AS(h.state(2), eplan::IndexError);
  CHECK_THROWS_AS(h.action(0), eplan::IndexError);
  CHECK_THROWS_AS(h.action(2), eplan::IndexError);
}

TEST_CASE("is_compatible accepts generated histories and rejects tampering") {
  ActionTheory t = hospital_theory();
  History h1 = eplan::generate_history({"ask", "move"}, State{"blocked"}, t);
  CHECK(eplan::is_compatible(h1, t));

  History tampered({State{"blocked"}, State{"waited", "annoyed"},
                    State{"waited", "destination"}},
                   {"ask", "move"});
  CHECK_FALSE(eplan::is_compatible(tampered, t));

  History trivial({State{"blocked"}}, {});
  CHECK(eplan::is_compatible(trivial, t));

  History unknown_action({State{}, State{}}, {"fly"});
  CHECK_FALSE(eplan::is_compatible(unknown_action, t));
  History undeclared_prop({State{"nonsense"}}, {});
  CHECK_FALSE(eplan::is_compatible(undeclared_prop, t));
}

TEST_CASE("compatibility of generated histories on random theories") {
  std::mt19937 rng(424242);
  std::vector<Proposition> ps = props({"a", "b", "c", "d"});
  std::vector<eplan::ActionName> acts = {"x", "y", "z"};
  for (int i = 0; i < 1000; ++i) {
    ActionTheory t = testutil::random_theory(rng, ps, acts);
    State s0 = testutil::random_state(rng, ps);
    Plan plan;
    std::size_t len = rng() % 6;
    for (std::size_t j = 0; j < len; ++j) plan.push_back(acts[rng() % acts.size()]);
    History h = eplan::generate_history(plan, s0, t);
    CHECK(eplan::is_compatible(h, t));
    CHECK(eplan::generate_history(plan, s0, t) == h);
  }
}

TEST_CASE("sat_set matches the hospital Sat-sets") {
  ActionTheory t = hospital_theory();
  std::vector<Formula> sigma = {f("G !dangerous"), f("G !annoyed"), f("F destination"),
                                f("F (destination & !waited)")};
  CHECK(eplan::set_equal(eplan::sat_set(sigma, {"ask", "move"}, State{"blocked"}, t),
                         {f("G !dangerous"), f("G !annoyed"), f("F destination")}));
  CHECK(eplan::set_equal(eplan::sat_set(sigma, {"horn", "move"}, State{"blocked"}, t),
                         {f("G !dangerous"), f("F destination"),
                          f("F (destination & !waited)")}));
  CHECK(eplan::sat_set({}, {"ask"}, State{"blocked"}, t).empty());
}

TEST_CASE("sat_set is additive and monotone") {
  std::mt19937 rng(515151);
  std::vector<Proposition> ps = props({"a", "b"});
  std::vector<eplan::ActionName> acts = {"x", "y"};
  for (int i = 0; i < 200; ++i) {
    ActionTheory t = testutil::random_theory(rng, ps, acts);
    State s0 = testutil::random_state(rng, ps);
    Plan plan;
    for (std::size_t j = 0, len = rng() % 4; j < len; ++j) plan.push_back(acts[rng() % 2]);
    std::vector<Formula> s1, s2;
    for (int j = 0; j < 3; ++j) s1.push_back(testutil::random_formula(rng, ps, 5));
    for (int j = 0; j < 2; ++j) s2.push_back(testutil::random_formula(rng, ps, 5));
    std::vector<Formula> both = s1;
    both.insert(both.end(), s2.begin(), s2.end());

    std::vector<Formula> sat_union = eplan::sat_set(both, plan, s0, t);
    std::vector<Formula> merged = eplan::sat_set(s1, plan, s0, t);
    for (const Formula& phi : eplan::sat_set(s2, plan, s0, t))
      if (!eplan::contains(merged, phi)) merged.push_back(phi);
    CHECK(eplan::set_equal(sat_union, merged));
    CHECK(eplan::is_subset(eplan::sat_set(s1, plan, s0, t), sat_union));
  }
}

TEST_CASE("theories compare by universe, actions, and effects") {
  ActionTheory a = hospital_theory();
  ActionTheory b = hospital_theory();
  CHECK(a == b);
  b.set_positive("move", Proposition("waited"), f("true"));
  CHECK_FALSE(a == b);
}
