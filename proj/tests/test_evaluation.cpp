#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "eplan/evaluation.hpp"
#include "eplan/parse.hpp"
#include "support/enumerate.hpp"
#include "support/test_util.hpp"

using eplan::CompareMode;
using eplan::ComparisonResult;
using eplan::EthicalPlanningDomain;
using eplan::Formula;
using eplan::MixedMotiveDomain;
using eplan::Plan;
using eplan::Proposition;
using eplan::Relation;
using eplan::State;
using eplan::ValueBase;
using testutil::f;

namespace {

const Plan pi1 = {"ask", "move"};
const Plan pi2 = {"horn", "move"};

EthicalPlanningDomain hospital(std::size_t morality) {
  return eplan::build_domain(testutil::hospital_file(), morality);
}

MixedMotiveDomain hospital_mixed() { return eplan::build_mixed_domain(testutil::hospital_file()); }

// one action sets p, the other sets q: reaching exactly one of F p / F q each
EthicalPlanningDomain fp_fq_domain() {
  eplan::ActionTheory t({Proposition("p"), Proposition("q")}, {"mkp", "mkq"});
  t.set_positive("mkp", Proposition("p"), f("true"));
  t.set_positive("mkq", Proposition("q"), f("true"));
  return EthicalPlanningDomain{std::move(t), State{}, ValueBase({{f("F p"), f("F q")}})};
}

}  // namespace

TEST_CASE("value base shape") {
  ValueBase vb({{f("F p")}, {}, {f("G q"), f("G q"), f("F p")}});
  CHECK(vb.degree() == 3);
  CHECK(vb.level(1) == std::vector<Formula>{f("F p")});
  CHECK(vb.level(2).empty());
  CHECK(vb.level(3).size() == 2);  // within-level duplicates collapse
  CHECK_THROWS_AS(vb.level(0), eplan::IndexError);
  CHECK_THROWS_AS(vb.level(4), eplan::IndexError);
  CHECK(eplan::set_equal(vb.flatten(), {f("F p"), f("G q")}));

  std::vector<std::string> warnings = vb.lint();
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0] == "value 'F p' appears at levels 1 and 3");
  CHECK(ValueBase({{f("F p")}, {f("G q")}}).lint().empty());
}

TEST_CASE("mixed-motive domain validates morality and range") {
  MixedMotiveDomain m = hospital_mixed();
  CHECK(m.morality == 3);
  CHECK(m.values.degree() == 2);
  CHECK(m.desires.size() == 2);
  REQUIRE(m.allowed_morality.has_value());
  CHECK(*m.allowed_morality == std::pair<std::size_t, std::size_t>{2, 3});

  auto make = [&](std::size_t mu, std::optional<std::pair<std::size_t, std::size_t>> range) {
    return MixedMotiveDomain{m.theory, m.initial, m.values, m.desires, mu, range};
  };
  CHECK_NOTHROW(make(1, std::nullopt));
  CHECK_NOTHROW(make(3, std::nullopt));
  CHECK_THROWS_AS(make(0, std::nullopt), eplan::MoralityOutOfRangeError);
  CHECK_THROWS_AS(make(4, std::nullopt), eplan::MoralityOutOfRangeError);
  CHECK_THROWS_AS(make(1, std::pair<std::size_t, std::size_t>{2, 3}),
                  eplan::MoralityOutOfRangeError);
  CHECK_THROWS_AS(make(2, std::pair<std::size_t, std::size_t>{3, 2}),
                  eplan::MoralityOutOfRangeError);
  CHECK_THROWS_AS(make(2, std::pair<std::size_t, std::size_t>{0, 3}),
                  eplan::MoralityOutOfRangeError);
}

TEST_CASE("induce inserts desires at the morality slot") {
  MixedMotiveDomain m = hospital_mixed();
  std::vector<Formula> omega1 = {f("G !dangerous")};
  std::vector<Formula> omega2 = {f("G !annoyed")};
  std::vector<Formula> desires = {f("F destination"), f("F (destination & !waited)")};

  EthicalPlanningDomain d3 = eplan::induce(m);
  REQUIRE(d3.values.degree() == 3);
  CHECK(d3.values.level(1) == omega1);
  CHECK(d3.values.level(2) == omega2);
  CHECK(d3.values.level(3) == desires);

  // placement below the fixture's allowed range needs an unconstrained copy
  MixedMotiveDomain free{m.theory, m.initial, m.values, m.desires, m.morality, std::nullopt};
  EthicalPlanningDomain d1 = eplan::induce(free, 1);
  CHECK(d1.values.level(1) == desires);
  CHECK(d1.values.level(2) == omega1);
  CHECK(d1.values.level(3) == omega2);

  EthicalPlanningDomain d2 = eplan::induce(m, 2);
  CHECK(d2.values.level(1) == omega1);
  CHECK(d2.values.level(2) == desires);
  CHECK(d2.values.level(3) == omega2);

  CHECK_THROWS_AS(eplan::induce(m, 4), eplan::MoralityOutOfRangeError);
  CHECK_THROWS_AS(eplan::induce(m, 1), eplan::MoralityOutOfRangeError);  // range is 2..3
}

TEST_CASE("induce preserves the multiset of levels") {
  std::mt19937 rng(616161);
  std::vector<Proposition> ps = {Proposition("p"), Proposition("q")};
  for (int i = 0; i < 100; ++i) {
    std::vector<std::vector<Formula>> levels(1 + rng() % 3);
    for (auto& level : levels)
      for (std::size_t j = 0, n = rng() % 3; j < n; ++j)
        level.push_back(testutil::random_formula(rng, ps, 4));
    std::vector<Formula> desires;
    for (std::size_t j = 0, n = 1 + rng() % 2; j < n; ++j)
      desires.push_back(testutil::random_formula(rng, ps, 4));

    eplan::ActionTheory t(ps, {"a"});
    std::size_t mu = 1 + rng() % (levels.size() + 1);
    MixedMotiveDomain m{t, State{}, ValueBase(levels), desires, mu, std::nullopt};
    EthicalPlanningDomain induced = eplan::induce(m);
    REQUIRE(induced.values.degree() == levels.size() + 1);
    CHECK(induced.values.level(mu) == m.desires);
    std::size_t original = 0;
    for (std::size_t k = 1; k <= induced.values.degree(); ++k) {
      if (k == mu) continue;
      CHECK(induced.values.level(k) == m.values.level(++original));
    }
  }
}

TEST_CASE("qualitative comparison on the hospital runs") {
  ComparisonResult r3 = eplan::qual_compare(hospital(3), pi1, pi2);
  CHECK(r3.relation == Relation::FirstPreferred);
  REQUIRE(r3.deciding_level.has_value());
  CHECK(*r3.deciding_level == 2);
  REQUIRE(r3.witness.has_value());
  CHECK(r3.witness->first == std::vector<Formula>{f("G !annoyed")});
  CHECK(r3.witness->second.empty());

  ComparisonResult r2 = eplan::qual_compare(hospital(2), pi1, pi2);
  CHECK(r2.relation == Relation::SecondPreferred);
  REQUIRE(r2.deciding_level.has_value());
  CHECK(*r2.deciding_level == 2);

  ComparisonResult self = eplan::qual_compare(hospital(3), pi1, pi1);
  CHECK(self.relation == Relation::Equivalent);
  CHECK_FALSE(self.deciding_level.has_value());
  CHECK_FALSE(self.witness.has_value());
}

TEST_CASE("incomparable Sat-sets at the first differing level") {
  EthicalPlanningDomain d = fp_fq_domain();
  ComparisonResult qual = eplan::qual_compare(d, {"mkp"}, {"mkq"});
  CHECK(qual.relation == Relation::Incomparable);
  REQUIRE(qual.witness.has_value());
  CHECK(qual.witness->first == std::vector<Formula>{f("F p")});
  CHECK(qual.witness->second == std::vector<Formula>{f("F q")});

  ComparisonResult quant = eplan::quant_compare(d, {"mkp"}, {"mkq"});
  CHECK(quant.relation == Relation::Equivalent);
}

TEST_CASE("quantitative comparison counts satisfied values per level") {
  ComparisonResult r = eplan::quant_compare(hospital(3), pi1, pi2);
  CHECK(r.relation == Relation::FirstPreferred);
  REQUIRE(r.deciding_level.has_value());
  CHECK(*r.deciding_level == 2);
  CHECK(eplan::quant_compare(hospital(3), pi2, pi2).relation == Relation::Equivalent);
}

TEST_CASE("comparison requires matching level counts") {
  eplan::SatProfile a = {{f("F p")}};
  eplan::SatProfile b = {{f("F p")}, {}};
  CHECK_THROWS_AS(eplan::compare_profiles(a, b, CompareMode::Qualitative), eplan::Error);
}

TEST_CASE("qual is reflexive and transitive; quant is a total preorder") {
  std::mt19937 rng(717171);
  std::vector<Proposition> ps = {Proposition("p"), Proposition("q")};
  std::vector<eplan::ActionName> acts = {"x", "y"};
  for (int trial = 0; trial < 12; ++trial) {
    eplan::ActionTheory t = testutil::random_theory(rng, ps, acts);
    std::vector<std::vector<Formula>> levels(1 + rng() % 3);
    for (auto& level : levels)
      for (std::size_t j = 0, n = rng() % 3; j < n; ++j)
        level.push_back(testutil::random_formula(rng, ps, 5));
    EthicalPlanningDomain d{t, testutil::random_state(rng, ps), ValueBase(levels)};

    std::vector<Plan> plans;
    std::vector<eplan::ActionName> alphabet = t.actions();
    eplan::PlanEnumerator en(alphabet, 2, eplan::LengthMode::UpTo);
    Plan plan;
    while (en.next(plan)) plans.push_back(plan);

    std::vector<eplan::SatProfile> profiles;
    for (const Plan& pp : plans) profiles.push_back(eplan::sat_profile(d, pp));

    auto leq = [&](std::size_t i, std::size_t j) {
      Relation rel = eplan::compare_profiles(profiles[i], profiles[j], CompareMode::Qualitative)
                         .relation;
      return rel == Relation::SecondPreferred || rel == Relation::Equivalent;
    };
    for (std::size_t i = 0; i < plans.size(); ++i) CHECK(leq(i, i));
    for (std::size_t i = 0; i < plans.size(); ++i)
      for (std::size_t j = 0; j < plans.size(); ++j) {
        Relation quant =
            eplan::compare_profiles(profiles[i], profiles[j], CompareMode::Quantitative).relation;
        CHECK(quant != Relation::Incomparable);
        if (!leq(i, j)) continue;
        for (std::size_t k = 0; k < plans.size(); ++k)
          if (leq(j, k)) CHECK(leq(i, k));
      }
  }
}

TEST_CASE("qual-strict implies quant-strict") {
  std::mt19937 rng(818181);
  std::vector<Proposition> ps = {Proposition("p"), Proposition("q")};
  std::vector<eplan::ActionName> acts = {"x", "y"};
  int strict_seen = 0;
  for (int trial = 0; trial < 1200; ++trial) {
    eplan::ActionTheory t = testutil::random_theory(rng, ps, acts);
    std::vector<std::vector<Formula>> levels(1 + rng() % 2);
    for (auto& level : levels)
      for (std::size_t j = 0, n = 1 + rng() % 2; j < n; ++j)
        level.push_back(testutil::random_formula(rng, ps, 5));
    EthicalPlanningDomain d{t, testutil::random_state(rng, ps), ValueBase(levels)};
    Plan a, b;
    for (std::size_t j = 0, n = rng() % 4; j < n; ++j) a.push_back(acts[rng() % 2]);
    for (std::size_t j = 0, n = rng() % 4; j < n; ++j) b.push_back(acts[rng() % 2]);
    Relation qual = eplan::qual_compare(d, a, b).relation;
    if (qual == Relation::FirstPreferred || qual == Relation::SecondPreferred) {
      ++strict_seen;
      CHECK(eplan::quant_compare(d, a, b).relation == qual);
    }
  }
  CHECK(strict_seen > 10);
}

TEST_CASE("comparison depends on plans only through Sat-sets") {
  EthicalPlanningDomain d = hospital(3);
  // (move, move) and the empty plan never leave {blocked}: same profile
  CHECK(eplan::sat_profile(d, {"move", "move"}) == eplan::sat_profile(d, {}));
  CHECK(eplan::qual_compare(d, {"move", "move"}, {}).relation == Relation::Equivalent);
  CHECK(eplan::quant_compare(d, {"move", "move"}, {}).relation == Relation::Equivalent);
}

TEST_CASE("explain names the deciding level and formulas") {
  EthicalPlanningDomain d = hospital(3);
  std::string text = eplan::explain(d, pi1, pi2, CompareMode::Qualitative);
  CHECK(text.substr(0, text.find('\n')) == "plan1 preferred (level 2: G !annoyed)");
  CHECK(text.find("level 2: plan1 {G !annoyed} | plan2 {}") != std::string::npos);

  std::string self = eplan::explain(d, pi1, pi1, CompareMode::Qualitative);
  CHECK(self.substr(0, self.find('\n')) == "plans equivalent");
  CHECK(self.find("level 3:") != std::string::npos);

  std::string inc = eplan::explain(fp_fq_domain(), {"mkp"}, {"mkq"}, CompareMode::Qualitative);
  CHECK(inc.find("plans incomparable") == 0);
  CHECK(inc.find("level 1: plan1 {F p} | plan2 {F q}") != std::string::npos);
}

TEST_CASE("verdict strings") {
  CHECK(std::string_view(eplan::to_string(Relation::FirstPreferred)) == "plan1-preferred");
  CHECK(std::string_view(eplan::to_string(Relation::SecondPreferred)) == "plan2-preferred");
  CHECK(std::string_view(eplan::to_string(Relation::Equivalent)) == "equivalent");
  CHECK(std::string_view(eplan::to_string(Relation::Incomparable)) == "incomparable");
}
