#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eplan/eplan.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::string file;
  bool json_out = false;
  std::optional<std::size_t> morality;
  std::optional<std::size_t> horizon;
  bool quant = false;
  bool exact_length = false;
  bool collapse_profiles = false;
  bool omit_desires = false;
  std::string plan;
  std::string plan1;
  std::string plan2;
  std::string criterion = "qual";
};

eplan::Plan split_plan(const std::string& text) {
  eplan::Plan plan;
  std::size_t start = 0;
  if (text.empty()) return plan;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string piece =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    std::size_t b = piece.find_first_not_of(" \t");
    std::size_t e = piece.find_last_not_of(" \t");
    plan.push_back(b == std::string::npos ? std::string() : piece.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return plan;
}

eplan::DomainFile load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eplan::Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return eplan::parse_domain_file(buffer.str());
}

std::size_t required_horizon(const Options& opt, const eplan::DomainFile& df) {
  if (opt.horizon) return *opt.horizon;
  if (df.horizon) return *df.horizon;
  throw CLI::RequiredError("--horizon (the file declares no default)");
}

json plan_json(const eplan::Plan& plan) { return json(plan); }

json formulas_json(const std::vector<eplan::Formula>& fs) {
  json a = json::array();
  for (const eplan::Formula& f : fs) a.push_back(eplan::to_string(f));
  return a;
}

void emit(const Options& opt, const std::string& command, const std::string& verdict,
          const json& details, const std::string& plain) {
  if (opt.json_out) {
    json out{{"command", command}, {"verdict", verdict}, {"details", details}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << plain;
  }
}

int cmd_check(const Options& opt) {
  eplan::DomainFile df = load(opt.file);
  eplan::MixedMotiveDomain domain = eplan::build_mixed_domain(df, opt.morality);
  json details{{"propositions", df.propositions.size()},
               {"actions", domain.theory.actions().size()},
               {"effects", df.effects.size()},
               {"levels", df.levels.size()},
               {"desires", domain.desires.size()},
               {"morality", domain.morality}};
  std::ostringstream plain;
  plain << "valid\n"
        << df.propositions.size() << " propositions, " << domain.theory.actions().size()
        << " actions, " << df.effects.size() << " effect rules\n"
        << df.levels.size() << " value levels, " << domain.desires.size()
        << " desires, morality " << domain.morality << "\n";
  emit(opt, "check", "valid", details, plain.str());
  return 0;
}

int cmd_simulate(const Options& opt) {
  eplan::DomainFile df = load(opt.file);
  eplan::EthicalPlanningDomain domain = eplan::build_domain(df, opt.morality);
  eplan::Plan plan = split_plan(opt.plan);
  eplan::History h = eplan::generate_history(plan, domain.initial, domain.theory);

  json states = json::array();
  for (const eplan::State& s : h.states()) {
    json row = json::array();
    for (const eplan::Proposition& p : s) row.push_back(p.name());
    states.push_back(row);
  }
  json values = json::array();
  std::ostringstream plain;
  plain << "ok\n";
  for (std::size_t t = 0; t <= h.length(); ++t) {
    plain << "step " << t;
    if (t > 0) plain << " (" << h.action(t) << ")";
    plain << ": " << eplan::to_string(h.state(t)) << "\n";
  }
  for (std::size_t k = 1; k <= domain.values.degree(); ++k) {
    for (const eplan::Formula& f : domain.values.level(k)) {
      bool sat = eplan::evaluate(f, h);
      values.push_back(json{{"level", k}, {"formula", eplan::to_string(f)}, {"satisfied", sat}});
      plain << "level " << k << ": " << f << ": " << (sat ? "sat" : "unsat") << "\n";
    }
  }
  json details{{"states", states}, {"actions", plan}, {"values", values}};
  emit(opt, "simulate", "ok", details, plain.str());
  return 0;
}

int cmd_compare(const Options& opt) {
  eplan::DomainFile df = load(opt.file);
  eplan::EthicalPlanningDomain domain = eplan::build_domain(df, opt.morality);
  eplan::Plan p1 = split_plan(opt.plan1);
  eplan::Plan p2 = split_plan(opt.plan2);
  eplan::CompareMode mode =
      opt.quant ? eplan::CompareMode::Quantitative : eplan::CompareMode::Qualitative;
  eplan::ComparisonResult r = eplan::compare(domain, p1, p2, mode);
  std::string verdict = eplan::render_verdict(r);

  json details{{"relation", eplan::to_string(r.relation)},
               {"mode", opt.quant ? "quant" : "qual"}};
  if (r.deciding_level) details["deciding_level"] = *r.deciding_level;
  if (r.witness) {
    details["plan1_sat"] = formulas_json(r.witness->first);
    details["plan2_sat"] = formulas_json(r.witness->second);
  }
  emit(opt, "compare", verdict, details, eplan::explain(domain, p1, p2, mode));
  return 0;
}

int cmd_solve(const Options& opt) {
  eplan::DomainFile df = load(opt.file);
  eplan::EthicalPlanningDomain domain = eplan::build_domain(df, opt.morality);
  std::size_t horizon = required_horizon(opt, df);
  eplan::PlanQuery q{std::move(domain), eplan::Horizon{horizon},
                     opt.quant ? eplan::CompareMode::Quantitative : eplan::CompareMode::Qualitative,
                     opt.exact_length ? eplan::LengthMode::Exact : eplan::LengthMode::UpTo};

  json details{{"horizon", horizon},
               {"mode", opt.quant ? "quant" : "qual"},
               {"lengths", opt.exact_length ? "exact" : "upto"}};
  std::ostringstream plain;
  plain << "ok\n";
  if (opt.collapse_profiles) {
    std::vector<eplan::ProfileGroup> groups = eplan::non_dominated_profiles(q);
    json jgroups = json::array();
    plain << groups.size() << " non-dominated profiles at horizon " << horizon << "\n";
    for (const eplan::ProfileGroup& g : groups) {
      json profile = json::array();
      for (const std::vector<eplan::Formula>& level : g.profile) profile.push_back(formulas_json(level));
      jgroups.push_back(json{{"representative", plan_json(g.representative)},
                             {"count", g.plans},
                             {"profile", profile}});
      plain << "  " << eplan::to_string(g.representative) << " (" << g.plans << " plans):";
      for (const std::vector<eplan::Formula>& level : g.profile)
        plain << " [" << eplan::detail::formula_list(level) << "]";
      plain << "\n";
    }
    details["groups"] = jgroups;
  } else {
    std::vector<eplan::Plan> plans = eplan::non_dominated_set(q);
    json jplans = json::array();
    plain << plans.size() << " non-dominated plans at horizon " << horizon << "\n";
    for (const eplan::Plan& p : plans) {
      jplans.push_back(plan_json(p));
      plain << "  " << eplan::to_string(p) << "\n";
    }
    details["plans"] = jplans;
  }
  emit(opt, "solve", "ok", details, plain.str());
  return 0;
}

int cmd_conflict(const Options& opt) {
  eplan::DomainFile df = load(opt.file);
  eplan::EthicalPlanningDomain domain = eplan::build_domain(df, opt.morality, opt.omit_desires);
  std::size_t horizon = required_horizon(opt, df);
  eplan::MoralProblem problem(domain.values.flatten(), domain.theory, domain.initial);
  std::optional<eplan::Plan> witness =
      eplan::find_satisfying_plan(problem, eplan::Horizon{horizon});

  std::string verdict = witness ? "no-conflict" : "conflict";
  json details{{"horizon", horizon}, {"values", formulas_json(problem.values)}};
  std::ostringstream plain;
  plain << verdict << "\n";
  if (witness) {
    details["witness"] = plan_json(*witness);
    plain << "witness plan: " << eplan::to_string(*witness) << "\n";
  } else {
    plain << "no plan of length <= " << horizon << " satisfies all " << problem.values.size()
          << " values\n";
  }
  emit(opt, "conflict", verdict, details, plain.str());
  return 0;
}

int cmd_contract(const Options& opt) {
  eplan::DomainFile df = load(opt.file);
  eplan::EthicalPlanningDomain domain = eplan::build_domain(df, opt.morality);
  std::size_t horizon = required_horizon(opt, df);
  eplan::MoralProblem problem(domain.values.flatten(), domain.theory, domain.initial);

  eplan::MinimalityCriterion criterion = eplan::MinimalityCriterion::Qual;
  if (opt.criterion == "quant") criterion = eplan::MinimalityCriterion::Quant;
  if (opt.criterion == "lex") criterion = eplan::MinimalityCriterion::Lex;
  std::vector<eplan::MoralProblem> minimal = eplan::enumerate_minimal_contractions(
      problem, eplan::Horizon{horizon}, criterion,
      criterion == eplan::MinimalityCriterion::Lex ? &domain.values : nullptr);

  json jmin = json::array();
  std::ostringstream plain;
  plain << "ok\n"
        << minimal.size() << " " << opt.criterion << "-minimal contractions at horizon " << horizon
        << "\n";
  for (const eplan::MoralProblem& m : minimal) {
    jmin.push_back(formulas_json(m.values));
    plain << "  {" << eplan::detail::formula_list(m.values) << "}\n";
  }
  json details{{"horizon", horizon}, {"criterion", opt.criterion}, {"minimal", jmin}};
  emit(opt, "contract", "ok", details, plain.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ethical planning engine"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", opt.file, "domain file")->required();
    sub->add_flag("--json", opt.json_out, "emit JSON");
    sub->add_option("--morality", opt.morality, "override the morality degree");
  };

  CLI::App* check = app.add_subcommand("check", "validate a domain file");
  add_common(check);

  CLI::App* simulate = app.add_subcommand("simulate", "run a plan and show its history");
  add_common(simulate);
  simulate->add_option("--plan", opt.plan, "comma-separated actions")->required();

  CLI::App* compare = app.add_subcommand("compare", "compare two plans");
  add_common(compare);
  compare->add_option("--plan1", opt.plan1, "first plan")->required();
  compare->add_option("--plan2", opt.plan2, "second plan")->required();
  compare->add_flag("--quant", opt.quant, "use the quantitative ordering");

  CLI::App* solve = app.add_subcommand("solve", "enumerate non-dominated plans");
  add_common(solve);
  solve->add_option("--horizon", opt.horizon, "maximum plan length");
  solve->add_flag("--quant", opt.quant, "use the quantitative ordering");
  solve->add_flag("--exact-length", opt.exact_length, "consider only plans of exactly the horizon length");
  solve->add_flag("--collapse-profiles", opt.collapse_profiles, "group plans by satisfaction profile");

  CLI::App* conflict = app.add_subcommand("conflict", "decide bounded moral conflict");
  add_common(conflict);
  conflict->add_option("--horizon", opt.horizon, "maximum plan length");
  conflict->add_flag("--omit-desires", opt.omit_desires, "use only the value levels");

  CLI::App* contract = app.add_subcommand("contract", "enumerate minimal contractions");
  add_common(contract);
  contract->add_option("--horizon", opt.horizon, "maximum plan length");
  contract->add_option("--criterion", opt.criterion, "qual, quant or lex")
      ->check(CLI::IsMember({"qual", "quant", "lex"}));

  try {
    app.parse(argc, argv);
    if (check->parsed()) return cmd_check(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (solve->parsed()) return cmd_solve(opt);
    if (conflict->parsed()) return cmd_conflict(opt);
    if (contract->parsed()) return cmd_contract(opt);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const eplan::Error& e) {
    if (opt.json_out) {
      nlohmann::json out{{"command", app.get_subcommands().empty()
                                         ? std::string()
                                         : app.get_subcommands()[0]->get_name()},
                         {"verdict", "error"},
                         {"details", nlohmann::json{{"message", e.what()}}}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
  }
}
