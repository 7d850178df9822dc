#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eplan/errors.hpp"
#include "eplan/evaluation.hpp"
#include "eplan/parse.hpp"

namespace eplan {

struct EffectRule {
  bool positive = true;
  ActionName action;
  Proposition prop;
  Formula condition;

  friend bool operator==(const EffectRule&, const EffectRule&) = default;
};

// Parsed form of the native domain file: a `domain { ... }` block declaring
// the universe and effects, then a `problem { ... }` block with the initial
// state, value levels, desires, morality and default horizon.
struct DomainFile {
  std::vector<Proposition> propositions;
  std::vector<ActionName> actions;
  std::vector<EffectRule> effects;
  State init;
  std::vector<std::vector<Formula>> levels;
  std::optional<std::vector<Formula>> desires;
  std::optional<std::size_t> morality;
  std::optional<std::pair<std::size_t, std::size_t>> morality_range;
  std::optional<std::size_t> horizon;

  friend bool operator==(const DomainFile&, const DomainFile&) = default;
};

namespace detail {

class DomainFileParser {
 public:
  explicit DomainFileParser(std::string_view text) : text_(text) {}

  DomainFile parse() {
    next_line();
    expect_exact("domain {");
    parse_domain_block();
    expect_exact("problem {");
    parse_problem_block();
    if (!eof_) fail("unexpected text after the problem block");
    finish_validation();
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t column = 1) {
    throw SyntaxError(msg, column, line_no_);
  }

  void next_line() {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      if (std::size_t hash = raw.find('#'); hash != std::string_view::npos)
        raw = raw.substr(0, hash);
      std::size_t b = raw.find_first_not_of(" \t\r");
      if (b == std::string_view::npos) continue;
      std::size_t e = raw.find_last_not_of(" \t\r");
      line_ = raw.substr(b, e - b + 1);
      indent_ = b;
      return;
    }
    eof_ = true;
    line_ = {};
  }

  void expect_exact(std::string_view want) {
    if (eof_ || line_ != want) fail("expected '" + std::string(want) + "'");
    next_line();
  }

  std::size_t column_of(std::size_t offset_in_line) const { return indent_ + offset_in_line + 1; }

  static bool is_space(char c) { return c == ' ' || c == '\t'; }

  std::vector<std::string> split_idents(std::string_view text, std::size_t base_offset) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
      if (is_space(text[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < text.size() && !is_space(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (!is_identifier(word))
        fail("invalid identifier '" + word + "'", column_of(base_offset + i));
      out.push_back(std::move(word));
      i = j;
    }
    return out;
  }

  std::size_t parse_number(std::string_view text, std::size_t base_offset) {
    std::size_t b = 0;
    while (b < text.size() && is_space(text[b])) ++b;
    std::size_t e = text.size();
    while (e > b && is_space(text[e - 1])) --e;
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + b, text.data() + e, value);
    if (ec != std::errc() || ptr != text.data() + e || b == e)
      fail("expected a number, found '" + std::string(text.substr(b, e - b)) + "'",
           column_of(base_offset + b));
    return value;
  }

  Formula parse_formula_at(std::string_view text, std::size_t base_offset) {
    try {
      return parse_formula(text);
    } catch (const SyntaxError& err) {
      throw SyntaxError(err.what(), column_of(base_offset + err.position - 1), line_no_);
    }
  }

  std::vector<Formula> parse_formula_list(std::string_view text, std::size_t base_offset) {
    std::vector<Formula> out;
    std::size_t start = 0;
    while (true) {
      std::size_t semi = text.find(';', start);
      std::string_view piece =
          semi == std::string_view::npos ? text.substr(start) : text.substr(start, semi - start);
      out.push_back(parse_formula_at(piece, base_offset + start));
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
    return out;
  }

  bool declared_prop(const std::string& name) const {
    for (const Proposition& p : out_.propositions)
      if (p.name() == name) return true;
    return false;
  }

  bool declared_action(const std::string& name) const {
    for (const ActionName& a : out_.actions)
      if (a == name) return true;
    return false;
  }

  void require_declared_atoms(const Formula& f, std::size_t column) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom:
        if (!declared_prop(f.prop().name()))
          throw UndeclaredNameError("line " + std::to_string(line_no_) + ":" +
                                    std::to_string(column) + ": undeclared proposition '" +
                                    f.prop().name() + "'");
        return;
      case K::True:
      case K::False:
        return;
      case K::Not:
      case K::Next:
      case K::Eventually:
      case K::Henceforth:
        require_declared_atoms(f.child(), column);
        return;
      default:
        require_declared_atoms(f.left(), column);
        require_declared_atoms(f.right(), column);
        return;
    }
  }

  void parse_domain_block() {
    // propositions, then actions, then the effect rules.
    if (eof_ || !line_.starts_with("propositions:")) fail("expected 'propositions:'");
    for (std::string& name : split_idents(line_.substr(13), 13)) {
      if (name == kReservedTopName)
        fail("proposition name '" + name + "' is reserved");
      if (declared_prop(name)) fail("duplicate proposition '" + name + "'");
      out_.propositions.emplace_back(std::move(name));
    }
    if (out_.propositions.empty()) fail("at least one proposition is required");
    next_line();

    if (eof_ || !line_.starts_with("actions:")) fail("expected 'actions:'");
    for (std::string& name : split_idents(line_.substr(8), 8)) {
      if (declared_action(name)) fail("duplicate action '" + name + "'");
      out_.actions.push_back(std::move(name));
    }
    if (out_.actions.empty()) fail("at least one action is required");
    next_line();

    while (!eof_ && line_ != "}") {
      bool positive = line_.starts_with("effect+");
      if (!positive && !line_.starts_with("effect-")) fail("expected an effect rule or '}'");
      std::string_view rest = line_.substr(7);
      std::size_t colon = rest.find(':');
      if (colon == std::string_view::npos) fail("expected ':' in effect rule");
      std::vector<std::string> names = split_idents(rest.substr(0, colon), 7);
      if (names.size() != 2) fail("expected 'effect± ACTION PROPOSITION: formula'");
      const std::string& action = names[0];
      const std::string& prop = names[1];
      if (action == kNoopName) fail("'noop' cannot have effects");
      if (!declared_action(action))
        throw UndeclaredNameError("line " + std::to_string(line_no_) + ": undeclared action '" +
                                  action + "'");
      if (!declared_prop(prop))
        throw UndeclaredNameError("line " + std::to_string(line_no_) + ": undeclared proposition '" +
                                  prop + "'");
      for (const EffectRule& r : out_.effects)
        if (r.positive == positive && r.action == action && r.prop.name() == prop)
          fail("duplicate effect rule for (" + action + ", " + prop + ")");
      std::size_t fstart = 7 + colon + 1;
      Formula condition = parse_formula_at(line_.substr(fstart), fstart);
      if (!condition.is_propositional())
        throw NonPropositionalEffectError("line " + std::to_string(line_no_) +
                                          ": effect condition is not propositional: " +
                                          to_string(condition));
      require_declared_atoms(condition, column_of(fstart));
      out_.effects.push_back({positive, action, Proposition(prop), std::move(condition)});
      next_line();
    }
    expect_exact("}");
  }

  void parse_problem_block() {
    if (eof_ || !line_.starts_with("init:")) fail("expected 'init:'");
    std::vector<std::string> names = split_idents(line_.substr(5), 5);
    if (names.empty()) fail("expected an initial state or 'init: none'");
    if (!(names.size() == 1 && names[0] == "none")) {
      std::vector<Proposition> props;
      for (const std::string& name : names) {
        if (!declared_prop(name))
          throw UndeclaredNameError("line " + std::to_string(line_no_) +
                                    ": undeclared proposition '" + name + "'");
        props.emplace_back(name);
      }
      out_.init = State(std::move(props));
    }
    next_line();

    // values[k] lines in increasing k, then desires, morality,
    // morality-range and horizon, each at most once, in this order.
    int stage = 1;
    auto advance_stage = [&](int rank, std::string_view what) {
      // values lines repeat at rank 1 (their own index check keeps them
      // increasing); everything later is single-shot.
      if (stage > rank || (stage == rank && rank > 1))
        fail("'" + std::string(what) + "' is out of order or repeated");
      stage = rank;
    };

    while (!eof_ && line_ != "}") {
      if (line_.starts_with("values[")) {
        advance_stage(1, "values");
        std::size_t close = line_.find(']');
        if (close == std::string_view::npos) fail("expected ']' in values declaration");
        std::size_t index = parse_number(line_.substr(7, close - 7), 7);
        if (index < 1) fail("value levels start at 1");
        if (close + 1 >= line_.size() || line_[close + 1] != ':')
          fail("expected ':' after values[k]", column_of(close + 1));
        if (index <= out_.levels.size())
          fail("value level " + std::to_string(index) + " repeats or decreases");
        out_.levels.resize(index);
        std::size_t fstart = close + 2;
        std::vector<Formula> fs = parse_formula_list(line_.substr(fstart), fstart);
        for (const Formula& f : fs) require_declared_atoms(f, column_of(fstart));
        out_.levels[index - 1] = std::move(fs);
      } else if (line_.starts_with("desires:")) {
        advance_stage(2, "desires");
        std::vector<Formula> fs = parse_formula_list(line_.substr(8), 8);
        for (const Formula& f : fs) require_declared_atoms(f, column_of(8));
        out_.desires = std::move(fs);
      } else if (line_.starts_with("morality:")) {
        advance_stage(3, "morality");
        out_.morality = parse_number(line_.substr(9), 9);
      } else if (line_.starts_with("morality-range:")) {
        advance_stage(4, "morality-range");
        std::string_view rest = line_.substr(15);
        std::size_t dots = rest.find("..");
        if (dots == std::string_view::npos) fail("expected 'morality-range: LOW .. HIGH'");
        std::size_t lo = parse_number(rest.substr(0, dots), 15);
        std::size_t hi = parse_number(rest.substr(dots + 2), 15 + dots + 2);
        out_.morality_range = {lo, hi};
      } else if (line_.starts_with("horizon:")) {
        advance_stage(5, "horizon");
        out_.horizon = parse_number(line_.substr(8), 8);
      } else {
        fail("unexpected problem declaration");
      }
      next_line();
    }
    expect_exact("}");
  }

  void finish_validation() {
    std::size_t top = out_.levels.size() + 1;
    if (out_.morality_range) {
      auto [lo, hi] = *out_.morality_range;
      if (lo < 1 || lo > hi || hi > top)
        throw MoralityOutOfRangeError("morality-range " + std::to_string(lo) + ".." +
                                      std::to_string(hi) + " not within 1.." +
                                      std::to_string(top));
    }
    if (out_.morality) {
      if (*out_.morality < 1 || *out_.morality > top)
        throw MoralityOutOfRangeError("morality " + std::to_string(*out_.morality) +
                                      " not within 1.." + std::to_string(top));
      if (out_.morality_range &&
          (*out_.morality < out_.morality_range->first || *out_.morality > out_.morality_range->second))
        throw MoralityOutOfRangeError("morality " + std::to_string(*out_.morality) +
                                      " outside the allowed range");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
  std::string_view line_;
  std::size_t indent_ = 0;
  bool eof_ = false;
  DomainFile out_;
};

}  // namespace detail

inline DomainFile parse_domain_file(std::string_view text) {
  return detail::DomainFileParser(text).parse();
}

// Canonical rendering; parse_domain_file(render_domain_file(d)) == d for any
// d this can express (trailing empty value levels and empty declared lists
// have no syntax and are rejected).
inline std::string render_domain_file(const DomainFile& d) {
  if (d.propositions.empty() || d.actions.empty())
    throw Error("cannot render a domain without propositions or actions");
  if (!d.levels.empty() && d.levels.back().empty())
    throw Error("cannot render a trailing empty value level");
  if (d.desires && d.desires->empty()) throw Error("cannot render an empty desires declaration");

  std::ostringstream os;
  auto formula_list = [&](const std::vector<Formula>& fs) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (i) os << "; ";
      os << fs[i];
    }
  };

  os << "domain {\n";
  os << "  propositions:";
  for (const Proposition& p : d.propositions) os << ' ' << p.name();
  os << "\n  actions:";
  for (const ActionName& a : d.actions) os << ' ' << a;
  os << '\n';
  for (const EffectRule& r : d.effects)
    os << "  effect" << (r.positive ? '+' : '-') << ' ' << r.action << ' ' << r.prop.name() << ": "
       << r.condition << '\n';
  os << "}\n";

  os << "problem {\n";
  os << "  init:";
  if (d.init.empty()) {
    os << " none";
  } else {
    for (const Proposition& p : d.init) os << ' ' << p.name();
  }
  os << '\n';
  for (std::size_t k = 0; k < d.levels.size(); ++k) {
    if (d.levels[k].empty()) continue;
    os << "  values[" << k + 1 << "]: ";
    formula_list(d.levels[k]);
    os << '\n';
  }
  if (d.desires) {
    os << "  desires: ";
    formula_list(*d.desires);
    os << '\n';
  }
  if (d.morality) os << "  morality: " << *d.morality << '\n';
  if (d.morality_range)
    os << "  morality-range: " << d.morality_range->first << " .. " << d.morality_range->second
       << '\n';
  if (d.horizon) os << "  horizon: " << *d.horizon << '\n';
  os << "}\n";
  return os.str();
}

inline ActionTheory build_theory(const DomainFile& d) {
  ActionTheory theory(d.propositions, d.actions);
  for (const EffectRule& r : d.effects) {
    if (r.positive)
      theory.set_positive(r.action, r.prop, r.condition);
    else
      theory.set_negative(r.action, r.prop, r.condition);
  }
  return theory;
}

// Morality defaults to dg+1 (desires last) when the file does not set it.
inline MixedMotiveDomain build_mixed_domain(const DomainFile& d,
                                            std::optional<std::size_t> morality_override = {}) {
  ValueBase values(d.levels);
  std::size_t mu = morality_override.value_or(d.morality.value_or(values.degree() + 1));
  return MixedMotiveDomain(build_theory(d), d.init, std::move(values),
                           d.desires.value_or(std::vector<Formula>{}), mu, d.morality_range);
}

// The comparison domain a file denotes: its value levels with desires
// inserted at the morality slot, or the bare levels when the file has no
// desires (or they are deliberately omitted).
inline EthicalPlanningDomain build_domain(const DomainFile& d,
                                          std::optional<std::size_t> morality_override = {},
                                          bool omit_desires = false) {
  if (omit_desires || !d.desires)
    return EthicalPlanningDomain(build_theory(d), d.init, ValueBase(d.levels));
  return induce(build_mixed_domain(d, morality_override));
}

}  // namespace eplan
