#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "parser.hpp"
#include "systems.hpp"

namespace wkmodal {

struct Justification {
  enum class Kind : std::uint8_t { premise, axiom, rule, taut };
  Kind kind = Kind::premise;
  std::string name;                                      // axiom or rule name
  std::vector<std::pair<std::string, Formula>> bindings;  // ax ... ?x=<formula>
  std::vector<std::size_t> refs;                          // rule line labels
};

struct ProofStep {
  std::size_t label = 0;
  Formula formula = Formula::zero();
  Justification just;
  std::size_t source_line = 0;
};

struct ProofScript {
  std::optional<std::string> system;
  std::vector<Formula> premises;
  std::vector<ProofStep> steps;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string normalize_name(std::string_view name) {
  std::string s(name);
  const std::string rho = "\xCF\x81-";
  if (s.rfind(rho, 0) == 0) s = "rho-" + s.substr(rho.size());
  return s;
}

inline Formula parse_at(std::string_view text, std::size_t line) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw FormatError("line " + std::to_string(line) + ": " + e.what());
  }
}

inline Justification parse_justification(std::string_view text, std::size_t line) {
  auto fail = [&](const std::string& msg) { throw FormatError("line " + std::to_string(line) + ": " + msg); };
  Justification j;
  text = trim(text);
  std::string_view head = text.substr(0, text.find_first_of(" \t"));
  std::string_view rest = trim(text.substr(head.size()));
  if (head == "premise") {
    if (!rest.empty()) fail("'premise' takes no arguments");
    j.kind = Justification::Kind::premise;
  } else if (head == "taut") {
    if (!rest.empty()) fail("'taut' takes no arguments");
    j.kind = Justification::Kind::taut;
  } else if (head == "ax") {
    j.kind = Justification::Kind::axiom;
    std::string_view name = rest.substr(0, rest.find_first_of(" \t"));
    if (name.empty()) fail("axiom name missing");
    j.name = normalize_name(name);
    std::string subs(trim(rest.substr(name.size())));
    static const std::regex meta(R"(\?([A-Za-z]\w*)\s*=)");
    std::vector<std::pair<std::string, std::size_t>> marks;  // name, start of value
    std::vector<std::size_t> starts;
    for (auto it = std::sregex_iterator(subs.begin(), subs.end(), meta); it != std::sregex_iterator(); ++it) {
      marks.emplace_back("?" + (*it)[1].str(), static_cast<std::size_t>(it->position() + it->length()));
      starts.push_back(static_cast<std::size_t>(it->position()));
    }
    if (marks.empty() && !trim(subs).empty()) fail("expected ?name=<formula> bindings");
    if (!marks.empty() && starts.front() != 0) fail("expected ?name=<formula> bindings");
    for (std::size_t i = 0; i < marks.size(); ++i) {
      std::size_t end = i + 1 < marks.size() ? starts[i + 1] : subs.size();
      j.bindings.emplace_back(marks[i].first,
                              parse_at(std::string_view(subs).substr(marks[i].second, end - marks[i].second), line));
    }
  } else if (head == "rule") {
    j.kind = Justification::Kind::rule;
    std::istringstream in{std::string(rest)};
    std::string name;
    if (!(in >> name)) fail("rule name missing");
    j.name = normalize_name(name);
    std::string ref;
    while (in >> ref) {
      std::size_t pos = 0;
      unsigned long n = 0;
      try {
        n = std::stoul(ref, &pos);
      } catch (const std::exception&) {
        fail("bad line reference '" + ref + "'");
      }
      if (pos != ref.size()) fail("bad line reference '" + ref + "'");
      j.refs.push_back(n);
    }
    if (j.refs.empty() || j.refs.size() > 2) fail("a rule cites one or two lines");
  } else {
    fail("unknown justification '" + std::string(head) + "'");
  }
  return j;
}

}  // namespace detail

/// Reads a proof script:
///   system: Bbox            (optional header)
///   premise: <formula>      (declared premises, any number)
///   1. <formula> ; premise | taut | ax <name> [?x=<formula> ...] | rule <name> <n1> [<n2>]
/// '#' starts a comment. Throws FormatError on malformed text.
inline ProofScript parse_proof_script(std::string_view text) {
  ProofScript script;
  std::size_t line_no = 0;
  std::set<std::size_t> labels;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) { throw FormatError("line " + std::to_string(line_no) + ": " + msg); };
    if (line.rfind("system:", 0) == 0) {
      if (script.system) fail("duplicate system header");
      script.system = std::string(detail::trim(line.substr(7)));
      continue;
    }
    if (line.rfind("premise:", 0) == 0) {
      script.premises.push_back(detail::parse_at(line.substr(8), line_no));
      continue;
    }
    std::size_t dot = line.find('.');
    if (dot == std::string_view::npos || dot == 0) fail("expected 'n. <formula> ; <justification>'");
    std::size_t label = 0;
    for (char c : line.substr(0, dot)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail("expected a line number");
      label = label * 10 + static_cast<std::size_t>(c - '0');
    }
    if (!labels.insert(label).second) fail("duplicate line number " + std::to_string(label));
    if (!script.steps.empty() && label <= script.steps.back().label) fail("line numbers must increase");
    std::string_view body = line.substr(dot + 1);
    std::size_t semi = body.find(';');
    if (semi == std::string_view::npos) fail("missing ';' before the justification");
    ProofStep step;
    step.label = label;
    step.formula = detail::parse_at(body.substr(0, semi), line_no);
    step.just = detail::parse_justification(body.substr(semi + 1), line_no);
    step.source_line = line_no;
    script.steps.push_back(std::move(step));
  }
  return script;
}

/// Classical skeleton of an external formula: ~, | and constants are read
/// Booleanly, J2 of an external formula is dropped, and every other
/// subformula (boxes, J2 of non-external formulas) is an atom. Returns
/// whether the skeleton is a two-valued tautology. Works on core formulas.
inline bool skeleton_tautology(const Formula& formula, std::size_t max_atoms = 20) {
  Formula f = expand_sugar(formula);
  if (!is_external(f)) return false;
  std::unordered_map<Formula, std::size_t, FormulaHash> atoms;
  std::unordered_map<Formula, bool, FormulaHash> external_cache;
  auto external = [&](const Formula& g) {
    auto it = external_cache.find(g);
    if (it != external_cache.end()) return it->second;
    bool e = is_external(g);
    external_cache.emplace(g, e);
    return e;
  };
  auto collect = [&](auto&& self, const Formula& g) -> void {
    switch (g.op()) {
      case Op::zero:
      case Op::one: return;
      case Op::neg: self(self, g.arg(0)); return;
      case Op::disj:
        self(self, g.arg(0));
        self(self, g.arg(1));
        return;
      case Op::j2:
        if (external(g.arg(0))) self(self, g.arg(0));
        else atoms.emplace(g, atoms.size());
        return;
      default: atoms.emplace(g, atoms.size()); return;
    }
  };
  collect(collect, f);
  if (atoms.size() > max_atoms) return false;
  auto eval = [&](auto&& self, const Formula& g, std::uint64_t mask) -> bool {
    switch (g.op()) {
      case Op::zero: return false;
      case Op::one: return true;
      case Op::neg: return !self(self, g.arg(0), mask);
      case Op::disj: return self(self, g.arg(0), mask) || self(self, g.arg(1), mask);
      case Op::j2:
        if (external(g.arg(0))) return self(self, g.arg(0), mask);
        [[fallthrough]];
      default: return ((mask >> atoms.at(g)) & 1U) != 0;
    }
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask)
    if (!eval(eval, f, mask)) return false;
  return true;
}

/// Whether `to` is `from` with some occurrences of a replaced by b or b by a.
/// All arguments are core formulas.
inline bool replaces(const Formula& from, const Formula& to, const Formula& a, const Formula& b) {
  if (from == to) return true;
  if ((from == a && to == b) || (from == b && to == a)) return true;
  if (from.op() != to.op() || from.name() != to.name() || from.args().size() != to.args().size()) return false;
  for (std::size_t i = 0; i < from.args().size(); ++i)
    if (!replaces(from.arg(i), to.arg(i), a, b)) return false;
  return true;
}

struct LineReport {
  std::size_t label = 0;
  Formula formula = Formula::zero();
  std::set<std::size_t> depends_on;  // indices into ProofScript::premises
  std::string used;                  // the axiom instance or rule that matched
};

struct ProofReport {
  bool accepted = false;
  std::string system;
  std::optional<std::size_t> failing_label;
  std::size_t failing_source_line = 0;
  std::string reason;
  std::vector<LineReport> lines;  // the lines checked successfully
};

struct CheckOptions {
  bool strict = false;  // disable derived rules (MP in the algebraic calculi, taut, RE)
};

namespace detail {

inline std::string describe(const Substitution& b) {
  std::string out;
  for (const auto& [k, v] : b) {
    if (!out.empty()) out += ", ";
    out += k + "=" + to_string(v);
  }
  return out;
}

inline bool rule_condition_holds(const InferenceRule& r, const Substitution& b,
                                 const std::vector<const LineReport*>& prem, std::string& why) {
  switch (r.condition) {
    case RuleCondition::none: return true;
    case RuleCondition::theorem_only:
      if (!prem[0]->depends_on.empty()) {
        why = "N applies only to lines that depend on no premise";
        return false;
      }
      return true;
    case RuleCondition::rmp:
      if (!rmp_applicable(b.at("?phi"), b.at("?psi"))) {
        why = "RMP side condition fails: a variable open in the minor premise is covered in the conclusion";
        return false;
      }
      return true;
    case RuleCondition::external_mp:
      if (!is_external(b.at("?phi")) || !is_external(b.at("?psi"))) {
        why = "modus ponens is restricted to external formulas here";
        return false;
      }
      return true;
  }
  return true;
}

}  // namespace detail

inline ProofReport check_proof(const ProofScript& script, const ProofSystem& sys, const CheckOptions& opts = {}) {
  ProofReport rep;
  rep.system = sys.id;
  std::vector<Formula> premise_core;
  for (const auto& p : script.premises) premise_core.push_back(expand_sugar(p));
  std::map<std::size_t, std::size_t> by_label;  // label -> index in rep.lines
  std::vector<Formula> cores;

  for (const auto& step : script.steps) {
    LineReport line{step.label, step.formula, {}, {}};
    Formula core = expand_sugar(step.formula);
    std::string why;
    bool ok = false;
    const auto& j = step.just;
    switch (j.kind) {
      case Justification::Kind::premise: {
        for (std::size_t i = 0; i < premise_core.size() && !ok; ++i) {
          if (premise_core[i] == core) {
            ok = true;
            line.depends_on.insert(i);
            line.used = "premise " + std::to_string(i + 1);
          }
        }
        if (!ok) why = "not a declared premise";
        break;
      }
      case Justification::Kind::taut: {
        if (!sys.taut || opts.strict) {
          why = "taut is not available in " + sys.id + (opts.strict ? " (strict mode)" : "");
        } else if (!is_external(core)) {
          why = "taut needs an external formula";
        } else if (!skeleton_tautology(core)) {
          why = "classical skeleton is not a tautology";
        } else {
          ok = true;
          line.used = "taut";
        }
        break;
      }
      case Justification::Kind::axiom: {
        auto candidates = sys.axioms_named(j.name);
        if (candidates.empty()) {
          why = "no axiom '" + j.name + "' in " + sys.id;
          break;
        }
        Substitution seed;
        for (const auto& [k, v] : j.bindings) seed.insert_or_assign(k, v);
        why = "does not match " + j.name;
        for (const auto* ax : candidates) {
          auto metas = metavariables(ax->pattern);
          bool unknown = false;
          for (const auto& [k, v] : seed)
            if (std::find(metas.begin(), metas.end(), k) == metas.end()) unknown = true;
          if (unknown) {
            why = "binding names a metavariable that " + j.name + " does not have";
            continue;
          }
          if (auto b = match_schema(core, *ax, seed)) {
            ok = true;
            line.used = ax->name + (b->empty() ? "" : " [" + detail::describe(*b) + "]");
            break;
          }
          if (ax->condition == SchemaCondition::external_metavariables) {
            Substitution unchecked;
            for (const auto& [k, v] : seed) unchecked.emplace(k, expand_sugar(v));
            if (detail::match_core(ax->core(), core, unchecked))
              why = ax->name + " requires external instances";
          }
        }
        break;
      }
      case Justification::Kind::rule: {
        std::vector<const LineReport*> prem;
        std::vector<Formula> prem_core;
        for (auto r : j.refs) {
          auto it = by_label.find(r);
          if (it == by_label.end()) {
            why = "cites line " + std::to_string(r) + ", which does not precede it";
            break;
          }
          prem.push_back(&rep.lines[it->second]);
          prem_core.push_back(cores[it->second]);
        }
        if (prem.size() != j.refs.size()) break;
        if (j.name == "RE") {
          if (!sys.replacement || opts.strict) {
            why = "RE is not available in " + sys.id + (opts.strict ? " (strict mode)" : "");
            break;
          }
          if (prem.size() != 2) {
            why = "RE cites an equivalence line and a target line";
            break;
          }
          static const AxiomSchema eq("equivalence", parse("?phi === ?psi"));
          auto b = match_schema(prem_core[0], eq);
          if (!b) {
            why = "first cited line is not of the form phi === psi";
            break;
          }
          if (sys.modal && !prem[0]->depends_on.empty()) {
            why = "RE needs an equivalence that depends on no premise";
            break;
          }
          if (!replaces(prem_core[1], core, b->at("?phi"), b->at("?psi"))) {
            why = "not obtained from line " + std::to_string(j.refs[1]) + " by replacing equivalents";
            break;
          }
          ok = true;
          line.used = "RE";
          for (const auto* p : prem) line.depends_on.insert(p->depends_on.begin(), p->depends_on.end());
          break;
        }
        auto rules = sys.rules_named(j.name);
        if (rules.empty()) {
          why = "no rule '" + j.name + "' in " + sys.id;
          break;
        }
        why = "does not follow by " + j.name;
        for (const auto* r : rules) {
          if (r->derived && opts.strict) {
            why = j.name + " is disabled in strict mode";
            continue;
          }
          if (r->premises.size() != prem.size()) {
            why = j.name + " takes " + std::to_string(r->premises.size()) + " premise line(s)";
            continue;
          }
          std::vector<std::vector<std::size_t>> orders = {{0}};
          if (prem.size() == 2) orders = {{0, 1}, {1, 0}};
          for (const auto& order : orders) {
            Substitution b;
            bool m = true;
            for (std::size_t i = 0; i < order.size() && m; ++i)
              m = detail::match_core(expand_sugar(r->premises[i]), prem_core[order[i]], b);
            if (!m || !detail::match_core(expand_sugar(r->conclusion), core, b)) continue;
            std::vector<const LineReport*> ordered;
            for (auto o : order) ordered.push_back(prem[o]);
            if (!detail::rule_condition_holds(*r, b, ordered, why)) continue;
            ok = true;
            line.used = r->name;
            for (const auto* p : prem) line.depends_on.insert(p->depends_on.begin(), p->depends_on.end());
            break;
          }
          if (ok) break;
        }
        break;
      }
    }
    if (!ok) {
      rep.failing_label = step.label;
      rep.failing_source_line = step.source_line;
      rep.reason = why;
      return rep;
    }
    by_label.emplace(step.label, rep.lines.size());
    rep.lines.push_back(std::move(line));
    cores.push_back(std::move(core));
  }
  if (rep.lines.empty()) {
    rep.reason = "empty proof";
    return rep;
  }
  rep.accepted = true;
  return rep;
}

/// Checks against the script's own system header.
inline ProofReport check_proof(const ProofScript& script, const CheckOptions& opts = {}) {
  if (!script.system) throw Error("proof script names no system");
  return check_proof(script, make_system(*script.system), opts);
}

}  // namespace wkmodal
