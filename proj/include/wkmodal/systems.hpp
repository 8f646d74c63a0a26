#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "parser.hpp"

namespace wkmodal {

enum class SchemaCondition : std::uint8_t { none, external_metavariables };

/// An axiom schema over metavariables ?phi, ?psi, ... An index family such
/// as A12 is stored as its instances, each with `family` set.
struct AxiomSchema {
  std::string name;
  Formula pattern;
  SchemaCondition condition = SchemaCondition::none;
  std::string family;

  AxiomSchema(std::string n, Formula p, SchemaCondition c = SchemaCondition::none, std::string fam = {})
      : name(std::move(n)), pattern(std::move(p)), condition(c), family(std::move(fam)), core_(expand_sugar(pattern)) {}

  const Formula& core() const noexcept { return core_; }

 private:
  Formula core_;
};

namespace detail {

inline bool match_core(const Formula& pat, const Formula& f, Substitution& b) {
  if (pat.op() == Op::var && is_metavariable(pat.name())) {
    auto [it, fresh] = b.emplace(pat.name(), f);
    return fresh || it->second == f;
  }
  if (pat.op() != f.op() || pat.name() != f.name() || pat.args().size() != f.args().size()) return false;
  for (std::size_t i = 0; i < pat.args().size(); ++i)
    if (!match_core(pat.arg(i), f.arg(i), b)) return false;
  return true;
}

inline void collect_metavariables(const Formula& f, std::vector<std::string>& out) {
  if (f.op() == Op::var) {
    if (is_metavariable(f.name()) && std::find(out.begin(), out.end(), f.name()) == out.end())
      out.push_back(f.name());
    return;
  }
  for (const auto& a : f.args()) collect_metavariables(a, out);
}

}  // namespace detail

inline std::vector<std::string> metavariables(const Formula& f) {
  std::vector<std::string> out;
  detail::collect_metavariables(f, out);
  return out;
}

/// Matches the expanded formula against the expanded pattern. `seed` fixes
/// some metavariables in advance. Bindings are core formulas.
inline std::optional<Substitution> match_schema(const Formula& f, const AxiomSchema& s, const Substitution& seed = {}) {
  Substitution b;
  for (const auto& [k, v] : seed) b.emplace(k, expand_sugar(v));
  if (!detail::match_core(s.core(), expand_sugar(f), b)) return std::nullopt;
  if (s.condition == SchemaCondition::external_metavariables)
    for (const auto& [k, v] : b)
      if (!is_external(v)) return std::nullopt;
  return b;
}

enum class RuleCondition : std::uint8_t { none, theorem_only, rmp, external_mp };

struct InferenceRule {
  std::string name;
  std::vector<Formula> premises;
  Formula conclusion;
  RuleCondition condition = RuleCondition::none;
  bool derived = false;  // switched off in strict mode
};

struct ProofSystem {
  std::string id;
  Semantics semantics = Semantics::bochvar;
  bool modal = false;
  std::vector<AxiomSchema> axioms;
  std::vector<InferenceRule> rules;
  bool taut = false;  // classical-skeleton tautologies, derived
  bool replacement = false;  // RE, derived

  std::vector<const AxiomSchema*> axioms_named(std::string_view name) const {
    std::vector<const AxiomSchema*> out;
    for (const auto& a : axioms)
      if (a.name == name || a.family == name) out.push_back(&a);
    return out;
  }
  std::vector<const InferenceRule*> rules_named(std::string_view name) const {
    std::vector<const InferenceRule*> out;
    for (const auto& r : rules)
      if (r.name == name) out.push_back(&r);
    return out;
  }
};

namespace detail {

inline void add(std::vector<AxiomSchema>& v, std::string name, std::string_view text,
                SchemaCondition c = SchemaCondition::none, std::string family = {}) {
  v.emplace_back(std::move(name), parse(text), c, std::move(family));
}

inline std::vector<AxiomSchema> rho_axioms() {
  std::vector<AxiomSchema> v;
  add(v, "rho-B1", "?phi | ?phi === ?phi");
  add(v, "rho-B2", "?phi | ?psi === ?psi | ?phi");
  add(v, "rho-B3", "(?phi | ?psi) | ?chi === ?phi | (?psi | ?chi)");
  add(v, "rho-B4", "?phi | 0 === ?phi");
  add(v, "rho-B5", "~~?phi === ?phi");
  add(v, "rho-B6", "~(?phi | ?psi) === ~?phi & ~?psi");
  add(v, "rho-B7", "~1 === 0");
  add(v, "rho-B8", "?phi & (?psi | ?chi) === (?phi & ?psi) | (?phi & ?chi)");
  add(v, "rho-B9", "J0 J2 ?phi <-> ~J2 ?phi");
  add(v, "rho-B10", "J2 ?phi <-> ~(J0 ?phi | J1 ?phi)");
  add(v, "rho-B11", "J2 ?phi | ~J2 ?phi <-> 1");
  add(v, "rho-B12", "J2(?phi | ?psi) <-> (J2 ?phi & J2 ?psi) | (J2 ?phi & J0 ?psi) | (J0 ?phi & J2 ?psi)");
  return v;
}

inline std::string jk(int i, std::string_view arg) { return "J" + std::to_string(i) + " " + std::string(arg); }

inline std::vector<AxiomSchema> finn_grigolia_axioms() {
  std::vector<AxiomSchema> v;
  const auto ext = SchemaCondition::external_metavariables;
  add(v, "A1", "(?phi | ?phi) === ?phi");
  add(v, "A2", "(?phi | ?psi) === (?psi | ?phi)");
  add(v, "A3", "((?phi | ?psi) | ?chi) === (?phi | (?psi | ?chi))");
  add(v, "A4", "?phi & (?psi | ?chi) === (?phi & ?psi) | (?phi & ?chi)");
  add(v, "A5", "~~?phi === ?phi");
  add(v, "A6", "~1 === 0");
  add(v, "A7", "~(?phi | ?psi) === ~?phi & ~?psi");
  add(v, "A8", "0 | ?phi === ?phi");
  add(v, "A9", "J2 ?alpha === ?alpha", ext);
  add(v, "A10", "J0 ?alpha === ~?alpha", ext);
  add(v, "A11", "J1 ?alpha === 0", ext);
  for (int i = 0; i < 3; ++i)
    add(v, "A12[i=" + std::to_string(i) + "]", jk(i, "~?phi") + " === " + jk(2 - i, "?phi"), SchemaCondition::none,
        "A12");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      int k = 3 - i - j;
      add(v, "A13[i=" + std::to_string(i) + ",j=" + std::to_string(j) + ",k=" + std::to_string(k) + "]",
          jk(i, "?phi") + " === ~(" + jk(j, "?phi") + " | " + jk(k, "?phi") + ")", SchemaCondition::none, "A13");
    }
  for (int i = 0; i < 3; ++i)
    add(v, "A14[i=" + std::to_string(i) + "]", "(" + jk(i, "?phi") + " | ~" + jk(i, "?phi") + ") === 1",
        SchemaCondition::none, "A14");
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      add(v, "A15[i=" + std::to_string(i) + ",k=" + std::to_string(k) + "]",
          "((" + jk(i, "?phi") + " | " + jk(k, "?psi") + ") & " + jk(i, "?phi") + ") === " + jk(i, "?phi"),
          SchemaCondition::none, "A15");
  for (int i = 1; i < 3; ++i)
    add(v, "A16[i=" + std::to_string(i) + "]", "(?phi | " + jk(i, "?phi") + ") === ?phi", SchemaCondition::none,
        "A16");
  add(v, "A17", "J0(?phi | ?psi) === J0 ?phi & J0 ?psi");
  add(v, "A18", "J2(?phi | ?psi) === (J2 ?phi & J2 ?psi) | (J2 ?phi & J2 ~?psi) | (J2 ~?phi & J2 ?psi)");
  add(v, "A19", "?alpha -> (?beta -> ?alpha)", ext);
  add(v, "A20", "(?alpha -> (?beta -> ?gamma)) -> ((?alpha -> ?beta) -> (?alpha -> ?gamma))", ext);
  add(v, "A21", "(~?alpha -> ~?beta) -> (?beta -> ?alpha)", ext);
  return v;
}

inline std::vector<AxiomSchema> segerberg_axioms() {
  std::vector<AxiomSchema> v;
  add(v, "A1", "(?phi | ?phi) -> ?phi");
  add(v, "A2", "?phi -> (?phi | ?psi)");
  add(v, "A3", "(?phi | ?psi) -> (?psi | ?phi)");
  add(v, "A4", "(?phi -> ?psi) -> ((?gamma | ?phi) -> (?gamma | ?psi))");
  add(v, "A5", "(?phi & ?psi) -> ~(~?phi | ~?psi)");
  add(v, "A6", "~(~?phi | ~?psi) -> (?phi & ?psi)");
  add(v, "A7", "?phi -> 1");
  add(v, "A8", "0 -> ?phi");
  add(v, "A9", "?phi -> J2 ?phi");
  add(v, "A10", "J2 ?phi -> ~J0 ?phi");
  add(v, "A11", "J2(?phi & ?psi) <-> J2 ?phi & J2 ?psi");
  add(v, "A12", "J2(?phi | ?psi) <-> ((J2 ?phi & J2 ?psi) | (J2 ?phi & J0 ?psi) | (J0 ?phi & J2 ?psi))");
  return v;
}

inline InferenceRule rule(std::string name, std::vector<std::string_view> premises, std::string_view conclusion,
                          RuleCondition c = RuleCondition::none, bool derived = false) {
  InferenceRule r{std::move(name), {}, parse(conclusion), c, derived};
  for (auto p : premises) r.premises.push_back(parse(p));
  return r;
}

inline InferenceRule modus_ponens(RuleCondition c, bool derived) {
  return rule(c == RuleCondition::rmp ? "RMP" : "MP", {"?phi", "?phi -> ?psi"}, "?psi", c, derived);
}

inline InferenceRule rho_b13() {
  return rule("rho-B13", {"J2 ?phi <-> J2 ?psi", "J0 ?phi <-> J0 ?psi"}, "?phi === ?psi");
}

inline void add_alg3(std::vector<InferenceRule>& rules, Semantics s) {
  if (s == Semantics::bochvar) {
    rules.push_back(rule("BAlg3", {"?phi"}, "J2 ?phi <-> 1"));
    rules.push_back(rule("BAlg3", {"J2 ?phi <-> 1"}, "?phi"));
  } else {
    rules.push_back(rule("PWKAlg3", {"?phi"}, "~J0 ?phi <-> 1"));
    rules.push_back(rule("PWKAlg3", {"~J0 ?phi <-> 1"}, "?phi"));
  }
}

inline ProofSystem algebraic_base(Semantics s) {
  ProofSystem sys;
  sys.id = s == Semantics::bochvar ? "Be" : "PWKe";
  sys.semantics = s;
  sys.axioms = rho_axioms();
  sys.rules.push_back(rho_b13());
  add_alg3(sys.rules, s);
  sys.rules.push_back(
      modus_ponens(s == Semantics::bochvar ? RuleCondition::none : RuleCondition::external_mp, true));
  sys.taut = true;
  sys.replacement = true;
  return sys;
}

inline ProofSystem modal_base(Semantics s) {
  ProofSystem sys = algebraic_base(s);
  sys.id = s == Semantics::bochvar ? "Bbox" : "MPWK";
  sys.modal = true;
  if (s == Semantics::bochvar) {
    add(sys.axioms, "B1", "[](J2 ?phi -> J2 ?psi) -> ([]J2 ?phi -> []J2 ?psi)");
    add(sys.axioms, "B2", "+?phi <-> +[]?phi");
    add(sys.axioms, "B3", "J2 []?phi -> []J2 ?phi");
    add(sys.axioms, "B4", "J0 []?phi -> ~[]J0 ~?phi");
  } else {
    add(sys.axioms, "P1", "[](J2 ?phi -> J2 ?psi) -> ([]J2 ?phi -> []J2 ?psi)");
    add(sys.axioms, "P2", "[]?phi <-> []~J0 ?phi");
    add(sys.axioms, "P3", "+?phi <-> +[]?phi");
  }
  sys.rules.push_back(rule("N", {"?phi"}, "[]?phi", RuleCondition::theorem_only));
  return sys;
}

struct Extension {
  std::string_view name;
  std::string_view text;
};

inline constexpr Extension bochvar_extensions[] = {
    {"Te", "[]J2 ?phi -> J2 ?phi"},
    {"4e", "[]J2 ?phi -> [][]J2 ?phi"},
    {"5e", "<>J2 ?phi -> []<>J2 ?phi"},
};
inline constexpr Extension pwk_extensions[] = {
    {"T", "[]?phi -> ?phi"},
    {"4", "[]?phi -> [][]?phi"},
    {"5", "<>?phi -> []<>?phi"},
};

inline std::vector<std::string_view> split_plus(std::string_view id) {
  std::vector<std::string_view> out;
  while (true) {
    auto at = id.find('+');
    out.push_back(id.substr(0, at));
    if (at == std::string_view::npos) return out;
    id = id.substr(at + 1);
  }
}

}  // namespace detail

/// Builds a system from its id: Be, PWKe, FG-Be, Seg-PWKe, Bbox, MPWK, or
/// Bbox/MPWK followed by "+"-separated extensions (Te, 4e, 5e, S4e, S5e for
/// Bbox; T, 4, 5, S4, S5 for MPWK).
inline ProofSystem make_system(std::string_view id) {
  if (id == "Be") return detail::algebraic_base(Semantics::bochvar);
  if (id == "PWKe") return detail::algebraic_base(Semantics::pwk);
  if (id == "FG-Be") {
    ProofSystem sys;
    sys.id = "FG-Be";
    sys.axioms = detail::finn_grigolia_axioms();
    sys.rules.push_back(detail::modus_ponens(RuleCondition::none, false));
    return sys;
  }
  if (id == "Seg-PWKe") {
    ProofSystem sys;
    sys.id = "Seg-PWKe";
    sys.semantics = Semantics::pwk;
    sys.axioms = detail::segerberg_axioms();
    sys.rules.push_back(detail::modus_ponens(RuleCondition::rmp, false));
    return sys;
  }
  auto parts = detail::split_plus(id);
  Semantics s;
  if (parts[0] == "Bbox") s = Semantics::bochvar;
  else if (parts[0] == "MPWK") s = Semantics::pwk;
  else throw Error("unknown system '" + std::string(id) + "'");
  ProofSystem sys = detail::modal_base(s);
  sys.id = std::string(id);
  std::span<const detail::Extension> table =
      s == Semantics::bochvar ? std::span<const detail::Extension>(detail::bochvar_extensions)
                              : std::span<const detail::Extension>(detail::pwk_extensions);
  const std::string suffix = s == Semantics::bochvar ? "e" : "";
  std::vector<std::string> wanted;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    std::string p(parts[i]);
    if (p == "S4" + suffix) {
      wanted.push_back("T" + suffix);
      wanted.push_back("4" + suffix);
    } else if (p == "S5" + suffix) {
      wanted.push_back("T" + suffix);
      wanted.push_back("5" + suffix);
    } else {
      wanted.push_back(p);
    }
  }
  for (const auto& w : wanted) {
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.name == w; });
    if (it == table.end()) throw Error("unknown system '" + std::string(id) + "'");
    if (sys.axioms_named(w).empty()) detail::add(sys.axioms, w, it->text);
  }
  return sys;
}

/// The named systems: the six bases and the single-extension and S4/S5
/// variants of Bbox and MPWK. Any "+" combination is also accepted by
/// make_system.
inline std::vector<std::string> list_systems() {
  return {"Be",        "PWKe",      "FG-Be",     "Seg-PWKe", "Bbox",    "Bbox+Te", "Bbox+4e", "Bbox+5e",
          "Bbox+S4e",  "Bbox+S5e",  "MPWK",      "MPWK+T",   "MPWK+4",  "MPWK+5",  "MPWK+S4", "MPWK+S5"};
}

}  // namespace wkmodal
