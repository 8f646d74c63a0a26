#pragma once
// The basic-fact lists for Be and PWKe, item by item, as matrix checks.
// Schematic items are checked on distinct variables (matrix consequence is
// closed under substitution); items about external formulas range over all
// external formulas of depth <= 2 over {p, q}, one per truth vector.

#include "support.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lemmas {

using namespace wkmodal;

struct Item {
  std::string name;
  std::function<bool()> check;
};

inline const std::vector<Formula>& externals() {
  static const std::vector<Formula> fs = [] {
    std::vector<Formula> ext;
    for (const auto& f : gen::formulas(gen::atoms({"p", "q"}), 2, gen::NEG | gen::OR | gen::J2))
      if (is_external(f)) ext.push_back(f);
    return gen::distinct_by_vector(ext, {"p", "q"});
  }();
  return fs;
}

/// Two-valued tautology of the skeleton in which every J2-subformula (after
/// expansion) is an opaque atom. A sound reading of "classical theorem" for
/// external formulas.
inline bool j_atom_tautology(const Formula& f) {
  Formula g = expand_sugar(f);
  std::vector<Formula> atoms;
  std::function<void(const Formula&)> collect = [&](const Formula& h) {
    if (h.op() == Op::j2 || h.op() == Op::var) {
      if (std::find(atoms.begin(), atoms.end(), h) == atoms.end()) atoms.push_back(h);
      return;
    }
    for (const auto& a : h.args()) collect(a);
  };
  collect(g);
  std::function<bool(const Formula&, unsigned)> ev = [&](const Formula& h, unsigned mask) -> bool {
    switch (h.op()) {
      case Op::zero: return false;
      case Op::one: return true;
      case Op::neg: return !ev(h.arg(0), mask);
      case Op::disj: return ev(h.arg(0), mask) || ev(h.arg(1), mask);
      default: {
        auto at = std::find(atoms.begin(), atoms.end(), h) - atoms.begin();
        return ((mask >> at) & 1U) != 0;
      }
    }
  };
  for (unsigned mask = 0; mask < (1U << atoms.size()); ++mask)
    if (!ev(g, mask)) return false;
  return true;
}

/// Two-valued tautology of a J-free formula.
inline bool classical_tautology(const Formula& f, const std::vector<std::string>& vars) {
  for (const auto& a : oracle::assignments(vars)) {
    bool classical = true;
    for (const auto& [k, v] : a) classical = classical && v != oracle::E;
    if (classical && oracle::eval(f, a) != oracle::O) return false;
  }
  return true;
}

inline Formula P(const char* s) { return parse(s); }

inline bool cons(std::vector<Formula> g, const char* phi, MatrixLogic l) { return matrix_consequence(g, P(phi), l); }
inline bool inter(const char* a, const char* b, MatrixLogic l) {
  return matrix_consequence(std::vector{P(a)}, P(b), l) && matrix_consequence(std::vector{P(b)}, P(a), l);
}
inline bool thm(const char* s, MatrixLogic l) { return is_theorem(P(s), l); }

inline std::vector<Item> bochvar_items() {
  const auto B = bochvar_external;
  return {
      {"1: phi, phi -> psi |- psi", [=] { return cons({P("p"), P("p -> q")}, "q", B); }},
      {"2: |- a <-> J2 a for external a",
       [=] {
         for (const auto& a : externals())
           if (!is_theorem(Formula::iff(a, Formula::j2(a)), B)) return false;
         return true;
       }},
      {"3: phi -||- J2 phi", [=] { return inter("p", "J2 p", B); }},
      {"4: external classical theorems are theorems",
       [=] {
         std::size_t hits = 0;
         for (const auto& f : gen::formulas(gen::atoms({"p", "q"}), 3, gen::NEG | gen::OR | gen::J2)) {
           if (!is_external(f) || !j_atom_tautology(f)) continue;
           ++hits;
           if (!is_theorem(f, B)) return false;
         }
         return hits > 0;
       }},
      {"5: ~phi -||- J0 phi", [=] { return inter("~p", "J0 p", B); }},
      {"6: |- J0 phi -> ~J2 phi", [=] { return thm("J0 p -> ~J2 p", B); }},
      {"7: |- J0 phi & J2 phi -> 0", [=] { return thm("J0 p & J2 p -> 0", B); }},
      {"8: |- ~J2 phi -> J1 phi | J0 phi", [=] { return thm("~J2 p -> J1 p | J0 p", B); }},
      {"9: |- J1 phi <-> J1 ~phi", [=] { return thm("J1 p <-> J1 ~p", B); }},
      {"10: |- J1 a -> 0 for external a",
       [=] {
         for (const auto& a : externals())
           if (!is_theorem(Formula::imp(Formula::j1(a), Formula::zero()), B)) return false;
         return true;
       }},
      {"11: ~J2 ~phi |- J2 phi | J1 phi", [=] { return cons({P("~J2 ~p")}, "J2 p | J1 p", B); }},
  };
}

inline std::vector<Item> pwk_items() {
  const auto W = pwk_external;
  return {
      {"1: a, a -> b |- b for external a, b",
       [=] {
         for (const auto& a : externals())
           for (const auto& b : externals())
             if (!matrix_consequence(std::vector{a, Formula::imp(a, b)}, b, W)) return false;
         return true;
       }},
      {"2: phi -||- ~J0 phi", [=] { return inter("p", "~J0 p", W); }},
      {"3: classical theorems are theorems",
       [=] {
         std::size_t hits = 0;
         for (const auto& f : gen::formulas(gen::atoms({"p", "q"}), 3, gen::NEG | gen::OR)) {
           if (!classical_tautology(f, {"p", "q"})) continue;
           ++hits;
           if (!is_theorem(f, W)) return false;
         }
         return hits > 0;
       }},
      {"4: |- ~J0 0 -> 0", [=] { return thm("~J0 0 -> 0", W); }},
      {"5: |- ~phi -> J0 phi", [=] { return thm("~p -> J0 p", W); }},
      {"6: |- a <-> J2 a for external a",
       [=] {
         for (const auto& a : externals())
           if (!is_theorem(Formula::iff(a, Formula::j2(a)), W)) return false;
         return true;
       }},
      {"7: phi |- J2 phi | J1 phi", [=] { return cons({P("p")}, "J2 p | J1 p", W); }},
      {"8: |- J2 ~phi <-> J0 phi", [=] { return thm("J2 ~p <-> J0 p", W); }},
      {"9: |- J1 phi <-> J1 ~phi", [=] { return thm("J1 p <-> J1 ~p", W); }},
      {"10: |- ~J0 1", [=] { return thm("~J0 1", W); }},
      {"11: |- phi -> J2 phi", [=] { return thm("p -> J2 p", W); }},
      {"12: |- J2 phi -> +phi", [=] { return thm("J2 p -> +p", W); }},
  };
}

}  // namespace lemmas
