#pragma once
// Test-side oracles. These evaluators are written straight from the truth
// tables and box clauses and share no code with the library's evaluators.

#include <wkmodal/wkmodal.hpp>

#include <array>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using namespace wkmodal;

// Values as 0, 1 (= e), 2 (= 1).
inline constexpr int Z = 0, E = 1, O = 2;

// The basic and derived tables, typed in row by row (rows and columns in
// the order 0, e, 1).
inline constexpr std::array<int, 3> NEG = {O, E, Z};
inline constexpr std::array<std::array<int, 3>, 3> OR = {{{Z, E, O}, {E, E, E}, {O, E, O}}};
inline constexpr std::array<int, 3> J2T = {Z, Z, O};
inline constexpr std::array<std::array<int, 3>, 3> AND = {{{Z, E, Z}, {E, E, E}, {Z, E, O}}};
inline constexpr std::array<std::array<int, 3>, 3> IMP = {{{O, E, O}, {E, E, E}, {Z, E, O}}};
inline constexpr std::array<int, 3> J0T = {O, Z, Z};
inline constexpr std::array<int, 3> J1T = {Z, O, Z};
inline constexpr std::array<std::array<int, 3>, 3> EQV = {{{O, Z, Z}, {Z, O, Z}, {Z, Z, O}}};

inline int to_int(Truth t) { return t == Truth::zero ? Z : t == Truth::half ? E : O; }

/// Matrix evaluation on the sugared AST, using the tables above directly.
inline int eval(const Formula& f, const std::map<std::string, int>& a) {
  auto ev = [&](std::size_t i) { return eval(f.arg(i), a); };
  switch (f.op()) {
    case Op::var: return a.at(f.name());
    case Op::zero: return Z;
    case Op::one: return O;
    case Op::neg: return NEG[ev(0)];
    case Op::disj: return OR[ev(0)][ev(1)];
    case Op::j2: return J2T[ev(0)];
    case Op::conj: return AND[ev(0)][ev(1)];
    case Op::imp: return IMP[ev(0)][ev(1)];
    case Op::iff: return AND[IMP[ev(0)][ev(1)]][IMP[ev(1)][ev(0)]];
    case Op::j0: return J0T[ev(0)];
    case Op::j1: return J1T[ev(0)];
    case Op::plus: return NEG[J1T[ev(0)]];
    case Op::equiv: return EQV[ev(0)][ev(1)];
    default: throw std::logic_error("oracle::eval: modal operator");
  }
}

/// Tiny Kripke structure for the oracle: rel[w][s], val[w] maps variables.
struct Kripke {
  std::vector<std::vector<bool>> rel;
  std::vector<std::map<std::string, int>> val;
  bool pwk = false;

  static Kripke from(const KripkeModel& m) {
    Kripke k;
    std::size_t n = m.size();
    k.rel.assign(n, std::vector<bool>(n));
    k.val.resize(n);
    for (std::size_t w = 0; w < n; ++w) {
      for (std::size_t s = 0; s < n; ++s) k.rel[w][s] = m.frame().related(w, s);
      for (const auto& v : m.variables()) k.val[w][v] = to_int(m.value(w, v));
    }
    k.pwk = m.semantics() == Semantics::pwk;
    return k;
  }
};

/// Box clauses: value e iff the argument is e at w; otherwise 1 iff every
/// successor gives 1 (Bochvar) or something other than 0 (PWK).
inline int keval(const Kripke& k, std::size_t w, const Formula& f) {
  auto ev = [&](std::size_t i) { return keval(k, w, f.arg(i)); };
  switch (f.op()) {
    case Op::var: return k.val[w].at(f.name());
    case Op::zero: return Z;
    case Op::one: return O;
    case Op::neg: return NEG[ev(0)];
    case Op::disj: return OR[ev(0)][ev(1)];
    case Op::j2: return J2T[ev(0)];
    case Op::conj: return AND[ev(0)][ev(1)];
    case Op::imp: return IMP[ev(0)][ev(1)];
    case Op::iff: return AND[IMP[ev(0)][ev(1)]][IMP[ev(1)][ev(0)]];
    case Op::j0: return J0T[ev(0)];
    case Op::j1: return J1T[ev(0)];
    case Op::plus: return NEG[J1T[ev(0)]];
    case Op::equiv: return EQV[ev(0)][ev(1)];
    case Op::box: {
      if (ev(0) == E) return E;
      for (std::size_t s = 0; s < k.rel.size(); ++s) {
        if (!k.rel[w][s]) continue;
        int x = keval(k, s, f.arg(0));
        if (k.pwk ? x == Z : x != O) return Z;
      }
      return O;
    }
    case Op::dia: return NEG[keval(k, w, Formula::box(Formula::neg(f.arg(0))))];
  }
  throw std::logic_error("oracle::keval");
}

inline bool designated(bool pwk, int v) { return v == O || (pwk && v == E); }

/// All assignments of {0,e,1} to vars.
inline std::vector<std::map<std::string, int>> assignments(const std::vector<std::string>& vars) {
  std::vector<std::map<std::string, int>> out(1);
  for (const auto& v : vars) {
    std::vector<std::map<std::string, int>> next;
    for (const auto& a : out)
      for (int x = 0; x < 3; ++x) {
        auto b = a;
        b[v] = x;
        next.push_back(std::move(b));
      }
    out = std::move(next);
  }
  return out;
}

/// Brute-force matrix consequence.
inline bool consequence(const std::vector<Formula>& gamma, const Formula& phi, bool pwk,
                        const std::vector<std::string>& vars) {
  for (const auto& a : assignments(vars)) {
    bool all = true;
    for (const auto& g : gamma) all = all && designated(pwk, eval(g, a));
    if (all && !designated(pwk, eval(phi, a))) return false;
  }
  return true;
}

}  // namespace oracle

namespace gen {

using namespace wkmodal;

enum Ops : unsigned { NEG = 1, OR = 2, J2 = 4, AND = 8, IMP = 16, BOX = 32, J0 = 64, J1 = 128, PLUS = 256, IFF = 512, EQUIV = 1024 };

/// Every connective of the propositional language.
inline constexpr unsigned PROPOSITIONAL = NEG | OR | J2 | AND | IMP | J0 | J1 | PLUS | IFF | EQUIV;

/// Every formula of depth at most `depth` over the atoms, built from the
/// selected connectives.
inline std::vector<Formula> formulas(const std::vector<Formula>& atoms, int depth, unsigned ops) {
  std::vector<Formula> prev = atoms;  // depth <= d-1
  for (int d = 1; d <= depth; ++d) {
    std::vector<Formula> next = prev;
    auto fresh = [&](const Formula& f) { return static_cast<int>(f.depth()) == d; };
    for (const auto& a : prev) {
      if (ops & NEG) next.push_back(Formula::neg(a));
      if (ops & J2) next.push_back(Formula::j2(a));
      if (ops & BOX) next.push_back(Formula::box(a));
      if (ops & J0) next.push_back(Formula::j0(a));
      if (ops & J1) next.push_back(Formula::j1(a));
      if (ops & PLUS) next.push_back(Formula::plus(a));
    }
    for (const auto& a : prev)
      for (const auto& b : prev) {
        if (ops & OR) next.push_back(Formula::disj(a, b));
        if (ops & AND) next.push_back(Formula::conj(a, b));
        if (ops & IMP) next.push_back(Formula::imp(a, b));
        if (ops & IFF) next.push_back(Formula::iff(a, b));
        if (ops & EQUIV) next.push_back(Formula::equiv(a, b));
      }
    // Keep only the new formulas of depth exactly d alongside prev.
    next.erase(std::remove_if(next.begin() + static_cast<std::ptrdiff_t>(prev.size()), next.end(),
                              [&](const Formula& f) { return !fresh(f); }),
               next.end());
    prev = std::move(next);
  }
  return prev;
}

inline std::vector<Formula> atoms(const std::vector<std::string>& vars, bool constants = true) {
  std::vector<Formula> out;
  for (const auto& v : vars) out.push_back(Formula::var(v));
  if (constants) {
    out.push_back(Formula::zero());
    out.push_back(Formula::one());
  }
  return out;
}

/// Truth vector over all assignments to vars.
inline std::vector<int> vector_of(const Formula& f, const std::vector<std::map<std::string, int>>& as) {
  std::vector<int> out;
  out.reserve(as.size());
  for (const auto& a : as) out.push_back(oracle::eval(f, a));
  return out;
}

/// One representative (the first met) per truth vector.
inline std::vector<Formula> distinct_by_vector(const std::vector<Formula>& fs, const std::vector<std::string>& vars) {
  auto as = oracle::assignments(vars);
  std::map<std::vector<int>, Formula> seen;
  std::vector<Formula> out;
  for (const auto& f : fs)
    if (seen.emplace(vector_of(f, as), f).second) out.push_back(f);
  return out;
}

/// Random formula over vars with modal depth at most `md` and size bounded by
/// `budget` connectives.
inline Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& vars, int md, int budget) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  if (budget <= 0) return Formula::var(vars[pick(vars.size())]);
  switch (pick(md > 0 ? 9 : 7)) {
    case 0: return Formula::var(vars[pick(vars.size())]);
    case 1: return Formula::neg(random_formula(rng, vars, md, budget - 1));
    case 2:
      return Formula::disj(random_formula(rng, vars, md, budget / 2), random_formula(rng, vars, md, budget / 2));
    case 3: return Formula::j2(random_formula(rng, vars, md, budget - 1));
    case 4:
      return Formula::conj(random_formula(rng, vars, md, budget / 2), random_formula(rng, vars, md, budget / 2));
    case 5: return Formula::imp(random_formula(rng, vars, md, budget / 2), random_formula(rng, vars, md, budget / 2));
    case 6: return Formula::j0(random_formula(rng, vars, md, budget - 1));
    case 7: return Formula::box(random_formula(rng, vars, md - 1, budget - 1));
    default: return Formula::dia(random_formula(rng, vars, md - 1, budget - 1));
  }
}

}  // namespace gen

namespace sys {

using namespace wkmodal;

/// Frame class on which the extension axioms of a modal system are valid.
inline FrameClass frame_class_of(const ProofSystem& s) {
  auto has = [&](const char* a, const char* b) { return !s.axioms_named(a).empty() || !s.axioms_named(b).empty(); };
  bool t = has("T", "Te"), four = has("4", "4e"), five = has("5", "5e");
  if (t && five) return FrameClass::equivalence;
  if (t && four) return FrameClass::refl_trans;
  if (t) return FrameClass::reflexive;
  if (four && !five) return FrameClass::transitive;
  if (five && !four) return FrameClass::euclidean;
  if (four && five) throw Error("no frame class for 4 and 5 without T");
  return FrameClass::all;
}

/// Every instance of a schema with its metavariables drawn from pool.
inline std::vector<Formula> instances(const Formula& schema, const std::vector<Formula>& pool) {
  auto metas = metavariables(schema);
  std::vector<Formula> out;
  std::vector<std::size_t> idx(metas.size(), 0);
  while (true) {
    Substitution sub;
    for (std::size_t i = 0; i < metas.size(); ++i) sub.emplace(metas[i], pool[idx[i]]);
    out.push_back(substitute(schema, sub));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == pool.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

}  // namespace sys
