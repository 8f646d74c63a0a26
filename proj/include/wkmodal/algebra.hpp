#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "formula.hpp"
#include "matrix.hpp"
#include "parser.hpp"
#include "truth.hpp"

namespace wkmodal {

/// Finite algebra of type <or, and, not, J2, 0, 1>, elements 0..size-1.
struct FiniteAlgebra {
  std::size_t size = 0;
  std::vector<std::size_t> join;  // row-major size x size
  std::vector<std::size_t> meet;  // row-major size x size
  std::vector<std::size_t> neg;
  std::vector<std::size_t> j2;
  std::size_t zero = 0;
  std::size_t one = 0;
  std::vector<std::string> names;

  std::size_t op_join(std::size_t a, std::size_t b) const { return join[a * size + b]; }
  std::size_t op_meet(std::size_t a, std::size_t b) const { return meet[a * size + b]; }
  std::size_t op_neg(std::size_t a) const { return neg[a]; }
  std::size_t op_j2(std::size_t a) const { return j2[a]; }

  std::string name(std::size_t a) const { return a < names.size() ? names[a] : std::to_string(a); }

  /// Throws FormatError unless every table has the right shape and range.
  void validate() const {
    if (size == 0) throw FormatError("algebra carrier must be nonempty");
    auto check = [&](const std::vector<std::size_t>& t, std::size_t want, const char* what) {
      if (t.size() != want) throw FormatError(std::string(what) + " table has the wrong size");
      for (auto x : t)
        if (x >= size) throw FormatError(std::string(what) + " table entry out of range");
    };
    check(join, size * size, "or");
    check(meet, size * size, "and");
    check(neg, size, "not");
    check(j2, size, "J2");
    if (zero >= size || one >= size) throw FormatError("constant out of range");
    if (size > 1 && zero == one) throw FormatError("0 and 1 must differ");
    if (!names.empty() && names.size() != size) throw FormatError("names must list every element");
  }

  friend bool operator==(const FiniteAlgebra&, const FiniteAlgebra&) = default;
};

/// WK^e with elements 0 = "0", 1 = "e", 2 = "1". The meet table is
/// computed as ~(~x | ~y) and checked against its own definition.
inline FiniteAlgebra wke_algebra() {
  FiniteAlgebra a;
  a.size = 3;
  a.names = {"0", "e", "1"};
  a.zero = 0;
  a.one = 2;
  auto idx = [](Truth t) { return static_cast<std::size_t>(t); };
  for (auto x : all_truth_values) {
    a.neg.push_back(idx(wk::neg(x)));
    a.j2.push_back(idx(wk::j2(x)));
    for (auto y : all_truth_values) {
      a.join.push_back(idx(wk::join(x, y)));
      a.meet.push_back(idx(wk::meet(x, y)));
    }
  }
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      if (a.op_meet(x, y) != a.op_neg(a.op_join(a.op_neg(x), a.op_neg(y))))
        throw Error("WK^e meet disagrees with its definition");
  return a;
}

/// The two-element Boolean algebra with J2 the identity.
inline FiniteAlgebra boolean_algebra() {
  FiniteAlgebra a;
  a.size = 2;
  a.names = {"0", "1"};
  a.zero = 0;
  a.one = 1;
  a.join = {0, 1, 1, 1};
  a.meet = {0, 0, 0, 1};
  a.neg = {1, 0};
  a.j2 = {0, 1};
  return a;
}

using AlgebraAssignment = std::map<std::string, std::size_t>;

namespace detail {

/// One connective of the algebra. And uses the algebra's own table; the
/// other defined connectives go through their definitions.
inline std::size_t apply_algebra(const FiniteAlgebra& A, Op op, std::size_t x, std::size_t y) {
  auto imp = [&](std::size_t u, std::size_t v) { return A.op_join(A.op_neg(u), v); };
  auto iff = [&](std::size_t u, std::size_t v) { return A.op_meet(imp(u, v), imp(v, u)); };
  auto j0 = [&](std::size_t u) { return A.op_j2(A.op_neg(u)); };
  auto j1 = [&](std::size_t u) { return A.op_neg(A.op_join(A.op_j2(u), A.op_j2(A.op_neg(u)))); };
  switch (op) {
    case Op::zero: return A.zero;
    case Op::one: return A.one;
    case Op::neg: return A.op_neg(x);
    case Op::disj: return A.op_join(x, y);
    case Op::j2: return A.op_j2(x);
    case Op::conj: return A.op_meet(x, y);
    case Op::imp: return imp(x, y);
    case Op::iff: return iff(x, y);
    case Op::j0: return j0(x);
    case Op::j1: return j1(x);
    case Op::plus: return A.op_neg(j1(x));
    case Op::equiv: return A.op_meet(iff(A.op_j2(x), A.op_j2(y)), iff(j0(x), j0(y)));
    default: throw EvalError("modal operator in an algebraic term");
  }
}

}  // namespace detail

/// Value of a term.
inline std::size_t eval_term(const FiniteAlgebra& A, const Formula& t, const AlgebraAssignment& a) {
  if (t.op() == Op::var) {
    auto it = a.find(t.name());
    if (it == a.end()) throw EvalError("no value for variable '" + t.name() + "'");
    return it->second;
  }
  std::size_t x = t.args().size() > 0 ? eval_term(A, t.arg(0), a) : 0;
  std::size_t y = t.args().size() > 1 ? eval_term(A, t.arg(1), a) : 0;
  return detail::apply_algebra(A, t.op(), x, y);
}

struct Equation {
  Formula lhs;
  Formula rhs;
  friend bool operator==(const Equation&, const Equation&) = default;
};

struct QuasiIdentity {
  std::string name;
  std::vector<Equation> antecedents;
  Equation consequent;
};

inline std::string to_string(const Equation& e) { return to_string(e.lhs) + " ~= " + to_string(e.rhs); }

/// Parses "s ~= t" (or "s ≈ t").
inline Equation parse_equation(std::string_view text) {
  for (std::string_view sep : {std::string_view("~="), std::string_view("\xE2\x89\x88")}) {
    auto at = text.find(sep);
    if (at == std::string_view::npos) continue;
    return {parse(text.substr(0, at)), parse(text.substr(at + sep.size()))};
  }
  throw ParseError(0, "expected an equation 's ~= t'");
}

/// Parses "e1 & e2 & ... => e" or a bare equation. Antecedents are split on
/// " && " to keep them apart from the term-level &.
inline QuasiIdentity parse_quasiidentity(std::string_view text, std::string name = {}) {
  QuasiIdentity q{std::move(name), {}, {Formula::zero(), Formula::zero()}};
  auto arrow = text.find("=>");
  if (arrow == std::string_view::npos) {
    q.consequent = parse_equation(text);
    return q;
  }
  std::string_view ante = text.substr(0, arrow);
  while (true) {
    auto amp = ante.find("&&");
    q.antecedents.push_back(parse_equation(ante.substr(0, amp)));
    if (amp == std::string_view::npos) break;
    ante = ante.substr(amp + 2);
  }
  q.consequent = parse_equation(text.substr(arrow + 2));
  return q;
}

inline std::set<std::string> variables(const QuasiIdentity& q) {
  std::vector<Formula> all;
  for (const auto& e : q.antecedents) {
    all.push_back(e.lhs);
    all.push_back(e.rhs);
  }
  all.push_back(q.consequent.lhs);
  all.push_back(q.consequent.rhs);
  return variables(all);
}

/// Calls `fn` on every assignment of `vars` into the carrier, last variable
/// fastest. Stops and returns false when `fn` does.
template <class Fn>
bool for_each_algebra_assignment(const FiniteAlgebra& A, const std::vector<std::string>& vars, Fn&& fn) {
  AlgebraAssignment a;
  for (const auto& v : vars) a[v] = 0;
  while (true) {
    if (!fn(static_cast<const AlgebraAssignment&>(a))) return false;
    std::size_t i = vars.size();
    for (;;) {
      if (i == 0) return true;
      --i;
      auto& x = a[vars[i]];
      if (++x < A.size) break;
      x = 0;
    }
  }
}

/// First assignment satisfying every equation of `theta` but not `eq`.
inline std::optional<AlgebraAssignment> eq_counterexample(std::span<const Equation> theta, const Equation& eq,
                                                          const FiniteAlgebra& A) {
  thread_local std::vector<std::string_view> vars;
  thread_local std::vector<detail::PostfixInstr> code;
  thread_local std::vector<std::size_t> ends;
  thread_local std::vector<std::size_t> slots, stack;
  auto collect = [&](const Formula& t) {
    auto walk = [&](auto&& self, const Formula& f) -> void {
      if (f.op() == Op::var) vars.push_back(f.name());
      for (const auto& x : f.args()) self(self, x);
    };
    walk(walk, t);
  };
  vars.clear();
  for (const auto& e : theta) collect(e.lhs), collect(e.rhs);
  collect(eq.lhs);
  collect(eq.rhs);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  code.clear();
  ends.clear();
  auto emit = [&](const Formula& t) {
    detail::compile_postfix(t, vars, code);
    ends.push_back(code.size());
  };
  for (const auto& e : theta) emit(e.lhs), emit(e.rhs);
  emit(eq.lhs);
  emit(eq.rhs);

  slots.assign(vars.size(), 0);
  auto load = [&](std::uint32_t i) { return slots[i]; };
  auto apply = [&](Op op, std::size_t x, std::size_t y) { return detail::apply_algebra(A, op, x, y); };
  auto value = [&](std::size_t k) {
    std::size_t begin = k == 0 ? 0 : ends[k - 1];
    return detail::run_postfix<std::size_t>(std::span(code).subspan(begin, ends[k] - begin), stack, load, apply);
  };
  const std::size_t n = ends.size();
  do {
    bool antecedents = true;
    for (std::size_t k = 0; k + 2 < n && antecedents; k += 2) antecedents = value(k) == value(k + 1);
    if (antecedents && value(n - 2) != value(n - 1)) {
      AlgebraAssignment a;
      for (std::size_t i = 0; i < vars.size(); ++i) a[std::string(vars[i])] = slots[i];
      return a;
    }
  } while (detail::advance(slots, A.size));
  return std::nullopt;
}

inline bool eq_consequence(std::span<const Equation> theta, const Equation& eq, const FiniteAlgebra& A) {
  return !eq_counterexample(theta, eq, A).has_value();
}

struct QuasiIdentityCheck {
  bool holds = true;
  std::optional<AlgebraAssignment> counterexample;
};

inline QuasiIdentityCheck check_quasiidentity(const FiniteAlgebra& A, const QuasiIdentity& q) {
  auto w = eq_counterexample(q.antecedents, q.consequent, A);
  return {!w.has_value(), std::move(w)};
}

/// The identities (1)-(12) and the quasi-identity (13) defining Bochvar
/// algebras, over the variables x, y, z.
inline const std::vector<QuasiIdentity>& bochvar_axioms() {
  static const std::vector<QuasiIdentity> axioms = [] {
    const char* text[] = {
        "x | x ~= x",
        "x | y ~= y | x",
        "(x | y) | z ~= x | (y | z)",
        "x & (y | z) ~= (x & y) | (x & z)",
        "~~x ~= x",
        "~1 ~= 0",
        "~(x | y) ~= ~x & ~y",
        "0 | x ~= x",
        "J0 J2 x ~= ~J2 x",
        "J2 x ~= ~(J0 x | J1 x)",
        "J2 x | ~J2 x ~= 1",
        "J2(x | y) ~= (J2 x & J2 y) | (J2 x & J2 ~y) | (J2 ~x & J2 y)",
        "J0 x ~= J0 y && J2 x ~= J2 y => x ~= y",
    };
    std::vector<QuasiIdentity> out;
    for (std::size_t i = 0; i < std::size(text); ++i)
      out.push_back(parse_quasiidentity(text[i], "(" + std::to_string(i + 1) + ")"));
    return out;
  }();
  return axioms;
}

struct BcaCheck {
  bool ok = true;
  std::optional<std::string> violated;  // name of the first failing axiom
  std::optional<AlgebraAssignment> counterexample;
};

inline BcaCheck is_bochvar_algebra(const FiniteAlgebra& A) {
  A.validate();
  for (const auto& q : bochvar_axioms()) {
    auto r = check_quasiidentity(A, q);
    if (!r.holds) return {false, q.name, std::move(r.counterexample)};
  }
  return {};
}

/// Every algebra differing from `A` in exactly one table entry, tagged with
/// the entry, e.g. "or[1][2]=0".
inline std::vector<std::pair<std::string, FiniteAlgebra>> single_entry_mutants(const FiniteAlgebra& A) {
  std::vector<std::pair<std::string, FiniteAlgebra>> out;
  auto mutate = [&](std::vector<std::size_t> FiniteAlgebra::*table, const char* name, bool binary) {
    const auto& t = A.*table;
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t v = 0; v < A.size; ++v) {
        if (v == t[i]) continue;
        FiniteAlgebra m = A;
        (m.*table)[i] = v;
        std::string tag = name;
        tag += binary ? "[" + A.name(i / A.size) + "][" + A.name(i % A.size) + "]" : "[" + A.name(i) + "]";
        out.emplace_back(tag + "=" + A.name(v), std::move(m));
      }
    }
  };
  mutate(&FiniteAlgebra::join, "or", true);
  mutate(&FiniteAlgebra::meet, "and", true);
  mutate(&FiniteAlgebra::neg, "not", false);
  mutate(&FiniteAlgebra::j2, "J2", false);
  return out;
}

/// tau(phi) = phi ~= 1 for Be and ~J0 phi ~= 1 for PWKe.
inline Equation tau(const Formula& phi, MatrixLogic logic) {
  return {logic.half_designated ? Formula::neg(Formula::j0(phi)) : phi, Formula::one()};
}

/// rho(s ~= t) = s === t.
inline Formula rho(const Equation& e) { return Formula::equiv(e.lhs, e.rhs); }

/// Whether gamma |- phi in the matrix logic agrees with tau[gamma] |= tau(phi)
/// over WK^e.
inline bool alg1_check(std::span<const Formula> gamma, const Formula& phi, MatrixLogic logic) {
  static const FiniteAlgebra A = wke_algebra();
  std::vector<Equation> theta;
  for (const auto& g : gamma) theta.push_back(tau(g, logic));
  return matrix_consequence(gamma, phi, logic) == eq_consequence(theta, tau(phi, logic), A);
}

/// Whether s ~= t and tau(rho(s ~= t)) are interderivable over WK^e.
inline bool alg4_check(const Formula& lhs, const Formula& rhs, MatrixLogic logic) {
  static const FiniteAlgebra A = wke_algebra();
  Equation e{lhs, rhs};
  Equation back = tau(rho(e), logic);
  return eq_consequence(std::span<const Equation>(&e, 1), back, A) &&
         eq_consequence(std::span<const Equation>(&back, 1), e, A);
}

// {"size": n, "names": [...], "or": [[...]], "and": [[...]], "not": [...],
//  "j2": [...], "zero": i, "one": j}
inline FiniteAlgebra algebra_from_json(const nlohmann::json& j) {
  try {
    FiniteAlgebra A;
    A.size = j.at("size").get<std::size_t>();
    auto rows = [&](const char* key) {
      std::vector<std::size_t> flat;
      const auto& t = j.at(key);
      if (!t.is_array() || t.size() != A.size) throw FormatError(std::string(key) + " needs one row per element");
      for (const auto& row : t) {
        auto r = row.get<std::vector<std::size_t>>();
        if (r.size() != A.size) throw FormatError(std::string(key) + " rows need one entry per element");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      return flat;
    };
    A.join = rows("or");
    A.meet = rows("and");
    A.neg = j.at("not").get<std::vector<std::size_t>>();
    A.j2 = j.at("j2").get<std::vector<std::size_t>>();
    A.zero = j.at("zero").get<std::size_t>();
    A.one = j.at("one").get<std::size_t>();
    if (j.contains("names")) A.names = j.at("names").get<std::vector<std::string>>();
    A.validate();
    return A;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed algebra: ") + e.what());
  }
}

inline FiniteAlgebra algebra_from_string(const std::string& text) {
  try {
    return algebra_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed algebra: ") + e.what());
  }
}

inline nlohmann::ordered_json algebra_to_json(const FiniteAlgebra& A) {
  nlohmann::ordered_json j;
  j["size"] = A.size;
  if (!A.names.empty()) j["names"] = A.names;
  auto rows = [&](const std::vector<std::size_t>& t) {
    auto out = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < A.size; ++i)
      out.push_back(std::vector<std::size_t>(t.begin() + static_cast<std::ptrdiff_t>(i * A.size),
                                             t.begin() + static_cast<std::ptrdiff_t>((i + 1) * A.size)));
    return out;
  };
  j["or"] = rows(A.join);
  j["and"] = rows(A.meet);
  j["not"] = A.neg;
  j["j2"] = A.j2;
  j["zero"] = A.zero;
  j["one"] = A.one;
  return j;
}

}  // namespace wkmodal
