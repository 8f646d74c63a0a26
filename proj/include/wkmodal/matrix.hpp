#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "truth.hpp"

namespace wkmodal {

/// A logic induced by WK^e with a set of designated values.
struct MatrixLogic {
  std::string_view name;
  bool half_designated;

  constexpr bool designated(Truth v) const noexcept {
    return v == Truth::one || (half_designated && v == Truth::half);
  }
  friend constexpr bool operator==(const MatrixLogic&, const MatrixLogic&) = default;
};

/// Bochvar external logic: truth preservation.
inline constexpr MatrixLogic bochvar_external{"Be", false};
/// Paraconsistent weak Kleene external logic: non-falsity preservation.
inline constexpr MatrixLogic pwk_external{"PWKe", true};

using Assignment = std::map<std::string, Truth>;

/// Homomorphic extension of `a` to a box-free formula. Sugar nodes are
/// evaluated through their own tables rather than through expansion.
inline Truth wk_eval(const Formula& f, const Assignment& a) {
  switch (f.op()) {
    case Op::var: {
      auto it = a.find(f.name());
      if (it == a.end()) throw EvalError("no value for variable '" + f.name() + "'");
      return it->second;
    }
    case Op::zero: return Truth::zero;
    case Op::one: return Truth::one;
    case Op::neg: return wk::neg(wk_eval(f.arg(0), a));
    case Op::disj: return wk::join(wk_eval(f.arg(0), a), wk_eval(f.arg(1), a));
    case Op::j2: return wk::j2(wk_eval(f.arg(0), a));
    case Op::conj: return wk::meet(wk_eval(f.arg(0), a), wk_eval(f.arg(1), a));
    case Op::imp: return wk::imp(wk_eval(f.arg(0), a), wk_eval(f.arg(1), a));
    case Op::iff: return wk::iff(wk_eval(f.arg(0), a), wk_eval(f.arg(1), a));
    case Op::j0: return wk::j0(wk_eval(f.arg(0), a));
    case Op::j1: return wk::j1(wk_eval(f.arg(0), a));
    case Op::plus: return wk::plus(wk_eval(f.arg(0), a));
    case Op::equiv: return wk::equiv(wk_eval(f.arg(0), a), wk_eval(f.arg(1), a));
    case Op::box:
    case Op::dia: throw EvalError("modal operator in a matrix evaluation");
  }
  throw EvalError("unknown connective");
}

/// Calls `fn(assignment)` for all 3^k assignments to `vars`, lexicographically
/// with 0 < e < 1. Stops early and returns false when `fn` returns false.
template <class Fn>
bool for_each_assignment(const std::vector<std::string>& vars, Fn&& fn) {
  Assignment a;
  for (const auto& v : vars) a[v] = Truth::zero;
  while (true) {
    if (!fn(static_cast<const Assignment&>(a))) return false;
    std::size_t i = vars.size();
    while (i > 0) {
      --i;
      Truth& t = a[vars[i]];
      if (t != Truth::one) {
        t = static_cast<Truth>(static_cast<int>(t) + 1);
        break;
      }
      t = Truth::zero;
      if (i == 0) return true;
    }
    if (vars.empty()) return true;
  }
}

namespace detail {

struct PostfixInstr {
  Op op;
  std::uint32_t slot = 0;  // variable index for Op::var
};

inline bool is_binary(Op op) noexcept {
  return op == Op::disj || op == Op::conj || op == Op::imp || op == Op::iff || op == Op::equiv;
}

/// Post-order code for `f` with each variable resolved to its index in the
/// sorted list `vars`.
inline void compile_postfix(const Formula& f, const std::vector<std::string>& vars, std::vector<PostfixInstr>& out) {
  for (const auto& a : f.args()) compile_postfix(a, vars, out);
  PostfixInstr in{f.op()};
  if (f.op() == Op::var) {
    auto it = std::lower_bound(vars.begin(), vars.end(), f.name());
    if (it == vars.end() || *it != f.name()) throw EvalError("no value for variable '" + f.name() + "'");
    in.slot = static_cast<std::uint32_t>(it - vars.begin());
  }
  out.push_back(in);
}

inline std::vector<PostfixInstr> compile_postfix(const Formula& f, const std::vector<std::string>& vars) {
  std::vector<PostfixInstr> out;
  compile_postfix(f, vars, out);
  return out;
}

/// Runs postfix code; `apply(op, x, y)` computes one connective (y unused
/// for unary ones) and `load(slot)` reads a variable.
template <class T, class Load, class Apply>
T run_postfix(std::span<const PostfixInstr> code, std::vector<T>& stack, Load&& load, Apply&& apply) {
  stack.clear();
  for (const auto& in : code) {
    switch (in.op) {
      case Op::var: stack.push_back(load(in.slot)); break;
      case Op::zero:
      case Op::one: stack.push_back(apply(in.op, T{}, T{})); break;
      default:
        if (is_binary(in.op)) {
          T y = stack.back();
          stack.pop_back();
          stack.back() = apply(in.op, stack.back(), y);
        } else {
          stack.back() = apply(in.op, stack.back(), T{});
        }
    }
  }
  return stack.back();
}

inline Truth apply_matrix(Op op, Truth x, Truth y) {
  switch (op) {
    case Op::zero: return Truth::zero;
    case Op::one: return Truth::one;
    case Op::neg: return wk::neg(x);
    case Op::disj: return wk::join(x, y);
    case Op::j2: return wk::j2(x);
    case Op::conj: return wk::meet(x, y);
    case Op::imp: return wk::imp(x, y);
    case Op::iff: return wk::iff(x, y);
    case Op::j0: return wk::j0(x);
    case Op::j1: return wk::j1(x);
    case Op::plus: return wk::plus(x);
    case Op::equiv: return wk::equiv(x, y);
    default: throw EvalError("modal operator in a matrix evaluation");
  }
}

/// Odometer over `slots` in {0..base-1}, last slot fastest. False once every
/// combination has been visited.
template <class T>
bool advance(std::vector<T>& slots, std::size_t base) {
  for (std::size_t i = slots.size(); i > 0; --i) {
    auto& x = slots[i - 1];
    if (static_cast<std::size_t>(x) + 1 < base) {
      x = static_cast<T>(static_cast<std::size_t>(x) + 1);
      return true;
    }
    x = T{};
  }
  return false;
}

}  // namespace detail

namespace detail {

// Sorted distinct variable names of box-free formulas; throws on a box.
inline void matrix_variables(const Formula& f, std::vector<std::string_view>& out) {
  if (f.op() == Op::box || f.op() == Op::dia) throw EvalError("modal operator in a matrix evaluation");
  if (f.op() == Op::var) out.push_back(f.name());
  for (const auto& a : f.args()) matrix_variables(a, out);
}

inline void compile_postfix(const Formula& f, std::span<const std::string_view> vars, std::vector<PostfixInstr>& out) {
  for (const auto& a : f.args()) compile_postfix(a, vars, out);
  PostfixInstr in{f.op()};
  if (f.op() == Op::var)
    in.slot = static_cast<std::uint32_t>(std::lower_bound(vars.begin(), vars.end(), f.name()) - vars.begin());
  out.push_back(in);
}

}  // namespace detail

/// First assignment (in enumeration order) designating every premise but not
/// the conclusion, if any.
inline std::optional<Assignment> consequence_counterexample(std::span<const Formula> gamma, const Formula& phi,
                                                            MatrixLogic logic) {
  thread_local std::vector<std::string_view> vars;
  thread_local std::vector<detail::PostfixInstr> code;
  thread_local std::vector<std::size_t> ends;
  thread_local std::vector<Truth> slots, stack;
  vars.clear();
  for (const auto& g : gamma) detail::matrix_variables(g, vars);
  detail::matrix_variables(phi, vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  code.clear();
  ends.clear();
  for (const auto& g : gamma) {
    detail::compile_postfix(g, vars, code);
    ends.push_back(code.size());
  }
  detail::compile_postfix(phi, vars, code);
  ends.push_back(code.size());

  slots.assign(vars.size(), Truth::zero);
  auto load = [&](std::uint32_t i) { return slots[i]; };
  auto value = [&](std::size_t k) {
    std::size_t begin = k == 0 ? 0 : ends[k - 1];
    return detail::run_postfix<Truth>(std::span(code).subspan(begin, ends[k] - begin), stack, load,
                                      detail::apply_matrix);
  };
  do {
    bool premises = true;
    for (std::size_t k = 0; k + 1 < ends.size() && premises; ++k) premises = logic.designated(value(k));
    if (premises && !logic.designated(value(ends.size() - 1))) {
      Assignment a;
      for (std::size_t i = 0; i < vars.size(); ++i) a[std::string(vars[i])] = slots[i];
      return a;
    }
  } while (detail::advance(slots, 3));
  return std::nullopt;
}

inline bool matrix_consequence(std::span<const Formula> gamma, const Formula& phi, MatrixLogic logic) {
  return !consequence_counterexample(gamma, phi, logic).has_value();
}

inline bool is_theorem(const Formula& phi, MatrixLogic logic) { return matrix_consequence({}, phi, logic); }

/// Right-associated conjunction of the translated premises implying the
/// translated conclusion: J2 for Be, ~J0 for PWKe.
inline Formula deduction_reduct(std::span<const Formula> gamma, const Formula& phi, MatrixLogic logic) {
  auto translate = [&](const Formula& f) {
    return logic.half_designated ? Formula::neg(Formula::j0(f)) : Formula::j2(f);
  };
  if (gamma.empty()) return translate(phi);
  Formula antecedent = translate(gamma.back());
  for (std::size_t i = gamma.size() - 1; i > 0; --i) antecedent = Formula::conj(translate(gamma[i - 1]), antecedent);
  return Formula::imp(antecedent, translate(phi));
}

/// Values of `f` under every assignment to `vars`, in enumeration order.
inline std::vector<Truth> truth_table(const Formula& f, const std::vector<std::string>& vars) {
  std::vector<std::string> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || has_box(f)) {
    std::vector<Truth> out;
    for_each_assignment(vars, [&](const Assignment& a) {
      out.push_back(wk_eval(f, a));
      return true;
    });
    return out;
  }
  auto code = detail::compile_postfix(f, sorted);
  // Slot order follows `vars`; the code indexes the sorted copy.
  std::vector<std::size_t> to_sorted(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i)
    to_sorted[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), vars[i]) - sorted.begin());
  std::vector<Truth> slots(vars.size(), Truth::zero), by_sorted(vars.size()), stack, out;
  auto load = [&](std::uint32_t i) { return by_sorted[i]; };
  do {
    for (std::size_t i = 0; i < vars.size(); ++i) by_sorted[to_sorted[i]] = slots[i];
    out.push_back(detail::run_postfix<Truth>(code, stack, load, detail::apply_matrix));
  } while (detail::advance(slots, 3));
  return out;
}

}  // namespace wkmodal
