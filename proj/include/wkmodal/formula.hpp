#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wkmodal {

/// Connectives of the external modal language. The first seven are the core
/// signature; the rest are abbreviations kept in the tree for printing and
/// removed by `expand_sugar`.
enum class Op : std::uint8_t {
  var,
  zero,
  one,
  neg,
  disj,
  j2,
  box,
  // sugar
  conj,
  imp,
  iff,
  j0,
  j1,
  plus,
  equiv,
  dia,
};

constexpr bool is_core(Op op) noexcept { return op <= Op::box; }

constexpr std::size_t arity(Op op) noexcept {
  switch (op) {
    case Op::var:
    case Op::zero:
    case Op::one:
      return 0;
    case Op::disj:
    case Op::conj:
    case Op::imp:
    case Op::iff:
    case Op::equiv:
      return 2;
    default:
      return 1;
  }
}

/// Operators that put their argument under the scope of some J_k. The sugar
/// nodes `+` and `===` qualify because their expansions do.
constexpr bool covers(Op op) noexcept {
  return op == Op::j0 || op == Op::j1 || op == Op::j2 || op == Op::plus || op == Op::equiv;
}

/// Metavariables used by schemata are variables whose name starts with '?'.
inline bool is_metavariable(std::string_view name) noexcept { return !name.empty() && name.front() == '?'; }

namespace detail {
struct FormulaNode;
}

/// Immutable formula tree with structural equality. Copies share nodes.
class Formula {
 public:
  static Formula var(std::string name);
  static Formula zero();
  static Formula one();
  static Formula neg(Formula a);
  static Formula disj(Formula a, Formula b);
  static Formula j2(Formula a);
  static Formula box(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula j0(Formula a);
  static Formula j1(Formula a);
  static Formula plus(Formula a);
  static Formula equiv(Formula a, Formula b);
  static Formula dia(Formula a);

  static Formula make(Op op, std::vector<Formula> args, std::string name = {});

  Op op() const noexcept;
  const std::string& name() const noexcept;
  std::span<const Formula> args() const noexcept;
  const Formula& arg(std::size_t i) const { return args()[i]; }

  std::size_t hash() const noexcept;
  /// Number of nodes in the tree (shared subtrees counted once per occurrence).
  std::size_t size() const noexcept;
  std::size_t depth() const noexcept;

  bool is_var() const noexcept { return op() == Op::var; }
  bool same_node(const Formula& other) const noexcept { return node_ == other.node_; }

  friend bool operator==(const Formula& a, const Formula& b) noexcept;

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {

struct FormulaNode {
  Op op;
  std::string name;
  std::vector<Formula> args;
  std::size_t hash;
  std::size_t size;
  std::size_t depth;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) noexcept {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace detail

inline Formula Formula::make(Op op, std::vector<Formula> args, std::string name) {
  std::size_t h = detail::hash_combine(0x51ed2701, static_cast<std::size_t>(op));
  std::size_t size = 1;
  std::size_t depth = 0;
  if (op == Op::var) h = detail::hash_combine(h, std::hash<std::string>{}(name));
  for (const auto& a : args) {
    h = detail::hash_combine(h, a.hash());
    size += a.size();
    depth = std::max(depth, a.depth() + 1);
  }
  auto node = std::make_shared<const detail::FormulaNode>(
      detail::FormulaNode{op, std::move(name), std::move(args), h, size, depth});
  return Formula(std::move(node));
}

inline Formula Formula::var(std::string name) { return make(Op::var, {}, std::move(name)); }
inline Formula Formula::zero() { return make(Op::zero, {}); }
inline Formula Formula::one() { return make(Op::one, {}); }
inline Formula Formula::neg(Formula a) { return make(Op::neg, {std::move(a)}); }
inline Formula Formula::disj(Formula a, Formula b) { return make(Op::disj, {std::move(a), std::move(b)}); }
inline Formula Formula::j2(Formula a) { return make(Op::j2, {std::move(a)}); }
inline Formula Formula::box(Formula a) { return make(Op::box, {std::move(a)}); }
inline Formula Formula::conj(Formula a, Formula b) { return make(Op::conj, {std::move(a), std::move(b)}); }
inline Formula Formula::imp(Formula a, Formula b) { return make(Op::imp, {std::move(a), std::move(b)}); }
inline Formula Formula::iff(Formula a, Formula b) { return make(Op::iff, {std::move(a), std::move(b)}); }
inline Formula Formula::j0(Formula a) { return make(Op::j0, {std::move(a)}); }
inline Formula Formula::j1(Formula a) { return make(Op::j1, {std::move(a)}); }
inline Formula Formula::plus(Formula a) { return make(Op::plus, {std::move(a)}); }
inline Formula Formula::equiv(Formula a, Formula b) { return make(Op::equiv, {std::move(a), std::move(b)}); }
inline Formula Formula::dia(Formula a) { return make(Op::dia, {std::move(a)}); }

inline Op Formula::op() const noexcept { return node_->op; }
inline const std::string& Formula::name() const noexcept { return node_->name; }
inline std::span<const Formula> Formula::args() const noexcept { return node_->args; }
inline std::size_t Formula::hash() const noexcept { return node_->hash; }
inline std::size_t Formula::size() const noexcept { return node_->size; }
inline std::size_t Formula::depth() const noexcept { return node_->depth; }

inline bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.size() != b.size()) return false;
  if (a.op() == Op::var) return a.name() == b.name();
  auto xs = a.args();
  auto ys = b.args();
  return std::equal(xs.begin(), xs.end(), ys.begin(), ys.end());
}

/// Canonical total order: by size, then connective, then name, then arguments.
struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const noexcept { return compare(a, b) < 0; }

  static int compare(const Formula& a, const Formula& b) noexcept {
    if (a.same_node(b)) return 0;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
    if (a.op() == Op::var) {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    for (std::size_t i = 0; i < a.args().size(); ++i) {
      int c = compare(a.arg(i), b.arg(i));
      if (c != 0) return c;
    }
    return 0;
  }
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

using Substitution = std::map<std::string, Formula>;

/// Rewrites every abbreviation into the core signature {var, 0, 1, ~, |, J2, []}.
inline Formula expand_sugar(const Formula& f) {
  using F = Formula;
  if (f.op() == Op::var || f.op() == Op::zero || f.op() == Op::one) return f;
  std::vector<Formula> xs;
  xs.reserve(f.args().size());
  bool changed = false;
  for (const auto& a : f.args()) {
    xs.push_back(expand_sugar(a));
    changed = changed || !xs.back().same_node(a);
  }
  auto imp = [](const F& a, const F& b) { return F::disj(F::neg(a), b); };
  auto conj = [](const F& a, const F& b) { return F::neg(F::disj(F::neg(a), F::neg(b))); };
  auto iff = [&](const F& a, const F& b) { return conj(imp(a, b), imp(b, a)); };
  auto j0 = [](const F& a) { return F::j2(F::neg(a)); };
  auto j1 = [&](const F& a) { return F::neg(F::disj(F::j2(a), j0(a))); };

  switch (f.op()) {
    case Op::neg:
    case Op::disj:
    case Op::j2:
    case Op::box:
      return changed ? Formula::make(f.op(), std::move(xs)) : f;
    case Op::conj:
      return conj(xs[0], xs[1]);
    case Op::imp:
      return imp(xs[0], xs[1]);
    case Op::iff:
      return iff(xs[0], xs[1]);
    case Op::j0:
      return j0(xs[0]);
    case Op::j1:
      return j1(xs[0]);
    case Op::plus:
      return F::neg(j1(xs[0]));
    case Op::equiv:
      return conj(iff(F::j2(xs[0]), F::j2(xs[1])), iff(j0(xs[0]), j0(xs[1])));
    case Op::dia:
      return F::neg(F::box(F::neg(xs[0])));
    default:
      return f;
  }
}

inline bool is_core_formula(const Formula& f) {
  if (!is_core(f.op())) return false;
  for (const auto& a : f.args())
    if (!is_core_formula(a)) return false;
  return true;
}

inline bool has_box(const Formula& f) {
  if (f.op() == Op::box || f.op() == Op::dia) return true;
  for (const auto& a : f.args())
    if (has_box(a)) return true;
  return false;
}

inline std::size_t modal_depth(const Formula& f) {
  std::size_t d = 0;
  for (const auto& a : f.args()) d = std::max(d, modal_depth(a));
  return d + ((f.op() == Op::box || f.op() == Op::dia) ? 1 : 0);
}

namespace detail {
inline void collect_variables(const Formula& f, bool covered, std::set<std::string>& all,
                              std::set<std::string>* open) {
  if (f.op() == Op::var) {
    all.insert(f.name());
    if (open != nullptr && !covered) open->insert(f.name());
    return;
  }
  bool inner = covered || covers(f.op());
  for (const auto& a : f.args()) collect_variables(a, inner, all, open);
}
}  // namespace detail

inline std::set<std::string> variables(const Formula& f) {
  std::set<std::string> all;
  detail::collect_variables(f, false, all, nullptr);
  return all;
}

inline std::set<std::string> variables(std::span<const Formula> fs) {
  std::set<std::string> all;
  for (const auto& f : fs) detail::collect_variables(f, false, all, nullptr);
  return all;
}

/// Variables with at least one occurrence outside every J_k. Box does not cover.
inline std::set<std::string> open_variables(const Formula& f) {
  std::set<std::string> all;
  std::set<std::string> open;
  detail::collect_variables(f, false, all, &open);
  return open;
}

inline bool is_external(const Formula& f) { return open_variables(f).empty(); }

/// Side condition of restricted modus ponens with minor premise `phi` and
/// conclusion `psi`: no variable is open in `phi` and covered in `psi`.
/// A variable absent from `psi` counts as covered there (it has no open occurrence).
inline bool rmp_applicable(const Formula& phi, const Formula& psi) {
  auto open_psi = open_variables(psi);
  for (const auto& x : open_variables(phi))
    if (!open_psi.contains(x)) return false;
  return true;
}

inline Formula substitute(const Formula& f, const Substitution& sub) {
  if (f.op() == Op::var) {
    auto it = sub.find(f.name());
    return it == sub.end() ? f : it->second;
  }
  if (f.args().empty()) return f;
  std::vector<Formula> xs;
  xs.reserve(f.args().size());
  bool changed = false;
  for (const auto& a : f.args()) {
    xs.push_back(substitute(a, sub));
    changed = changed || !xs.back().same_node(a);
  }
  return changed ? Formula::make(f.op(), std::move(xs), f.name()) : f;
}

/// A finite set of core formulas in canonical order.
class ClosureSet {
 public:
  ClosureSet() = default;

  /// Wraps formulas already known to be closed; sorts and removes duplicates.
  static ClosureSet from_closed(std::vector<Formula> items) {
    ClosureSet s;
    std::sort(items.begin(), items.end(), FormulaLess{});
    items.erase(std::unique(items.begin(), items.end()), items.end());
    s.items_ = std::move(items);
    return s;
  }

  bool contains(const Formula& f) const {
    return std::binary_search(items_.begin(), items_.end(), f, FormulaLess{});
  }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const std::vector<Formula>& items() const noexcept { return items_; }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }

  friend bool operator==(const ClosureSet&, const ClosureSet&) = default;

 private:
  std::vector<Formula> items_;
};

/// Formulas a set must contain alongside `f` to be closed under subformulas:
/// immediate arguments, plus the expansion of `+phi` for every `[]phi`.
inline std::vector<Formula> closure_requirements(const Formula& f) {
  std::vector<Formula> out(f.args().begin(), f.args().end());
  if (f.op() == Op::box) out.push_back(expand_sugar(Formula::plus(f.arg(0))));
  return out;
}

/// Least superset of the (expanded) seed closed under subformulas.
inline ClosureSet closure(std::span<const Formula> seed) {
  std::set<Formula, FormulaLess> done;
  std::vector<Formula> todo;
  for (const auto& f : seed) todo.push_back(expand_sugar(f));
  while (!todo.empty()) {
    Formula f = todo.back();
    todo.pop_back();
    if (!done.insert(f).second) continue;
    for (auto& g : closure_requirements(f))
      if (!done.contains(g)) todo.push_back(std::move(g));
  }
  return ClosureSet::from_closed(std::vector<Formula>(done.begin(), done.end()));
}

inline ClosureSet closure(std::initializer_list<Formula> seed) {
  return closure(std::span<const Formula>(seed.begin(), seed.size()));
}

inline bool is_closed(const ClosureSet& sigma) {
  for (const auto& f : sigma) {
    if (!is_core_formula(f)) return false;
    for (const auto& g : closure_requirements(f))
      if (!sigma.contains(g)) return false;
  }
  return true;
}

}  // namespace wkmodal

template <>
struct std::hash<wkmodal::Formula> {
  std::size_t operator()(const wkmodal::Formula& f) const noexcept { return f.hash(); }
};
