#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "truth.hpp"

namespace wkmodal {

/// How box is read: truth in all successors (Bochvar) or non-falsity in all
/// successors (PWK). Also fixes the designated values: {1} resp. {1, e}.
enum class Semantics : std::uint8_t { bochvar, pwk };

constexpr std::string_view to_string(Semantics s) noexcept { return s == Semantics::bochvar ? "bochvar" : "pwk"; }

constexpr bool designated(Semantics s, Truth v) noexcept {
  return v == Truth::one || (s == Semantics::pwk && v == Truth::half);
}

class KripkeFrame {
 public:
  /// Worlds named w0..w{n-1}, no edges.
  explicit KripkeFrame(std::size_t n) : KripkeFrame(default_names(n)) {}

  explicit KripkeFrame(std::vector<std::string> worlds) : worlds_(std::move(worlds)) {
    if (worlds_.empty()) throw FormatError("a frame needs at least one world");
    auto sorted = worlds_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw FormatError("duplicate world id");
    relation_.assign(worlds_.size() * worlds_.size(), false);
  }

  /// Frame whose relation is the bitmask `mask`, bit i*n+j meaning iRj.
  static KripkeFrame from_mask(std::size_t n, std::uint64_t mask) {
    KripkeFrame f(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) f.relation_[i * n + j] = ((mask >> (i * n + j)) & 1U) != 0;
    return f;
  }

  static std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
    return names;
  }

  std::size_t size() const noexcept { return worlds_.size(); }
  const std::vector<std::string>& worlds() const noexcept { return worlds_; }
  const std::string& world(std::size_t i) const { return worlds_.at(i); }

  std::size_t index_of(std::string_view id) const {
    for (std::size_t i = 0; i < worlds_.size(); ++i)
      if (worlds_[i] == id) return i;
    throw EvalError("unknown world '" + std::string(id) + "'");
  }

  bool related(std::size_t i, std::size_t j) const { return relation_[i * size() + j]; }
  void relate(std::size_t i, std::size_t j, bool on = true) {
    if (i >= size() || j >= size()) throw EvalError("world index out of range");
    relation_[i * size() + j] = on;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        if (related(i, j)) out.emplace_back(i, j);
    return out;
  }

  friend bool operator==(const KripkeFrame&, const KripkeFrame&) = default;

 private:
  std::vector<std::string> worlds_;
  std::vector<bool> relation_;
};

/// A frame, a (world, variable) -> Truth table over declared variables, and
/// the box semantics the model is read under.
class KripkeModel {
 public:
  KripkeModel(KripkeFrame frame, std::vector<std::string> variables, Semantics semantics)
      : frame_(std::move(frame)),
        vars_(std::move(variables)),
        values_(frame_.size() * vars_.size(), Truth::zero),
        semantics_(semantics) {}

  const KripkeFrame& frame() const noexcept { return frame_; }
  KripkeFrame& frame() noexcept { return frame_; }
  std::size_t size() const noexcept { return frame_.size(); }
  const std::vector<std::string>& variables() const noexcept { return vars_; }
  Semantics semantics() const noexcept { return semantics_; }
  void set_semantics(Semantics s) noexcept { semantics_ = s; }

  std::size_t variable_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return i;
    throw EvalError("undeclared variable '" + std::string(name) + "'");
  }

  Truth value(std::size_t world, std::size_t var) const { return values_[world * vars_.size() + var]; }
  Truth value(std::size_t world, std::string_view var) const { return value(world, variable_index(var)); }
  void set(std::size_t world, std::size_t var, Truth v) { values_[world * vars_.size() + var] = v; }
  void set(std::size_t world, std::string_view var, Truth v) { set(world, variable_index(var), v); }

  /// Row-major (world, variable) table.
  std::span<Truth> values() noexcept { return values_; }
  std::span<const Truth> values() const noexcept { return values_; }

  friend bool operator==(const KripkeModel&, const KripkeModel&) = default;

 private:
  KripkeFrame frame_;
  std::vector<std::string> vars_;
  std::vector<Truth> values_;
  Semantics semantics_;
};

/// Subformula DAG of one or more formulas, evaluated over all worlds of a
/// model at once. Structurally equal subformulas share a node, so expanded
/// abbreviations do not blow up evaluation cost.
class FormulaDag {
 public:
  struct Node {
    Op op;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t var = 0;  // index into variables() for Op::var
  };

  explicit FormulaDag(std::span<const Formula> roots) {
    for (const auto& r : roots) roots_.push_back(intern(r));
  }
  explicit FormulaDag(const Formula& root) : FormulaDag(std::span<const Formula>(&root, 1)) {}

  std::size_t root(std::size_t i = 0) const { return roots_.at(i); }
  std::size_t root_count() const noexcept { return roots_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<std::string>& variables() const noexcept { return vars_; }

  /// Fills `out[node * n + world]` for every node and world.
  void evaluate(const KripkeModel& m, std::vector<Truth>& out) const {
    std::vector<std::size_t> var_map;
    var_map.reserve(vars_.size());
    for (const auto& v : vars_) var_map.push_back(m.variable_index(v));
    evaluate(m, var_map, out);
  }

  /// As above with a precomputed map from DAG variables to model variables.
  void evaluate(const KripkeModel& m, std::span<const std::size_t> var_map, std::vector<Truth>& out) const {
    const std::size_t n = m.size();
    out.resize(nodes_.size() * n);
    const auto& fr = m.frame();
    const bool pwk = m.semantics() == Semantics::pwk;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const Node& nd = nodes_[k];
      Truth* dst = &out[k * n];
      const Truth* x = &out[nd.a * n];
      const Truth* y = &out[nd.b * n];
      for (std::size_t w = 0; w < n; ++w) {
        Truth v = Truth::zero;
        switch (nd.op) {
          case Op::var: v = m.value(w, var_map[nd.var]); break;
          case Op::zero: v = Truth::zero; break;
          case Op::one: v = Truth::one; break;
          case Op::neg: v = wk::neg(x[w]); break;
          case Op::disj: v = wk::join(x[w], y[w]); break;
          case Op::j2: v = wk::j2(x[w]); break;
          case Op::conj: v = wk::meet(x[w], y[w]); break;
          case Op::imp: v = wk::imp(x[w], y[w]); break;
          case Op::iff: v = wk::iff(x[w], y[w]); break;
          case Op::j0: v = wk::j0(x[w]); break;
          case Op::j1: v = wk::j1(x[w]); break;
          case Op::plus: v = wk::plus(x[w]); break;
          case Op::equiv: v = wk::equiv(x[w], y[w]); break;
          case Op::box: v = box_value(fr, n, w, x, pwk); break;
          case Op::dia: v = wk::neg(box_of_negation(fr, n, w, x, pwk)); break;
        }
        dst[w] = v;
      }
    }
  }

  /// Box clauses: e iff the argument is e here; otherwise 1 iff every
  /// successor has the argument at 1 (Bochvar) or different from 0 (PWK).
  static Truth box_value(const KripkeFrame& fr, std::size_t n, std::size_t w, const Truth* x, bool pwk) {
    if (x[w] == Truth::half) return Truth::half;
    for (std::size_t s = 0; s < n; ++s) {
      if (!fr.related(w, s)) continue;
      bool ok = pwk ? x[s] != Truth::zero : x[s] == Truth::one;
      if (!ok) return Truth::zero;
    }
    return Truth::one;
  }

 private:
  // Diamond is read through its definition ~[]~.
  static Truth box_of_negation(const KripkeFrame& fr, std::size_t n, std::size_t w, const Truth* x, bool pwk) {
    if (x[w] == Truth::half) return Truth::half;
    for (std::size_t s = 0; s < n; ++s) {
      if (!fr.related(w, s)) continue;
      Truth ns = wk::neg(x[s]);
      bool ok = pwk ? ns != Truth::zero : ns == Truth::one;
      if (!ok) return Truth::zero;
    }
    return Truth::one;
  }

  std::uint32_t intern(const Formula& f) {
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    Node nd{f.op()};
    if (f.op() == Op::var) {
      auto pos = std::find(vars_.begin(), vars_.end(), f.name());
      nd.var = static_cast<std::uint32_t>(pos - vars_.begin());
      if (pos == vars_.end()) vars_.push_back(f.name());
    }
    if (!f.args().empty()) nd.a = intern(f.arg(0));
    if (f.args().size() > 1) nd.b = intern(f.arg(1));
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(nd);
    index_.emplace(f, id);
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> roots_;
  std::vector<std::string> vars_;
  std::unordered_map<Formula, std::uint32_t, FormulaHash> index_;
};

inline Truth eval_at(const KripkeModel& m, std::size_t world, const Formula& f) {
  if (world >= m.size()) throw EvalError("world index out of range");
  FormulaDag dag(f);
  std::vector<Truth> vals;
  dag.evaluate(m, vals);
  return vals[dag.root() * m.size() + world];
}

inline Truth eval_at(const KripkeModel& m, std::string_view world, const Formula& f) {
  return eval_at(m, m.frame().index_of(world), f);
}

/// Values of `f` at every world.
inline std::vector<Truth> eval_all(const KripkeModel& m, const Formula& f) {
  FormulaDag dag(f);
  std::vector<Truth> vals;
  dag.evaluate(m, vals);
  auto first = vals.begin() + static_cast<std::ptrdiff_t>(dag.root() * m.size());
  return {first, first + static_cast<std::ptrdiff_t>(m.size())};
}

/// Premises all designated at `w` imply the conclusion designated at `w`.
inline bool local_consequence_on(const KripkeModel& m, std::size_t w, std::span<const Formula> gamma,
                                 const Formula& phi) {
  for (const auto& g : gamma)
    if (!designated(m.semantics(), eval_at(m, w, g))) return true;
  return designated(m.semantics(), eval_at(m, w, phi));
}

inline bool satisfied_in(const KripkeModel& m, const Formula& phi) {
  auto vals = eval_all(m, phi);
  return std::any_of(vals.begin(), vals.end(), [&](Truth v) { return designated(m.semantics(), v); });
}

inline bool valid_in(const KripkeModel& m, const Formula& phi) {
  auto vals = eval_all(m, phi);
  return std::all_of(vals.begin(), vals.end(), [&](Truth v) { return designated(m.semantics(), v); });
}

enum class FrameProperty : std::uint8_t { reflexive, transitive, euclidean };

constexpr std::string_view to_string(FrameProperty p) noexcept {
  switch (p) {
    case FrameProperty::reflexive: return "reflexive";
    case FrameProperty::transitive: return "transitive";
    case FrameProperty::euclidean: return "euclidean";
  }
  return "?";
}

inline bool frame_has(const KripkeFrame& f, FrameProperty p) {
  const std::size_t n = f.size();
  switch (p) {
    case FrameProperty::reflexive:
      for (std::size_t w = 0; w < n; ++w)
        if (!f.related(w, w)) return false;
      return true;
    case FrameProperty::transitive:
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (f.related(x, y))
            for (std::size_t z = 0; z < n; ++z)
              if (f.related(y, z) && !f.related(x, z)) return false;
      return true;
    case FrameProperty::euclidean:
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (f.related(x, y))
            for (std::size_t z = 0; z < n; ++z)
              if (f.related(x, z) && !f.related(y, z)) return false;
      return true;
  }
  return false;
}

inline constexpr std::uint64_t default_budget = 5'000'000;

/// Number of valuations of `vars` on an n-world frame, saturating.
inline std::uint64_t valuation_count(std::size_t worlds, std::size_t vars) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < worlds * vars; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / 3) return std::numeric_limits<std::uint64_t>::max();
    c *= 3;
  }
  return c;
}

/// Steps `values` to the next valuation (last cell fastest, 0 < e < 1).
/// Returns false after the last one.
inline bool next_valuation(std::span<Truth> values) {
  for (std::size_t i = values.size(); i > 0; --i) {
    Truth& t = values[i - 1];
    if (t != Truth::one) {
      t = static_cast<Truth>(static_cast<int>(t) + 1);
      return true;
    }
    t = Truth::zero;
  }
  return false;
}

/// First model on the frame (valuations in canonical order) and world where
/// `phi` is not designated.
inline std::optional<std::pair<KripkeModel, std::size_t>> frame_counterexample(
    const KripkeFrame& frame, const Formula& phi, Semantics semantics, std::uint64_t budget = default_budget) {
  FormulaDag dag(phi);
  std::vector<std::string> vars = dag.variables();
  std::sort(vars.begin(), vars.end());
  if (valuation_count(frame.size(), vars.size()) > budget)
    throw BudgetExceeded("frame validity needs more than " + std::to_string(budget) + " valuations");
  KripkeModel m(frame, vars, semantics);
  std::vector<std::size_t> var_map;
  for (const auto& v : dag.variables()) var_map.push_back(m.variable_index(v));
  std::vector<Truth> vals;
  const std::size_t n = frame.size();
  do {
    dag.evaluate(m, var_map, vals);
    for (std::size_t w = 0; w < n; ++w)
      if (!designated(semantics, vals[dag.root() * n + w])) return std::make_pair(m, w);
  } while (next_valuation(m.values()));
  return std::nullopt;
}

/// `phi` is designated at every world of every model on the frame.
inline bool frame_valid(const KripkeFrame& frame, const Formula& phi, Semantics semantics,
                        std::uint64_t budget = default_budget) {
  return !frame_counterexample(frame, phi, semantics, budget).has_value();
}

}  // namespace wkmodal
