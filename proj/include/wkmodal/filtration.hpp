#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "kripke.hpp"

namespace wkmodal {

struct Filtration {
  KripkeModel model;
  /// class_of[w] is the world of `model` that w collapses to.
  std::vector<std::size_t> class_of;
};

/// Quotient of `m` by agreement on the designation of every formula of
/// `sigma`. Classes are ordered by their least world, which also supplies
/// the valuation; [w]R[s] iff some member of [w] sees some member of [s].
inline Filtration filtrate(const KripkeModel& m, const ClosureSet& sigma) {
  if (!is_closed(sigma)) throw EvalError("filtration set is not closed under subformulas");
  const std::size_t n = m.size();
  const auto& items = sigma.items();

  std::vector<Truth> vals;
  if (!items.empty()) {
    FormulaDag dag(items);
    dag.evaluate(m, vals);
    std::vector<Truth> roots(items.size() * n);
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t w = 0; w < n; ++w) roots[i * n + w] = vals[dag.root(i) * n + w];
    vals = std::move(roots);
  }

  std::map<std::vector<bool>, std::size_t> index;
  std::vector<std::size_t> class_of(n);
  std::vector<std::size_t> reps;
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<bool> key(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) key[i] = designated(m.semantics(), vals[i * n + w]);
    auto [it, fresh] = index.emplace(std::move(key), reps.size());
    if (fresh) reps.push_back(w);
    class_of[w] = it->second;
  }

  std::vector<std::string> names;
  names.reserve(reps.size());
  for (auto r : reps) names.push_back(m.frame().world(r));
  KripkeFrame frame(std::move(names));
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t s = 0; s < n; ++s)
      if (m.frame().related(w, s)) frame.relate(class_of[w], class_of[s]);

  KripkeModel out(std::move(frame), m.variables(), m.semantics());
  for (std::size_t c = 0; c < reps.size(); ++c)
    for (std::size_t v = 0; v < m.variables().size(); ++v) out.set(c, v, m.value(reps[c], v));
  return {std::move(out), std::move(class_of)};
}

}  // namespace wkmodal
