#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enumerate.hpp"
#include "errors.hpp"
#include "formula.hpp"
#include "kripke.hpp"

namespace wkmodal {

enum class FrameClass : std::uint8_t { all, reflexive, transitive, euclidean, refl_trans, equivalence };

constexpr std::string_view to_string(FrameClass c) noexcept {
  switch (c) {
    case FrameClass::all: return "all";
    case FrameClass::reflexive: return "reflexive";
    case FrameClass::transitive: return "transitive";
    case FrameClass::euclidean: return "euclidean";
    case FrameClass::refl_trans: return "refl+trans";
    case FrameClass::equivalence: return "equivalence";
  }
  return "?";
}

inline std::optional<FrameClass> parse_frame_class(std::string_view s) {
  for (auto c : {FrameClass::all, FrameClass::reflexive, FrameClass::transitive, FrameClass::euclidean,
                 FrameClass::refl_trans, FrameClass::equivalence})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

inline bool in_class(const KripkeFrame& f, FrameClass c) {
  switch (c) {
    case FrameClass::all: return true;
    case FrameClass::reflexive: return frame_has(f, FrameProperty::reflexive);
    case FrameClass::transitive: return frame_has(f, FrameProperty::transitive);
    case FrameClass::euclidean: return frame_has(f, FrameProperty::euclidean);
    case FrameClass::refl_trans:
      return frame_has(f, FrameProperty::reflexive) && frame_has(f, FrameProperty::transitive);
    case FrameClass::equivalence:
      return frame_has(f, FrameProperty::reflexive) && frame_has(f, FrameProperty::transitive) &&
             frame_has(f, FrameProperty::euclidean);
  }
  return false;
}

inline constexpr std::uint64_t unbounded = std::numeric_limits<std::uint64_t>::max();

/// 2^|closure(gamma + phi)|, saturating at `unbounded`.
inline std::uint64_t fmp_bound(std::span<const Formula> gamma, const Formula& phi) {
  std::vector<Formula> seed(gamma.begin(), gamma.end());
  seed.push_back(phi);
  std::size_t k = closure(seed).size();
  return k >= 64 ? unbounded : std::uint64_t{1} << k;
}

inline std::size_t default_max_worlds(std::span<const Formula> gamma, const Formula& phi) {
  return static_cast<std::size_t>(std::min<std::uint64_t>(fmp_bound(gamma, phi), 4));
}

enum class Verdict : std::uint8_t { valid, invalid, valid_up_to_bound };

constexpr std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::invalid: return "invalid";
    case Verdict::valid_up_to_bound: return "valid-up-to-bound";
  }
  return "?";
}

struct DecideOptions {
  FrameClass frame_class = FrameClass::all;
  std::optional<std::size_t> max_worlds;  // default_max_worlds when unset
  std::uint64_t budget = 20'000'000;      // models examined
};

struct Decision {
  Verdict verdict = Verdict::valid_up_to_bound;
  std::optional<KripkeModel> countermodel;
  std::size_t world = 0;  // the refuting world when invalid
  std::size_t searched_worlds = 0;
  std::size_t sigma_size = 0;
  std::uint64_t bound = 0;  // fmp bound
  std::uint64_t models_examined = 0;
  double elapsed_seconds = 0;
};

/// Searches models of the frame class with 1..max_worlds worlds, in
/// canonical order, for a world where every premise is designated and the
/// conclusion is not.
inline Decision decide(std::span<const Formula> gamma, const Formula& phi, Semantics semantics,
                       const DecideOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  Decision d;
  std::vector<Formula> roots(gamma.begin(), gamma.end());
  roots.push_back(phi);
  d.sigma_size = closure(roots).size();
  d.bound = d.sigma_size >= 64 ? unbounded : std::uint64_t{1} << d.sigma_size;
  const std::size_t max_worlds =
      opts.max_worlds ? *opts.max_worlds : static_cast<std::size_t>(std::min<std::uint64_t>(d.bound, 4));
  if (max_worlds == 0) throw EvalError("max worlds must be at least 1");

  FormulaDag dag(roots);
  const auto& vars = dag.variables();
  std::vector<std::string> sorted_vars = vars;
  std::sort(sorted_vars.begin(), sorted_vars.end());
  std::vector<std::size_t> var_map(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i)
    var_map[i] = static_cast<std::size_t>(std::find(sorted_vars.begin(), sorted_vars.end(), vars[i]) -
                                          sorted_vars.begin());

  std::vector<Truth> vals;
  auto finish = [&] {
    d.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return d;
  };

  for (std::size_t n = 1; n <= max_worlds; ++n) {
    const std::uint64_t per_frame = valuation_count(n, sorted_vars.size());
    bool found = !for_each_frame(n, [&](const KripkeFrame& frame) {
      if (!in_class(frame, opts.frame_class)) return true;
      if (per_frame > opts.budget - d.models_examined)
        throw BudgetExceeded("search exceeds the budget of " + std::to_string(opts.budget) + " models");
      return for_each_valuation(frame, sorted_vars, semantics, [&](const KripkeModel& m) {
        ++d.models_examined;
        dag.evaluate(m, var_map, vals);
        for (std::size_t w = 0; w < n; ++w) {
          bool premises = true;
          for (std::size_t g = 0; g + 1 < roots.size() && premises; ++g)
            premises = designated(semantics, vals[dag.root(g) * n + w]);
          if (premises && !designated(semantics, vals[dag.root(roots.size() - 1) * n + w])) {
            d.verdict = Verdict::invalid;
            d.countermodel = m;
            d.world = w;
            return false;
          }
        }
        return true;
      });
    });
    d.searched_worlds = n;
    if (found) return finish();
  }
  d.verdict = max_worlds >= d.bound ? Verdict::valid : Verdict::valid_up_to_bound;
  return finish();
}

inline Decision decide(const Formula& phi, Semantics semantics, const DecideOptions& opts = {}) {
  return decide(std::span<const Formula>{}, phi, semantics, opts);
}

}  // namespace wkmodal
