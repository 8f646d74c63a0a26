#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kripke.hpp"

namespace wkmodal {

/// Largest world count whose relations fit in a 64-bit mask.
inline constexpr std::size_t max_enumerable_worlds = 8;

inline std::uint64_t frame_count(std::size_t n) {
  if (n * n >= 64) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << (n * n);
}

/// Total models with n worlds over k variables, saturating.
inline std::uint64_t model_count(std::size_t n, std::size_t k) {
  std::uint64_t frames = frame_count(n);
  std::uint64_t vals = valuation_count(n, k);
  if (frames != 0 && vals > std::numeric_limits<std::uint64_t>::max() / frames)
    return std::numeric_limits<std::uint64_t>::max();
  return frames * vals;
}

/// Calls `fn(frame)` for every relation on n worlds, by bitmask ascending.
/// Returns false if `fn` stopped the walk.
template <class Fn>
bool for_each_frame(std::size_t n, Fn&& fn) {
  if (n == 0) throw EvalError("a frame needs at least one world");
  if (n > max_enumerable_worlds) throw BudgetExceeded("too many worlds to enumerate frames");
  const std::uint64_t total = frame_count(n);
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (!fn(static_cast<const KripkeFrame&>(KripkeFrame::from_mask(n, mask)))) return false;
  return true;
}

/// Calls `fn(model)` for every model on `frame` over `vars`, valuations in
/// lexicographic (world, variable) order with 0 < e < 1.
template <class Fn>
bool for_each_valuation(const KripkeFrame& frame, const std::vector<std::string>& vars, Semantics semantics,
                        Fn&& fn) {
  KripkeModel m(frame, vars, semantics);
  do {
    if (!fn(static_cast<const KripkeModel&>(m))) return false;
  } while (next_valuation(m.values()));
  return true;
}

/// Every model with n worlds: frames by mask, then valuations. Throws
/// BudgetExceeded up front if the space is larger than `budget`.
template <class Fn>
bool for_each_model(std::size_t n, const std::vector<std::string>& vars, Semantics semantics, Fn&& fn,
                    std::uint64_t budget = default_budget) {
  if (model_count(n, vars.size()) > budget)
    throw BudgetExceeded("enumerating " + std::to_string(n) + "-world models exceeds the budget of " +
                         std::to_string(budget));
  return for_each_frame(n, [&](const KripkeFrame& f) { return for_each_valuation(f, vars, semantics, fn); });
}

/// Reproducible random model: each edge present with probability 1/2, each
/// value uniform over {0, e, 1}.
inline KripkeModel random_model(std::mt19937_64& rng, std::size_t n, const std::vector<std::string>& vars,
                                Semantics semantics) {
  KripkeFrame f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f.relate(i, j, (rng() & 1U) != 0);
  KripkeModel m(std::move(f), vars, semantics);
  for (auto& v : m.values()) v = static_cast<Truth>(rng() % 3);
  return m;
}

inline KripkeModel random_model(std::uint64_t seed, std::size_t n, const std::vector<std::string>& vars,
                                Semantics semantics) {
  std::mt19937_64 rng(seed);
  return random_model(rng, n, vars, semantics);
}

}  // namespace wkmodal
