#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>

namespace wkmodal {

/// Elements of the three-valued weak Kleene algebra. `half` is the infectious
/// "meaningless" value, printed as `e`. The enumerator order (0 < e < 1) is
/// the order used by every exhaustive enumeration in the library.
enum class Truth : std::uint8_t { zero = 0, half = 1, one = 2 };

inline constexpr std::array<Truth, 3> all_truth_values{Truth::zero, Truth::half, Truth::one};

constexpr bool is_classical(Truth v) noexcept { return v != Truth::half; }

constexpr std::string_view to_string(Truth v) noexcept {
  switch (v) {
    case Truth::zero:
      return "0";
    case Truth::half:
      return "e";
    case Truth::one:
      return "1";
  }
  return "?";
}

/// Accepts "0", "e", "1/2" and "1".
constexpr std::optional<Truth> parse_truth(std::string_view text) noexcept {
  if (text == "0") return Truth::zero;
  if (text == "1") return Truth::one;
  if (text == "e" || text == "1/2") return Truth::half;
  return std::nullopt;
}

inline std::ostream& operator<<(std::ostream& os, Truth v) { return os << to_string(v); }

// Operations of WK^e. The primitive ones (neg, join, j2) are the generating
// tables; the rest are composed from them exactly as the abbreviations read.
namespace wk {

constexpr Truth neg(Truth a) noexcept {
  switch (a) {
    case Truth::zero:
      return Truth::one;
    case Truth::one:
      return Truth::zero;
    default:
      return Truth::half;
  }
}

constexpr Truth join(Truth a, Truth b) noexcept {
  if (a == Truth::half || b == Truth::half) return Truth::half;
  return (a == Truth::one || b == Truth::one) ? Truth::one : Truth::zero;
}

constexpr Truth j2(Truth a) noexcept { return a == Truth::one ? Truth::one : Truth::zero; }

constexpr Truth meet(Truth a, Truth b) noexcept { return neg(join(neg(a), neg(b))); }
constexpr Truth imp(Truth a, Truth b) noexcept { return join(neg(a), b); }
constexpr Truth iff(Truth a, Truth b) noexcept { return meet(imp(a, b), imp(b, a)); }
constexpr Truth j0(Truth a) noexcept { return j2(neg(a)); }
constexpr Truth j1(Truth a) noexcept { return neg(join(j2(a), j2(neg(a)))); }
constexpr Truth plus(Truth a) noexcept { return neg(j1(a)); }

constexpr Truth equiv(Truth a, Truth b) noexcept {
  return meet(iff(j2(a), j2(b)), iff(j0(a), j0(b)));
}

}  // namespace wk
}  // namespace wkmodal
