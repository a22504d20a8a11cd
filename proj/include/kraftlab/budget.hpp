#pragma once

#include <cstddef>
#include <cstdint>

namespace kraftlab {

/// Resource ceilings for exhaustive procedures. Exceeding one raises
/// BudgetExceeded; it never silently truncates a result that claims to be
/// complete.
struct Budget {
  /// Maximum number of strings (input words, blocks, ball members) a single
  /// enumeration may visit.
  std::uint64_t max_strings = std::uint64_t{1} << 24;
  /// Maximum mantissa width, in bits, any exact dyadic may reach during
  /// matrix powering.
  std::size_t max_mantissa_bits = std::size_t{1} << 20;
};

/// Default enumeration ceiling (2^24 strings).
constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

}  // namespace kraftlab
