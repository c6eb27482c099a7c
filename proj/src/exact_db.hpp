#pragma once

// Size-optimal majority structures for every 3-input function that needs at
// most three nodes, found by exhaustive enumeration on first use.

#include <array>
#include <cstdint>
#include <vector>

namespace pud::detail {

/// base 0 is constant 0, 1..3 are cut leaves 0..2, 4+j is structure node j.
struct ExactLiteral {
  std::uint8_t base = 0;
  bool complemented = false;
};

struct ExactStructure {
  std::vector<std::array<ExactLiteral, 3>> nodes;
  ExactLiteral output;
};

inline constexpr unsigned kExactMaxNodes = 3;
inline constexpr unsigned kExactAlternatives = 4;

/// Truth tables are over 8 minterms; leaf i is the value of minterm bit i.
/// Returns up to kExactAlternatives structures of minimum size, or nothing
/// if the function needs more than kExactMaxNodes nodes.
const std::vector<ExactStructure>& exact_structures(std::uint8_t function);

std::uint8_t evaluate_structure(const ExactStructure& s);

}  // namespace pud::detail
