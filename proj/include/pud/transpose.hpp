#pragma once

// Conversion between horizontal layout (one integer per element) and vertical
// layout (bit i of element j at data row base_row + i, column j; LSB lowest).

#include <cstdint>
#include <vector>

#include "pud/kernels.hpp"
#include "pud/subarray.hpp"

namespace pud {

inline constexpr unsigned kMaxValueWidth = 64;

struct HorizontalBlock {
  std::vector<std::uint64_t> values;
  unsigned width = 0;
  friend bool operator==(const HorizontalBlock&, const HorizontalBlock&) = default;
};

struct VerticalBlock {
  std::uint32_t base_row = 0;
  unsigned width = 0;
  std::uint32_t column_count = 0;
};

/// Writes the block into columns [0, values.size()) of data rows
/// [base_row, base_row + width). Other cells are left untouched.
/// Throws CapacityError if the block does not fit and ValidationError if a
/// value needs more than `width` bits or width is outside 1..64.
VerticalBlock to_vertical(const HorizontalBlock& block, Subarray& state, std::uint32_t base_row,
                          ExecPolicy policy = ExecPolicy::Parallel);

/// Reads `count` values of `width` bits starting at data row base_row.
HorizontalBlock to_horizontal(const Subarray& state, std::uint32_t base_row, unsigned width, std::uint32_t count,
                              ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace pud
