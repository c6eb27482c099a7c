#include "pud/transpose.hpp"

#include "pud/error.hpp"

namespace pud {
namespace {

void check_region(const Subarray& state, std::uint32_t base_row, unsigned width, std::size_t count) {
  if (width < 1 || width > kMaxValueWidth)
    throw ValidationError("value width " + std::to_string(width) + " outside 1..64");
  const auto& cfg = state.config();
  if (count > cfg.columns)
    throw CapacityError(std::to_string(count) + " values exceed " + std::to_string(cfg.columns) + " columns");
  if (std::uint64_t{base_row} + width > cfg.data_rows)
    throw CapacityError("rows " + std::to_string(base_row) + ".." + std::to_string(std::uint64_t{base_row} + width - 1) +
                        " exceed the " + std::to_string(cfg.data_rows) + " data rows");
}

// Column bits of one output word: bit k is bit `bit` of values[64 * word + k].
std::uint64_t gather(const std::vector<std::uint64_t>& values, std::size_t word, unsigned bit) {
  std::uint64_t w = 0;
  const std::size_t first = word * 64;
  const std::size_t n = std::min<std::size_t>(64, values.size() - first);
  for (std::size_t k = 0; k < n; ++k) w |= ((values[first + k] >> bit) & 1u) << k;
  return w;
}

std::uint64_t lane_mask(std::size_t count, std::size_t word) {
  const std::size_t first = word * 64;
  const std::size_t n = std::min<std::size_t>(64, count - first);
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace

VerticalBlock to_vertical(const HorizontalBlock& block, Subarray& state, std::uint32_t base_row, ExecPolicy policy) {
  check_region(state, base_row, block.width, block.values.size());
  const std::uint64_t limit = block.width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << block.width) - 1;
  for (std::size_t j = 0; j < block.values.size(); ++j)
    if (block.values[j] > limit)
      throw ValidationError("value " + std::to_string(block.values[j]) + " does not fit in " +
                            std::to_string(block.width) + " bits");

  const std::size_t count = block.values.size();
  if (policy == ExecPolicy::Serial) {
    for (unsigned i = 0; i < block.width; ++i) {
      auto row = state.words(Row::data(base_row + i));
      for (std::size_t j = 0; j < count; ++j) {
        const std::uint64_t bit = std::uint64_t{1} << (j % 64);
        if ((block.values[j] >> i) & 1u) row[j / 64] |= bit;
        else row[j / 64] &= ~bit;
      }
    }
  } else {
    const auto words = static_cast<std::ptrdiff_t>((count + 63) / 64);
    const auto width = static_cast<std::ptrdiff_t>(block.width);
    std::vector<std::span<std::uint64_t>> rows;
    for (unsigned i = 0; i < block.width; ++i) rows.push_back(state.words(Row::data(base_row + i)));
#pragma omp parallel for collapse(2) schedule(static) if (words * width >= 64)
    for (std::ptrdiff_t i = 0; i < width; ++i)
      for (std::ptrdiff_t w = 0; w < words; ++w) {
        const std::uint64_t mask = lane_mask(count, static_cast<std::size_t>(w));
        auto& cell = rows[i][w];
        cell = (cell & ~mask) | gather(block.values, static_cast<std::size_t>(w), static_cast<unsigned>(i));
      }
  }
  return {base_row, block.width, static_cast<std::uint32_t>(count)};
}

HorizontalBlock to_horizontal(const Subarray& state, std::uint32_t base_row, unsigned width, std::uint32_t count,
                              ExecPolicy policy) {
  check_region(state, base_row, width, count);
  HorizontalBlock out{std::vector<std::uint64_t>(count, 0), width};
  std::vector<std::span<const std::uint64_t>> rows;
  for (unsigned i = 0; i < width; ++i) rows.push_back(state.words(Row::data(base_row + i)));
  if (policy == ExecPolicy::Serial) {
    for (std::uint32_t j = 0; j < count; ++j)
      for (unsigned i = 0; i < width; ++i)
        out.values[j] |= ((rows[i][j / 64] >> (j % 64)) & 1u) << i;
  } else {
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) if (n >= 4096)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      std::uint64_t v = 0;
      for (unsigned i = 0; i < width; ++i) v |= ((rows[i][j / 64] >> (j % 64)) & 1u) << i;
      out.values[j] = v;
    }
  }
  return out;
}

}  // namespace pud
