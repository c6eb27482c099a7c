#include "pud/kernels.hpp"

#include <algorithm>

namespace pud::kernels::serial {

void copy(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  std::copy(src.begin(), src.end(), dst.begin());
}

void copy_not(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t tail_mask) {
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = ~src[i];
  if (!dst.empty()) dst.back() &= tail_mask;
}

void maj3(std::span<std::uint64_t> a, std::span<std::uint64_t> b, std::span<std::uint64_t> c) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::uint64_t m = (a[i] & b[i]) | (a[i] & c[i]) | (b[i] & c[i]);
    a[i] = m;
    b[i] = m;
    c[i] = m;
  }
}

}  // namespace pud::kernels::serial
