#include "pud/kernels.hpp"

namespace pud::kernels::parallel {

void copy(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  const auto n = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static) if (src.size() >= kParallelMinWords)
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = src[i];
}

void copy_not(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t tail_mask) {
  const auto n = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static) if (src.size() >= kParallelMinWords)
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = ~src[i];
  if (!dst.empty()) dst.back() &= tail_mask;
}

void maj3(std::span<std::uint64_t> a, std::span<std::uint64_t> b, std::span<std::uint64_t> c) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static) if (a.size() >= kParallelMinWords)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::uint64_t m = (a[i] & b[i]) | (a[i] & c[i]) | (b[i] & c[i]);
    a[i] = m;
    b[i] = m;
    c[i] = m;
  }
}

}  // namespace pud::kernels::parallel
