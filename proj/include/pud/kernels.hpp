#pragma once

// Word-level row kernels shared by the subarray simulator and the transposition unit.
// Every kernel has a serial reference and an OpenMP variant; both must agree bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>

namespace pud {

enum class ExecPolicy { Serial, Parallel };

namespace kernels {

/// Rows shorter than this many words run serially even under ExecPolicy::Parallel.
inline constexpr std::size_t kParallelMinWords = 256;

namespace serial {
void copy(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
void copy_not(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t tail_mask);
void maj3(std::span<std::uint64_t> a, std::span<std::uint64_t> b, std::span<std::uint64_t> c);
}  // namespace serial

namespace parallel {
void copy(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
void copy_not(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t tail_mask);
void maj3(std::span<std::uint64_t> a, std::span<std::uint64_t> b, std::span<std::uint64_t> c);
}  // namespace parallel

/// dst := src.
inline void copy(ExecPolicy p, std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  p == ExecPolicy::Parallel ? parallel::copy(dst, src) : serial::copy(dst, src);
}

/// dst := ~src, with the final word masked to the valid columns.
inline void copy_not(ExecPolicy p, std::span<std::uint64_t> dst, std::span<const std::uint64_t> src,
                     std::uint64_t tail_mask) {
  p == ExecPolicy::Parallel ? parallel::copy_not(dst, src, tail_mask)
                            : serial::copy_not(dst, src, tail_mask);
}

/// a, b, c := MAJ(a, b, c) per bit. All three spans are overwritten.
inline void maj3(ExecPolicy p, std::span<std::uint64_t> a, std::span<std::uint64_t> b,
                 std::span<std::uint64_t> c) {
  p == ExecPolicy::Parallel ? parallel::maj3(a, b, c) : serial::maj3(a, b, c);
}

}  // namespace kernels
}  // namespace pud
