#pragma once

// Bit-accurate functional model of one DRAM subarray and the control unit
// that executes μPrograms on it. Each column is an independent SIMD lane.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pud/codegen.hpp"
#include "pud/kernels.hpp"

namespace pud {

struct ExecutionReport {
  std::size_t aap = 0;
  std::size_t tra = 0;
  std::size_t activations = 0;  // 2 per AAP, 3 per TRA
  friend bool operator==(const ExecutionReport&, const ExecutionReport&) = default;
};

class Subarray {
 public:
  /// Zero-initialized data, compute and DCC rows; C1 all ones. Throws ValidationError on a bad config.
  explicit Subarray(const SubarrayConfig& cfg, ExecPolicy policy = ExecPolicy::Parallel);

  const SubarrayConfig& config() const { return cfg_; }
  std::uint32_t columns() const { return cfg_.columns; }
  std::size_t words_per_row() const { return words_; }

  /// Physical row index. Throws ValidationError for rows outside the config;
  /// ~DCC aliases resolve to their DCC row.
  std::uint32_t physical(Row r) const;

  std::vector<bool> read_row(Row r) const;
  /// Throws RowSafetyError for constant rows and ~DCC aliases, SizeError on a length mismatch.
  void write_row(Row r, const std::vector<bool>& bits);

  bool get(Row r, std::uint32_t column) const;

  /// Packed storage of a row, 64 columns per word, column c at bit c % 64 of word c / 64.
  std::span<const std::uint64_t> words(Row r) const;
  /// Mutable access for host-side loaders. Constant rows are refused.
  std::span<std::uint64_t> words(Row r);

  void aap(Row src, Row dst);
  void tra(Row a, Row b, Row c);

  /// Runs every command in order. A failing command throws ExecutionError
  /// carrying its source line; commands before it stay applied.
  ExecutionReport run(const MicroProgram& program);

  /// Commands executed since construction.
  const ExecutionReport& log() const { return log_; }

  /// Rows [first, first + count) as lines of '0'/'1', one line per row.
  std::string dump(std::uint32_t first, std::uint32_t count) const;

  /// True while C0 is all zeros and C1 all ones.
  bool constants_intact() const;

 private:
  std::span<std::uint64_t> raw(std::uint32_t phys) { return {bits_.data() + phys * words_, words_}; }
  std::span<const std::uint64_t> raw(std::uint32_t phys) const { return {bits_.data() + phys * words_, words_}; }

  SubarrayConfig cfg_;
  ExecPolicy policy_;
  std::size_t words_ = 0;
  std::uint64_t tail_mask_ = ~std::uint64_t{0};
  std::vector<std::uint64_t> bits_;
  ExecutionReport log_;
};

}  // namespace pud
