#pragma once

// Row allocation and activation scheduling: turns a majority graph into a
// μProgram of AAP (row copy) and TRA (triple-row majority) commands.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pud/logic.hpp"

namespace pud {

/// Subarray geometry. Data rows occupy physical rows [0, data_rows); the eight
/// reserved rows T0..T3, DCC0, DCC1, C0, C1 start at reserved_base.
struct SubarrayConfig {
  std::uint32_t total_rows = 512;
  std::uint32_t columns = 65536;
  std::uint32_t data_rows = 504;
  std::uint32_t reserved_base = 504;

  static constexpr std::uint32_t kComputeRows = 4;
  static constexpr std::uint32_t kDccRows = 2;
  static constexpr std::uint32_t kReservedRows = 8;

  /// Throws ValidationError when groups overlap or fall outside the subarray.
  void validate() const;

  /// A config with `columns` columns and the default row layout.
  static SubarrayConfig with_columns(std::uint32_t columns);

  friend bool operator==(const SubarrayConfig&, const SubarrayConfig&) = default;
};

enum class RowKind : std::uint8_t { Data, Compute, Dcc, DccBar, Constant };

/// Logical row name as it appears in μPrograms.
struct Row {
  RowKind kind = RowKind::Data;
  std::uint32_t index = 0;

  static constexpr Row data(std::uint32_t i) { return {RowKind::Data, i}; }
  static constexpr Row compute(std::uint32_t i) { return {RowKind::Compute, i}; }
  static constexpr Row dcc(std::uint32_t i) { return {RowKind::Dcc, i}; }
  static constexpr Row dcc_bar(std::uint32_t i) { return {RowKind::DccBar, i}; }
  static constexpr Row constant(bool one) { return {RowKind::Constant, one ? 1u : 0u}; }

  /// T and DCC rows: the only legal TRA operands.
  constexpr bool in_compute_group() const { return kind == RowKind::Compute || kind == RowKind::Dcc; }

  std::string token() const;
  friend constexpr auto operator<=>(const Row&, const Row&) = default;
};

/// Parses `D<i>`, `T0..T3`, `DCC0`, `DCC1`, `~DCC0`, `~DCC1`, `C0`, `C1`.
std::optional<Row> parse_row(std::string_view token);

enum class Opcode : std::uint8_t { Aap, Tra };

struct Command {
  Opcode op = Opcode::Aap;
  std::array<Row, 3> rows{};  // AAP: rows[0] = source, rows[1] = destination

  static Command aap(Row src, Row dst) { return {Opcode::Aap, {src, dst, Row{}}}; }
  static Command tra(Row a, Row b, Row c) { return {Opcode::Tra, {a, b, c}}; }

  friend bool operator==(const Command& x, const Command& y) {
    return x.op == y.op && x.rows[0] == y.rows[0] && x.rows[1] == y.rows[1] &&
           (x.op == Opcode::Aap || x.rows[2] == y.rows[2]);
  }
};

struct ProgramHeader {
  std::string op_name;
  unsigned width = 0;
  unsigned data_rows = 0;
  friend bool operator==(const ProgramHeader&, const ProgramHeader&) = default;
};

struct MicroProgram {
  ProgramHeader header;
  std::vector<Command> commands;
  /// Source line of each command when parsed from text; empty for generated programs.
  std::vector<std::size_t> source_lines;

  /// Line number of command i in the canonical text form (or its parsed source).
  std::size_t line_of(std::size_t i) const { return source_lines.empty() ? i + 3 : source_lines[i]; }
};

/// `.up` text form. to_text emits the canonical form that parse_program round-trips.
MicroProgram parse_program(std::string_view text);
std::string to_text(const MicroProgram& program);

struct ActivationCount {
  std::size_t aap = 0;
  std::size_t tra = 0;
  std::size_t total = 0;  // 2 per AAP, 3 per TRA
  friend bool operator==(const ActivationCount&, const ActivationCount&) = default;
};

ActivationCount activation_count(const MicroProgram& program);

/// Data-row placement of graph inputs and outputs in vertical layout: inputs
/// first, in graph order, then outputs; spill scratch follows.
struct RowMap {
  std::vector<std::uint32_t> input_rows;
  std::vector<std::uint32_t> output_rows;
  std::uint32_t scratch_base = 0;
  std::uint32_t scratch_limit = 0;
};

/// Throws CapacityError naming the shortfall when inputs + outputs exceed the data rows.
RowMap allocate_rows(const MajGraph& graph, const SubarrayConfig& cfg);

/// Rows holding a node's value right after its TRA.
struct NodePlacement {
  std::uint32_t node = 0;
  std::array<Row, 3> rows{};
  std::size_t command = 0;  // index of the TRA
};

struct Schedule {
  MicroProgram program;
  std::vector<NodePlacement> placements;
  std::size_t estimated_activations = 0;  // estimate_cost_static of the same graph
  std::size_t spill_activations = 0;      // activations beyond the estimate
  std::uint32_t scratch_rows = 0;
};

/// Emits the μProgram. Values that do not fit in the six compute/DCC rows are
/// spilled to data scratch rows; running out of scratch throws CapacityError.
Schedule schedule(const MajGraph& graph, const RowMap& rowmap, const SubarrayConfig& cfg,
                  std::string op_name = "custom", unsigned width = 1);

/// Activations the scheduler needs given unlimited compute and DCC rows.
/// A finite schedule never needs fewer.
std::size_t estimate_cost_static(const MajGraph& graph);

/// Symbolically executes `program` and checks every output row ends up holding
/// exactly the graph's output function. Throws ValidationError naming the
/// line of the first illegal command or read of an unwritten row, or the
/// first output row that ends up wrong.
void audit_program(const MajGraph& graph, const RowMap& rowmap, const MicroProgram& program);

}  // namespace pud
