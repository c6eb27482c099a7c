#pragma once

// The operation library: gate-level builders, host oracles and the
// compile/execute path for the sixteen supported bulk operations.
//
// All arithmetic is unsigned and modular in the operand width. Operands are
// laid out operand-major, LSB first, in both the netlist inputs and the data rows.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pud/codegen.hpp"
#include "pud/kernels.hpp"
#include "pud/logic.hpp"
#include "pud/synthesis.hpp"

namespace pud {

enum class OpKind : std::uint8_t {
  AndN,
  OrN,
  XorN,
  Eq,
  Neq,
  Gt,
  Ge,
  Max,
  Min,
  Add,
  Sub,
  Mul,
  Div,
  IfThenElse,
  Bitcount,
  Relu,
};

inline constexpr std::array<OpKind, 16> kAllOps = {
    OpKind::AndN, OpKind::OrN, OpKind::XorN, OpKind::Eq,  OpKind::Neq, OpKind::Gt,         OpKind::Ge,       OpKind::Max,
    OpKind::Min,  OpKind::Add, OpKind::Sub,  OpKind::Mul, OpKind::Div, OpKind::IfThenElse, OpKind::Bitcount, OpKind::Relu,
};

inline constexpr unsigned kDefaultNInputs = 3;
inline constexpr unsigned kMaxOpWidth = 64;

std::string_view to_string(OpKind kind);
std::optional<OpKind> parse_op(std::string_view name);
bool is_n_input(OpKind kind);

/// Operand widths in order. add/sub produce (result, carry/borrow); relational
/// ops produce one bit; if_then_else reads (cond, a, b); bitcount produces
/// bit_width(width) bits.
struct OpSignature {
  std::vector<unsigned> inputs;
  std::vector<unsigned> outputs;

  unsigned input_bits() const;
  unsigned output_bits() const;
};

/// Throws ValidationError for width outside 1..64 or n_inputs < 2.
OpSignature signature(OpKind kind, unsigned width, unsigned n_inputs = kDefaultNInputs);

Netlist build_netlist(OpKind kind, unsigned width, unsigned n_inputs = kDefaultNInputs);

/// Reference semantics for one lane: one value per input operand, one per
/// output operand. Division by zero yields an all-ones quotient.
/// Throws ArityError if the operand count does not match the signature.
std::vector<std::uint64_t> oracle(OpKind kind, unsigned width, std::span<const std::uint64_t> operands);

struct CompiledOp {
  OpKind kind = OpKind::AndN;
  unsigned width = 0;
  unsigned n_inputs = kDefaultNInputs;
  unsigned effort = 0;
  OpSignature sig;
  MajGraph graph;
  RowMap rowmap;
  Schedule schedule;
  SynthesisReport report;
  /// Set when the optimized graph scheduled to more activations than the
  /// unoptimized one and the unoptimized program was kept instead.
  bool kept_unoptimized = false;
  /// Lanes checked against the oracle at compile time, and whether that covered every input.
  std::uint64_t verified_lanes = 0;
  bool verified_exhaustively = false;

  const MicroProgram& program() const { return schedule.program; }
};

/// build -> lower -> optimize -> allocate -> schedule -> audit -> simulate against
/// the oracle (exhaustive when the operands total at most 16 bits, 4096 random
/// lanes otherwise). Throws CapacityError from codegen and ValidationError if the
/// program disagrees with the oracle.
CompiledOp compile_op(OpKind kind, unsigned width, const SubarrayConfig& cfg, unsigned effort,
                      unsigned n_inputs = kDefaultNInputs);

/// Transposes operands in, runs the program, transposes results out.
/// inputs[k][lane]; returns outputs[k][lane]. Throws ArityError on a wrong
/// operand count, ValidationError on unequal lane counts or out-of-range
/// values, CapacityError when lanes exceed the columns.
std::vector<std::vector<std::uint64_t>> execute_op(const CompiledOp& op,
                                                   const std::vector<std::vector<std::uint64_t>>& inputs,
                                                   const SubarrayConfig& cfg, ExecPolicy policy = ExecPolicy::Parallel);

/// Same, for a program loaded from text: operand widths come from `sig` and
/// rows follow the allocate_rows layout.
std::vector<std::vector<std::uint64_t>> execute_program(const MicroProgram& program, const OpSignature& sig,
                                                        const std::vector<std::vector<std::uint64_t>>& inputs,
                                                        const SubarrayConfig& cfg,
                                                        ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace pud
