#pragma once

// Gate-level (AND/OR/NOT/XOR) and majority-level intermediate representations,
// their evaluators, exhaustive truth tables and equivalence checking.

#include <array>
#include <compare>
#include <span>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pud/kernels.hpp"

namespace pud {

enum class RefKind : std::uint8_t { Constant, Input, Node };

/// Reference to a constant (index 0 or 1), a primary input, or an earlier gate/node.
struct Ref {
  RefKind kind = RefKind::Constant;
  std::uint32_t index = 0;

  static constexpr Ref constant(bool value) { return {RefKind::Constant, value ? 1u : 0u}; }
  static constexpr Ref input(std::uint32_t i) { return {RefKind::Input, i}; }
  static constexpr Ref node(std::uint32_t i) { return {RefKind::Node, i}; }

  constexpr bool is_constant() const { return kind == RefKind::Constant; }
  constexpr bool is_input() const { return kind == RefKind::Input; }
  constexpr bool is_node() const { return kind == RefKind::Node; }

  friend constexpr auto operator<=>(const Ref&, const Ref&) = default;
};

/// A possibly complemented reference. Complements live on edges, never as nodes.
struct Edge {
  Ref ref;
  bool complemented = false;

  constexpr Edge operator!() const { return {ref, !complemented}; }
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

// ---------------------------------------------------------------------------
// Netlist

enum class GateKind : std::uint8_t { And, Or, Not, Xor };

std::string_view to_string(GateKind kind);

struct Gate {
  GateKind kind = GateKind::And;
  std::array<Ref, 2> operands{};  // NOT reads operands[0] only

  unsigned arity() const { return kind == GateKind::Not ? 1 : 2; }
  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Topologically ordered AND/OR/NOT/XOR DAG. Immutable once constructed.
class Netlist {
 public:
  Netlist() = default;
  /// Throws ValidationError if a ref is dangling or points forward.
  Netlist(std::vector<std::string> input_names, std::vector<Gate> gates, std::vector<Ref> outputs);

  std::size_t input_count() const { return input_names_.size(); }
  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Ref>& outputs() const { return outputs_; }

  friend bool operator==(const Netlist&, const Netlist&) = default;

 private:
  std::vector<std::string> input_names_;
  std::vector<Gate> gates_;
  std::vector<Ref> outputs_;
};

/// Incremental netlist construction. Gates are emitted literally; no folding or sharing.
class NetlistBuilder {
 public:
  Ref input(std::string name = {});
  /// `width` inputs named prefix0..prefix{width-1}, LSB first.
  std::vector<Ref> inputs(std::string_view prefix, unsigned width);

  Ref gate(GateKind kind, Ref a, Ref b = Ref::constant(false));
  Ref and_(Ref a, Ref b) { return gate(GateKind::And, a, b); }
  Ref or_(Ref a, Ref b) { return gate(GateKind::Or, a, b); }
  Ref xor_(Ref a, Ref b) { return gate(GateKind::Xor, a, b); }
  Ref not_(Ref a) { return gate(GateKind::Not, a); }

  std::size_t gate_count() const { return gates_.size(); }

  Netlist build(std::vector<Ref> outputs) const;

 private:
  std::vector<std::string> names_;
  std::vector<Gate> gates_;
};

/// Netlist text format: `inputs <n>`, then `g<id> = <KIND> <op> [<op>]`, then
/// `outputs <op> ...`. Operands are `g<id>`, `in<i>`, `0`, `1`. `#` starts a comment.
Netlist parse_netlist(std::string_view text);
std::string to_text(const Netlist& netlist);

// ---------------------------------------------------------------------------
// Majority graph

struct MajNode {
  std::array<Edge, 3> operands{};
  friend bool operator==(const MajNode&, const MajNode&) = default;
};

/// Topologically ordered DAG of 3-input majority nodes with complementable edges.
class MajGraph {
 public:
  MajGraph() = default;
  /// Throws ValidationError if a ref is dangling or points forward.
  MajGraph(std::vector<std::string> input_names, std::vector<MajNode> nodes, std::vector<Edge> outputs);

  std::size_t input_count() const { return input_names_.size(); }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<MajNode>& nodes() const { return nodes_; }
  const std::vector<Edge>& outputs() const { return outputs_; }

  /// Longest input-to-output path counted in majority nodes.
  unsigned depth() const;

  friend bool operator==(const MajGraph&, const MajGraph&) = default;

 private:
  std::vector<std::string> input_names_;
  std::vector<MajNode> nodes_;
  std::vector<Edge> outputs_;
};

// ---------------------------------------------------------------------------
// Evaluation

/// Scalar evaluation. Throws ArityError if assignment.size() != input_count().
std::vector<bool> evaluate(const Netlist& netlist, const std::vector<bool>& assignment);
std::vector<bool> evaluate(const MajGraph& graph, const std::vector<bool>& assignment);

inline constexpr unsigned kMaxTruthTableInputs = 16;

/// Exhaustive input/output table. Row r assigns input i the value of bit i of r.
class TruthTable {
 public:
  TruthTable() = default;
  TruthTable(unsigned input_count, unsigned output_count);

  unsigned input_count() const { return input_count_; }
  unsigned output_count() const { return output_count_; }
  std::uint64_t row_count() const { return std::uint64_t{1} << input_count_; }

  bool get(std::uint64_t row, unsigned output) const;
  void set(std::uint64_t row, unsigned output, bool value);
  std::vector<bool> row(std::uint64_t row) const;
  std::uint64_t count_ones(unsigned output) const;

  /// Packed bits of one output column, row-major, 64 rows per word.
  std::span<const std::uint64_t> column(unsigned output) const;
  std::span<std::uint64_t> column(unsigned output);

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  unsigned input_count_ = 0;
  unsigned output_count_ = 0;
  std::size_t words_per_output_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Serial builds the table row by row through evaluate(); Parallel simulates
/// 64 rows per word with OpenMP over word blocks. Throws SizeError above 16 inputs.
TruthTable truth_table(const Netlist& netlist, ExecPolicy policy = ExecPolicy::Parallel);
TruthTable truth_table(const MajGraph& graph, ExecPolicy policy = ExecPolicy::Parallel);

/// Exhaustive equivalence. Throws ArityError on input/output count mismatch.
template <typename A, typename B>
bool equivalent(const A& x, const B& y);

bool equivalent_tables(const TruthTable& x, const TruthTable& y);

template <typename A, typename B>
bool equivalent(const A& x, const B& y) {
  return equivalent_tables(truth_table(x), truth_table(y));
}

}  // namespace pud
