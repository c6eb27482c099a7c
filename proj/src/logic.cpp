#include "pud/logic.hpp"

#include <algorithm>
#include <bit>

#include "pud/error.hpp"

namespace pud {
namespace {

void check_ref(Ref r, std::size_t inputs, std::size_t limit, const char* where) {
  switch (r.kind) {
    case RefKind::Constant:
      if (r.index > 1) throw ValidationError(std::string(where) + ": constant must be 0 or 1");
      return;
    case RefKind::Input:
      if (r.index >= inputs) throw ValidationError(std::string(where) + ": input index out of range");
      return;
    case RefKind::Node:
      if (r.index >= limit) throw ValidationError(std::string(where) + ": reference to a later or missing node");
      return;
  }
}

// Pattern word for input i at word index w of an exhaustive enumeration.
std::uint64_t input_pattern(unsigned i, std::uint64_t w) {
  static constexpr std::uint64_t kLow[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull,
                                            0xF0F0F0F0F0F0F0F0ull, 0xFF00FF00FF00FF00ull,
                                            0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  if (i < 6) return kLow[i];
  return ((w >> (i - 6)) & 1u) ? ~std::uint64_t{0} : 0;
}

struct WordSim {
  // values[node * block + k]
  std::vector<std::uint64_t> values;
  std::size_t block = 0;
};

std::uint64_t ref_word(Ref r, const WordSim& sim, std::uint64_t w0, std::size_t k) {
  switch (r.kind) {
    case RefKind::Constant: return r.index ? ~std::uint64_t{0} : 0;
    case RefKind::Input: return input_pattern(r.index, w0 + k);
    case RefKind::Node: return sim.values[r.index * sim.block + k];
  }
  return 0;
}

void simulate_block(const Netlist& n, WordSim& sim, std::uint64_t w0) {
  const std::size_t b = sim.block;
  for (std::size_t g = 0; g < n.gates().size(); ++g) {
    const Gate& gate = n.gates()[g];
    for (std::size_t k = 0; k < b; ++k) {
      const std::uint64_t x = ref_word(gate.operands[0], sim, w0, k);
      std::uint64_t v = 0;
      switch (gate.kind) {
        case GateKind::Not: v = ~x; break;
        case GateKind::And: v = x & ref_word(gate.operands[1], sim, w0, k); break;
        case GateKind::Or: v = x | ref_word(gate.operands[1], sim, w0, k); break;
        case GateKind::Xor: v = x ^ ref_word(gate.operands[1], sim, w0, k); break;
      }
      sim.values[g * b + k] = v;
    }
  }
}

std::uint64_t edge_word(const Edge& e, const WordSim& sim, std::uint64_t w0, std::size_t k) {
  const std::uint64_t v = ref_word(e.ref, sim, w0, k);
  return e.complemented ? ~v : v;
}

void simulate_block(const MajGraph& m, WordSim& sim, std::uint64_t w0) {
  const std::size_t b = sim.block;
  for (std::size_t i = 0; i < m.nodes().size(); ++i) {
    const auto& ops = m.nodes()[i].operands;
    for (std::size_t k = 0; k < b; ++k) {
      const std::uint64_t x = edge_word(ops[0], sim, w0, k);
      const std::uint64_t y = edge_word(ops[1], sim, w0, k);
      const std::uint64_t z = edge_word(ops[2], sim, w0, k);
      sim.values[i * b + k] = (x & y) | (x & z) | (y & z);
    }
  }
}

std::uint64_t output_word(const Netlist& n, std::size_t o, const WordSim& sim, std::uint64_t w0, std::size_t k) {
  return ref_word(n.outputs()[o], sim, w0, k);
}
std::uint64_t output_word(const MajGraph& m, std::size_t o, const WordSim& sim, std::uint64_t w0, std::size_t k) {
  return edge_word(m.outputs()[o], sim, w0, k);
}
std::size_t element_count(const Netlist& n) { return n.gates().size(); }
std::size_t element_count(const MajGraph& m) { return m.nodes().size(); }

template <typename G>
TruthTable table_impl(const G& g, ExecPolicy policy) {
  if (g.input_count() > kMaxTruthTableInputs)
    throw SizeError("truth table refused: " + std::to_string(g.input_count()) + " inputs exceeds limit of " +
                    std::to_string(kMaxTruthTableInputs));
  const auto inputs = static_cast<unsigned>(g.input_count());
  const auto outputs = static_cast<unsigned>(g.outputs().size());
  TruthTable table(inputs, outputs);

  if (policy == ExecPolicy::Serial) {
    std::vector<bool> assignment(inputs);
    for (std::uint64_t r = 0; r < table.row_count(); ++r) {
      for (unsigned i = 0; i < inputs; ++i) assignment[i] = (r >> i) & 1u;
      const auto out = evaluate(g, assignment);
      for (unsigned o = 0; o < outputs; ++o) table.set(r, o, out[o]);
    }
    return table;
  }

  const std::uint64_t words = std::max<std::uint64_t>(1, table.row_count() / 64);
  const std::uint64_t tail = table.row_count() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << table.row_count()) - 1;
  constexpr std::size_t kBlock = 16;
  const auto blocks = static_cast<std::ptrdiff_t>((words + kBlock - 1) / kBlock);
  const std::size_t elems = element_count(g);

#pragma omp parallel if (blocks > 1)
  {
    WordSim sim;
    sim.block = kBlock;
    sim.values.resize(elems * kBlock);
#pragma omp for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
      const std::uint64_t w0 = static_cast<std::uint64_t>(blk) * kBlock;
      const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, words - w0));
      simulate_block(g, sim, w0);
      for (unsigned o = 0; o < outputs; ++o) {
        auto col = table.column(o);
        for (std::size_t k = 0; k < count; ++k) col[w0 + k] = output_word(g, o, sim, w0, k) & tail;
      }
    }
  }
  return table;
}

}  // namespace

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Not: return "NOT";
    case GateKind::Xor: return "XOR";
  }
  return "?";
}

Netlist::Netlist(std::vector<std::string> input_names, std::vector<Gate> gates, std::vector<Ref> outputs)
    : input_names_(std::move(input_names)), gates_(std::move(gates)), outputs_(std::move(outputs)) {
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    for (unsigned k = 0; k < gates_[g].arity(); ++k) check_ref(gates_[g].operands[k], input_count(), g, "gate operand");
    if (gates_[g].kind == GateKind::Not) gates_[g].operands[1] = Ref::constant(false);
  }
  for (const Ref& r : outputs_) check_ref(r, input_count(), gates_.size(), "output");
}

Ref NetlistBuilder::input(std::string name) {
  if (name.empty()) name = "in" + std::to_string(names_.size());
  names_.push_back(std::move(name));
  return Ref::input(static_cast<std::uint32_t>(names_.size() - 1));
}

std::vector<Ref> NetlistBuilder::inputs(std::string_view prefix, unsigned width) {
  std::vector<Ref> refs;
  refs.reserve(width);
  for (unsigned i = 0; i < width; ++i) refs.push_back(input(std::string(prefix) + std::to_string(i)));
  return refs;
}

Ref NetlistBuilder::gate(GateKind kind, Ref a, Ref b) {
  gates_.push_back({kind, {a, kind == GateKind::Not ? Ref::constant(false) : b}});
  return Ref::node(static_cast<std::uint32_t>(gates_.size() - 1));
}

Netlist NetlistBuilder::build(std::vector<Ref> outputs) const { return Netlist(names_, gates_, std::move(outputs)); }

MajGraph::MajGraph(std::vector<std::string> input_names, std::vector<MajNode> nodes, std::vector<Edge> outputs)
    : input_names_(std::move(input_names)), nodes_(std::move(nodes)), outputs_(std::move(outputs)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (const Edge& e : nodes_[i].operands) check_ref(e.ref, input_count(), i, "node operand");
  for (const Edge& e : outputs_) check_ref(e.ref, input_count(), nodes_.size(), "output");
}

unsigned MajGraph::depth() const {
  std::vector<unsigned> level(nodes_.size(), 0);
  unsigned deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    unsigned l = 0;
    for (const Edge& e : nodes_[i].operands)
      if (e.ref.is_node()) l = std::max(l, level[e.ref.index]);
    level[i] = l + 1;
  }
  for (const Edge& e : outputs_)
    if (e.ref.is_node()) deepest = std::max(deepest, level[e.ref.index]);
  return deepest;
}

std::vector<bool> evaluate(const Netlist& netlist, const std::vector<bool>& assignment) {
  if (assignment.size() != netlist.input_count())
    throw ArityError("netlist expects " + std::to_string(netlist.input_count()) + " inputs, got " +
                     std::to_string(assignment.size()));
  std::vector<bool> value(netlist.gates().size());
  auto read = [&](Ref r) -> bool {
    switch (r.kind) {
      case RefKind::Constant: return r.index != 0;
      case RefKind::Input: return assignment[r.index];
      case RefKind::Node: return value[r.index];
    }
    return false;
  };
  for (std::size_t g = 0; g < netlist.gates().size(); ++g) {
    const Gate& gate = netlist.gates()[g];
    const bool x = read(gate.operands[0]);
    switch (gate.kind) {
      case GateKind::Not: value[g] = !x; break;
      case GateKind::And: value[g] = x && read(gate.operands[1]); break;
      case GateKind::Or: value[g] = x || read(gate.operands[1]); break;
      case GateKind::Xor: value[g] = x != read(gate.operands[1]); break;
    }
  }
  std::vector<bool> out;
  out.reserve(netlist.outputs().size());
  for (Ref r : netlist.outputs()) out.push_back(read(r));
  return out;
}

std::vector<bool> evaluate(const MajGraph& graph, const std::vector<bool>& assignment) {
  if (assignment.size() != graph.input_count())
    throw ArityError("graph expects " + std::to_string(graph.input_count()) + " inputs, got " +
                     std::to_string(assignment.size()));
  std::vector<bool> value(graph.nodes().size());
  auto read = [&](const Edge& e) -> bool {
    bool v = false;
    switch (e.ref.kind) {
      case RefKind::Constant: v = e.ref.index != 0; break;
      case RefKind::Input: v = assignment[e.ref.index]; break;
      case RefKind::Node: v = value[e.ref.index]; break;
    }
    return v != e.complemented;
  };
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    const auto& ops = graph.nodes()[i].operands;
    const int ones = read(ops[0]) + read(ops[1]) + read(ops[2]);
    value[i] = ones >= 2;
  }
  std::vector<bool> out;
  out.reserve(graph.outputs().size());
  for (const Edge& e : graph.outputs()) out.push_back(read(e));
  return out;
}

TruthTable::TruthTable(unsigned input_count, unsigned output_count)
    : input_count_(input_count), output_count_(output_count) {
  if (input_count > kMaxTruthTableInputs)
    throw SizeError("truth table refused: " + std::to_string(input_count) + " inputs exceeds limit of " +
                    std::to_string(kMaxTruthTableInputs));
  words_per_output_ = std::max<std::size_t>(1, (std::size_t{1} << input_count) / 64);
  bits_.assign(words_per_output_ * output_count, 0);
}

bool TruthTable::get(std::uint64_t row, unsigned output) const {
  return (bits_[output * words_per_output_ + row / 64] >> (row % 64)) & 1u;
}

void TruthTable::set(std::uint64_t row, unsigned output, bool value) {
  auto& w = bits_[output * words_per_output_ + row / 64];
  const std::uint64_t m = std::uint64_t{1} << (row % 64);
  w = value ? (w | m) : (w & ~m);
}

std::vector<bool> TruthTable::row(std::uint64_t r) const {
  std::vector<bool> out(output_count_);
  for (unsigned o = 0; o < output_count_; ++o) out[o] = get(r, o);
  return out;
}

std::uint64_t TruthTable::count_ones(unsigned output) const {
  std::uint64_t n = 0;
  for (std::uint64_t w : column(output)) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

std::span<const std::uint64_t> TruthTable::column(unsigned output) const {
  return {bits_.data() + output * words_per_output_, words_per_output_};
}

std::span<std::uint64_t> TruthTable::column(unsigned output) {
  return {bits_.data() + output * words_per_output_, words_per_output_};
}

TruthTable truth_table(const Netlist& netlist, ExecPolicy policy) { return table_impl(netlist, policy); }
TruthTable truth_table(const MajGraph& graph, ExecPolicy policy) { return table_impl(graph, policy); }

bool equivalent_tables(const TruthTable& x, const TruthTable& y) {
  if (x.input_count() != y.input_count())
    throw ArityError("equivalence needs equal input counts (" + std::to_string(x.input_count()) + " vs " +
                     std::to_string(y.input_count()) + ")");
  if (x.output_count() != y.output_count())
    throw ArityError("equivalence needs equal output counts (" + std::to_string(x.output_count()) + " vs " +
                     std::to_string(y.output_count()) + ")");
  return x == y;
}

}  // namespace pud
