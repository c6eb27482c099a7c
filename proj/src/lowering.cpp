#include "pud/synthesis.hpp"

namespace pud {

MajGraph lower_to_maj(const Netlist& netlist) {
  std::vector<MajNode> nodes;
  nodes.reserve(netlist.gates().size());
  std::vector<Edge> gate_edge(netlist.gates().size());
  const Edge zero{Ref::constant(false), false};
  const Edge one{Ref::constant(true), false};

  auto edge_of = [&](Ref r) -> Edge { return r.is_node() ? gate_edge[r.index] : Edge{r, false}; };
  auto emit = [&](Edge a, Edge b, Edge c) -> Edge {
    nodes.push_back({{a, b, c}});
    return {Ref::node(static_cast<std::uint32_t>(nodes.size() - 1)), false};
  };

  for (std::size_t g = 0; g < netlist.gates().size(); ++g) {
    const Gate& gate = netlist.gates()[g];
    const Edge a = edge_of(gate.operands[0]);
    switch (gate.kind) {
      case GateKind::Not: gate_edge[g] = !a; break;
      case GateKind::And: gate_edge[g] = emit(a, edge_of(gate.operands[1]), zero); break;
      case GateKind::Or: gate_edge[g] = emit(a, edge_of(gate.operands[1]), one); break;
      case GateKind::Xor: {
        const Edge b = edge_of(gate.operands[1]);
        const Edge either = emit(a, b, one);
        const Edge both = emit(a, b, zero);
        gate_edge[g] = emit(either, !both, zero);
        break;
      }
    }
  }
  std::vector<Edge> outputs;
  outputs.reserve(netlist.outputs().size());
  for (Ref r : netlist.outputs()) outputs.push_back(edge_of(r));
  return MajGraph(netlist.input_names(), std::move(nodes), std::move(outputs));
}

}  // namespace pud
