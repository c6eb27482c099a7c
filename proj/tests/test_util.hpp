#pragma once

#include <random>
#include <vector>

#include "pud/logic.hpp"

namespace pud::testing {

/// Random majority graph with `inputs` inputs, `nodes` nodes and `outputs`
/// outputs. Operands are drawn uniformly from constants, inputs and earlier nodes.
inline MajGraph random_graph(std::mt19937_64& rng, unsigned inputs, unsigned nodes, unsigned outputs) {
  std::vector<std::string> names;
  for (unsigned i = 0; i < inputs; ++i) names.push_back("x" + std::to_string(i));
  auto pick = [&](std::size_t available) {
    std::uniform_int_distribution<std::size_t> d(0, 1 + inputs + available);
    const std::size_t r = d(rng);
    Edge e;
    if (r < 2) e.ref = Ref::constant(r == 1);
    else if (r < 2 + inputs) e.ref = Ref::input(static_cast<std::uint32_t>(r - 2));
    else e.ref = Ref::node(static_cast<std::uint32_t>(r - 2 - inputs));
    e.complemented = !e.ref.is_constant() && (rng() & 1u);
    return e;
  };
  std::vector<MajNode> ns;
  for (unsigned k = 0; k < nodes; ++k) ns.push_back({{pick(k), pick(k), pick(k)}});
  std::vector<Edge> outs;
  for (unsigned o = 0; o < outputs; ++o) outs.push_back(pick(nodes));
  return MajGraph(names, ns, outs);
}

inline std::vector<bool> bits_of(std::uint64_t v, unsigned n) {
  std::vector<bool> b(n);
  for (unsigned i = 0; i < n; ++i) b[i] = (v >> i) & 1u;
  return b;
}

inline std::uint64_t value_of(const std::vector<bool>& b, std::size_t from, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (b[from + i]) v |= std::uint64_t{1} << i;
  return v;
}

/// Gate-level ripple-carry adder: inputs a0..a{w-1}, b0..b{w-1}; outputs sum bits then carry.
inline Netlist ripple_adder(unsigned w) {
  NetlistBuilder nb;
  auto a = nb.inputs("a", w);
  auto b = nb.inputs("b", w);
  std::vector<Ref> outs;
  Ref carry = Ref::constant(false);
  for (unsigned i = 0; i < w; ++i) {
    const Ref t = nb.xor_(a[i], b[i]);
    outs.push_back(nb.xor_(t, carry));
    carry = nb.or_(nb.and_(a[i], b[i]), nb.and_(t, carry));
  }
  outs.push_back(carry);
  return nb.build(outs);
}

}  // namespace pud::testing

namespace pud::testing {

/// Random AND/OR/NOT/XOR netlist; every gate reads earlier gates, inputs or constants.
inline Netlist random_netlist(std::mt19937_64& rng, unsigned inputs, unsigned gates, unsigned outputs) {
  NetlistBuilder nb;
  std::vector<Ref> pool = nb.inputs("x", inputs);
  auto any = [&]() {
    if (rng() % 16 == 0) return Ref::constant(rng() & 1u);
    return pool[rng() % pool.size()];
  };
  for (unsigned g = 0; g < gates; ++g) {
    const auto kind = static_cast<GateKind>(rng() % 4);
    pool.push_back(nb.gate(kind, any(), any()));
  }
  std::vector<Ref> outs;
  for (unsigned o = 0; o < outputs; ++o) outs.push_back(pool[pool.size() - 1 - (rng() % std::min<std::size_t>(pool.size(), 8))]);
  return nb.build(outs);
}

}  // namespace pud::testing
