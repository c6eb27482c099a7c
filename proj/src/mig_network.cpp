#include "mig_network.hpp"

#include <algorithm>
#include <deque>

namespace pud::detail {
namespace {

Signal edge_signal(const Edge& e, const std::vector<Signal>& node_map) {
  Signal s = 0;
  switch (e.ref.kind) {
    case RefKind::Constant: s = make_signal(0, e.ref.index != 0); break;
    case RefKind::Input: s = make_signal(1 + e.ref.index, false); break;
    case RefKind::Node: s = node_map[e.ref.index]; break;
  }
  return e.complemented ? s ^ 1u : s;
}

}  // namespace

MigNetwork::MigNetwork(const MajGraph& graph)
    : inputs_(static_cast<std::uint32_t>(graph.input_count())), input_names_(graph.input_names()) {
  nodes_.resize(1 + inputs_);
  fanouts_.resize(1 + inputs_);
  std::vector<Signal> node_map(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto& ops = graph.nodes()[i].operands;
    node_map[i] = create_maj(edge_signal(ops[0], node_map), edge_signal(ops[1], node_map), edge_signal(ops[2], node_map));
  }
  for (const Edge& e : graph.outputs()) {
    const Signal s = edge_signal(e, node_map);
    outputs_.push_back(s);
    ++nodes_[node_of(s)].refs;
  }
}

std::array<Signal, 3> MigNetwork::key_of(std::array<Signal, 3> f) {
  std::sort(f.begin(), f.end());
  return f;
}

bool MigNetwork::simplify(Signal a, Signal b, Signal c, Signal& out) const {
  if (a == b || a == c) { out = a; return true; }
  if (b == c) { out = b; return true; }
  if (a == (b ^ 1u)) { out = c; return true; }
  if (a == (c ^ 1u)) { out = b; return true; }
  if (b == (c ^ 1u)) { out = a; return true; }
  return false;
}

Signal MigNetwork::create_maj(Signal a, Signal b, Signal c) {
  Signal simple = 0;
  if (simplify(a, b, c, simple)) return simple;
  const auto key = key_of({a, b, c});
  if (auto it = strash_.find(key); it != strash_.end()) return make_signal(it->second, false);
  if (auto it = strash_.find(key_of({a ^ 1u, b ^ 1u, c ^ 1u})); it != strash_.end()) return make_signal(it->second, true);

  const auto n = static_cast<std::uint32_t>(nodes_.size());
  Node node;
  node.fanin = {a, b, c};
  for (Signal s : node.fanin) {
    ++nodes_[node_of(s)].refs;
    node.level = std::max(node.level, nodes_[node_of(s)].level + 1);
  }
  nodes_.push_back(node);
  fanouts_.emplace_back();
  for (Signal s : node.fanin) fanouts_[node_of(s)].push_back(n);
  strash_.emplace(key, n);
  return make_signal(n, false);
}

Signal MigNetwork::resolve(Signal s) const {
  while (nodes_[node_of(s)].dead) {
    auto it = forward_.find(node_of(s));
    if (it == forward_.end()) break;
    s = it->second ^ (s & 1u);
  }
  return s;
}

void MigNetwork::strash_erase(std::uint32_t n) {
  auto it = strash_.find(key_of(nodes_[n].fanin));
  if (it != strash_.end() && it->second == n) strash_.erase(it);
}

void MigNetwork::take_out(std::uint32_t root) {
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    stack.pop_back();
    if (!is_gate(n) || nodes_[n].dead) continue;
    nodes_[n].dead = true;
    strash_erase(n);
    for (Signal f : nodes_[n].fanin) {
      const std::uint32_t m = node_of(f);
      if (--nodes_[m].refs == 0 && is_gate(m)) stack.push_back(m);
    }
  }
}

void MigNetwork::substitute(std::uint32_t old_node, Signal replacement) {
  std::deque<std::pair<std::uint32_t, Signal>> work{{old_node, replacement}};
  while (!work.empty()) {
    auto [o, r] = work.front();
    work.pop_front();
    if (nodes_[o].dead) continue;
    r = resolve(r);
    const std::uint32_t rn = node_of(r);
    if (rn == o) continue;
    forward_[o] = r;

    for (Signal& s : outputs_) {
      if (node_of(s) != o) continue;
      s = r ^ (s & 1u);
      --nodes_[o].refs;
      ++nodes_[rn].refs;
    }

    auto fos = std::move(fanouts_[o]);
    fanouts_[o].clear();
    std::sort(fos.begin(), fos.end());
    fos.erase(std::unique(fos.begin(), fos.end()), fos.end());
    for (std::uint32_t p : fos) {
      Node& node = nodes_[p];
      if (node.dead) continue;
      if (std::none_of(node.fanin.begin(), node.fanin.end(), [&](Signal f) { return node_of(f) == o; })) continue;
      strash_erase(p);
      for (Signal& f : node.fanin) {
        if (node_of(f) != o) continue;
        f = r ^ (f & 1u);
        --nodes_[o].refs;
        ++nodes_[rn].refs;
        fanouts_[rn].push_back(p);
      }
      node.level = 0;
      for (Signal f : node.fanin) node.level = std::max(node.level, nodes_[node_of(f)].level + 1);

      Signal simple = 0;
      if (simplify(node.fanin[0], node.fanin[1], node.fanin[2], simple)) {
        work.emplace_back(p, simple);
        continue;
      }
      const auto key = key_of(node.fanin);
      if (auto it = strash_.find(key); it != strash_.end() && it->second != p) {
        work.emplace_back(p, make_signal(it->second, false));
      } else if (auto jt = strash_.find(key_of({node.fanin[0] ^ 1u, node.fanin[1] ^ 1u, node.fanin[2] ^ 1u}));
                 jt != strash_.end() && jt->second != p) {
        work.emplace_back(p, make_signal(jt->second, true));
      } else {
        strash_[key] = p;
      }
    }
    if (nodes_[o].refs == 0) take_out(o);
  }
}

unsigned MigNetwork::deref_cone(std::uint32_t root, const std::vector<std::uint32_t>& leaves,
                                std::vector<std::uint32_t>& cone) {
  unsigned count = 1;
  cone.push_back(root);
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    stack.pop_back();
    for (Signal f : nodes_[n].fanin) {
      const std::uint32_t m = node_of(f);
      if (!is_gate(m) || std::find(leaves.begin(), leaves.end(), m) != leaves.end()) continue;
      if (--nodes_[m].refs == 0) {
        ++count;
        cone.push_back(m);
        stack.push_back(m);
      }
    }
  }
  return count;
}

void MigNetwork::ref_cone(std::uint32_t root, const std::vector<std::uint32_t>& leaves) {
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    stack.pop_back();
    for (Signal f : nodes_[n].fanin) {
      const std::uint32_t m = node_of(f);
      if (!is_gate(m) || std::find(leaves.begin(), leaves.end(), m) != leaves.end()) continue;
      if (nodes_[m].refs++ == 0) stack.push_back(m);
    }
  }
}

void MigNetwork::discard_unused_since(std::uint32_t first) {
  for (std::uint32_t n = size(); n-- > first;)
    if (!nodes_[n].dead && nodes_[n].refs == 0) take_out(n);
}

unsigned MigNetwork::complemented_fanout(std::uint32_t n) const {
  unsigned count = 0;
  for (Signal s : outputs_)
    if (node_of(s) == n && is_complemented(s)) ++count;
  auto fos = fanouts_[n];
  std::sort(fos.begin(), fos.end());
  fos.erase(std::unique(fos.begin(), fos.end()), fos.end());
  for (std::uint32_t p : fos) {
    if (nodes_[p].dead) continue;
    for (Signal f : nodes_[p].fanin)
      if (node_of(f) == n && is_complemented(f)) ++count;
  }
  return count;
}

MajGraph MigNetwork::to_graph() const {
  constexpr std::uint32_t kUnvisited = ~0u;
  std::vector<std::uint32_t> index(nodes_.size(), kUnvisited);
  std::vector<MajNode> out_nodes;

  auto to_edge = [&](Signal s) -> Edge {
    const std::uint32_t n = node_of(s);
    if (n == 0) return {Ref::constant(is_complemented(s)), false};
    if (n <= inputs_) return {Ref::input(n - 1), is_complemented(s)};
    return {Ref::node(index[n]), is_complemented(s)};
  };

  for (Signal o : outputs_) {
    if (!is_gate(node_of(o)) || index[node_of(o)] != kUnvisited) continue;
    std::vector<std::pair<std::uint32_t, unsigned>> stack{{node_of(o), 0}};
    while (!stack.empty()) {
      auto& [n, child] = stack.back();
      if (child < 3) {
        const std::uint32_t m = node_of(nodes_[n].fanin[child++]);
        if (is_gate(m) && index[m] == kUnvisited) stack.emplace_back(m, 0);
        continue;
      }
      if (index[n] == kUnvisited) {
        MajNode node;
        for (unsigned k = 0; k < 3; ++k) node.operands[k] = to_edge(nodes_[n].fanin[k]);
        index[n] = static_cast<std::uint32_t>(out_nodes.size());
        out_nodes.push_back(node);
      }
      stack.pop_back();
    }
  }
  std::vector<Edge> outs;
  outs.reserve(outputs_.size());
  for (Signal o : outputs_) outs.push_back(to_edge(o));
  return MajGraph(input_names_, std::move(out_nodes), std::move(outs));
}

}  // namespace pud::detail
