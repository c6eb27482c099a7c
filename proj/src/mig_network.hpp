#pragma once

// Mutable majority network used by the optimizer. Not part of the public API.
//
// Node 0 is constant 0; nodes 1..n are the primary inputs; gates follow.
// A Signal packs (node << 1) | complemented, so constant 1 is signal 1.

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pud/logic.hpp"

namespace pud::detail {

using Signal = std::uint32_t;

constexpr Signal make_signal(std::uint32_t node, bool complemented) { return (node << 1) | (complemented ? 1u : 0u); }
constexpr std::uint32_t node_of(Signal s) { return s >> 1; }
constexpr bool is_complemented(Signal s) { return s & 1u; }

struct TripleHash {
  std::size_t operator()(const std::array<Signal, 3>& k) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (Signal s : k) h = (h ^ s) * 0x100000001B3ull;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

class MigNetwork {
 public:
  explicit MigNetwork(const MajGraph& graph);

  /// Live gates reachable from the outputs, renumbered in DFS post-order.
  MajGraph to_graph() const;

  std::uint32_t size() const { return static_cast<std::uint32_t>(nodes_.size()); }
  std::uint32_t input_count() const { return inputs_; }
  bool is_gate(std::uint32_t n) const { return n > inputs_; }
  bool is_dead(std::uint32_t n) const { return nodes_[n].dead; }
  const std::array<Signal, 3>& fanins(std::uint32_t n) const { return nodes_[n].fanin; }
  std::uint32_t refs(std::uint32_t n) const { return nodes_[n].refs; }
  std::uint32_t level(std::uint32_t n) const { return nodes_[n].level; }
  Signal input(std::uint32_t i) const { return make_signal(1 + i, false); }
  const std::vector<Signal>& outputs() const { return outputs_; }

  /// MAJ with trivial simplification and structural hashing (either polarity).
  Signal create_maj(Signal a, Signal b, Signal c);

  /// Redirects every fanout of `old_node` to `replacement`, cascading any
  /// simplification or hash collision it causes. Dead cones are removed.
  void substitute(std::uint32_t old_node, Signal replacement);

  /// Decrements references through the maximum fanout-free cone of `root`
  /// (stopping at `leaves` and inputs). Returns the cone size; the nodes
  /// whose count reached zero are appended to `cone`.
  unsigned deref_cone(std::uint32_t root, const std::vector<std::uint32_t>& leaves, std::vector<std::uint32_t>& cone);
  /// Exact inverse of deref_cone.
  void ref_cone(std::uint32_t root, const std::vector<std::uint32_t>& leaves);

  /// Removes gates created at or after `first` that are still unreferenced.
  void discard_unused_since(std::uint32_t first);

  /// Number of fanout references (gates and outputs) that see `n` complemented.
  unsigned complemented_fanout(std::uint32_t n) const;

 private:
  struct Node {
    std::array<Signal, 3> fanin{};
    std::uint32_t refs = 0;
    std::uint32_t level = 0;
    bool dead = false;
  };

  static std::array<Signal, 3> key_of(std::array<Signal, 3> f);
  bool simplify(Signal a, Signal b, Signal c, Signal& out) const;
  Signal resolve(Signal s) const;
  void take_out(std::uint32_t n);
  void strash_erase(std::uint32_t n);

  std::uint32_t inputs_ = 0;
  std::vector<std::string> input_names_;
  std::vector<Node> nodes_;
  std::vector<std::vector<std::uint32_t>> fanouts_;
  std::vector<Signal> outputs_;
  std::unordered_map<std::array<Signal, 3>, std::uint32_t, TripleHash> strash_;
  std::unordered_map<std::uint32_t, Signal> forward_;
};

}  // namespace pud::detail
