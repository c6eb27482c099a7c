#pragma once

// Lowering of AND/OR/NOT/XOR netlists to majority graphs and rewrite-based
// optimization against the static row-activation estimate.

#include <cstddef>
#include <string>
#include <vector>

#include "pud/logic.hpp"

namespace pud {

/// AND -> MAJ(a,b,0), OR -> MAJ(a,b,1), NOT -> edge complement,
/// XOR -> MAJ(MAJ(a,b,1), ~MAJ(a,b,0), 0). No sharing or folding.
MajGraph lower_to_maj(const Netlist& netlist);

/// What a rule must improve before a local application is kept.
enum class RuleGoal {
  Canonical,    // realized by structural hashing, never applied as a rewrite
  Size,         // fewer nodes, or equal nodes and lower level
  Depth,        // no more nodes and lower level
  Complements,  // no more nodes and fewer complemented non-constant edges
};

/// A truth-preserving MAJ identity written in a small expression language:
/// `<a,b,c>` is a majority node, `!e` a complemented edge, `0`/`1` constants,
/// single lowercase letters are variables.
struct RewriteRule {
  std::string name;
  std::string lhs;
  std::string rhs;
  RuleGoal goal = RuleGoal::Size;
};

/// The optimizer's rule library, in application order.
const std::vector<RewriteRule>& rewrite_rules();

/// Name of the cut-based rule that replaces 3-input cones by a size-optimal
/// majority structure from an exhaustively enumerated table.
inline constexpr const char* kExactResynthesisRule = "exact_resynthesis_3";

struct RuleCheck {
  std::string name;
  bool passed = false;
};

/// Checks one rule by comparing both sides over all assignments of its variables.
bool rule_holds(const RewriteRule& rule);

/// Verifies every library rule plus every entry of the exact-resynthesis table.
/// Throws RuleVerificationError naming the first failing rule.
std::vector<RuleCheck> verify_rules();
std::vector<RuleCheck> verify_rules(const std::vector<RewriteRule>& rules);

struct RuleCount {
  std::string name;
  std::size_t applications = 0;
};

struct SynthesisReport {
  std::size_t node_count_before = 0;
  std::size_t node_count_after = 0;
  unsigned depth_before = 0;
  unsigned depth_after = 0;
  std::size_t estimated_activations_before = 0;
  std::size_t estimated_activations_after = 0;
  unsigned passes = 0;
  std::vector<RuleCount> rules_applied;
};

struct SynthesisResult {
  MajGraph graph;
  SynthesisReport report;
};

inline constexpr unsigned kMaxOptimizationPasses = 64;

/// effort 0 returns the input unchanged; 1 runs one pass of every rule;
/// 2 iterates passes until none is accepted (at most kMaxOptimizationPasses).
/// A rule step is kept only if it lowers (estimated activations, depth, nodes)
/// lexicographically, so the estimate never increases.
SynthesisResult optimize(const MajGraph& graph, unsigned effort);

}  // namespace pud
