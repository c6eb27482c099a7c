#include <gtest/gtest.h>

#include <random>

#include "pud/codegen.hpp"
#include "pud/error.hpp"
#include "pud/synthesis.hpp"
#include "test_util.hpp"

using namespace pud;
using pud::testing::random_netlist;
using pud::testing::ripple_adder;

namespace {

Edge in(std::uint32_t i, bool c = false) { return {Ref::input(i), c}; }

}  // namespace

TEST(Lowering, AndBecomesOneNodeWithConstantZero) {
  NetlistBuilder nb;
  const Ref a = nb.input("a"), b = nb.input("b");
  const auto g = lower_to_maj(nb.build({nb.and_(a, b)}));
  ASSERT_EQ(g.node_count(), 1u);
  const auto& ops = g.nodes()[0].operands;
  EXPECT_EQ(ops[2], (Edge{Ref::constant(false), false}));
  EXPECT_EQ(g.outputs()[0], (Edge{Ref::node(0), false}));
}

TEST(Lowering, NotOfAndComplementsTheOutputEdge) {
  NetlistBuilder nb;
  const Ref a = nb.input("a"), b = nb.input("b");
  const auto g = lower_to_maj(nb.build({nb.not_(nb.and_(a, b))}));
  ASSERT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.outputs()[0], (Edge{Ref::node(0), true}));
}

TEST(Lowering, XorTemplateTruthTable) {
  NetlistBuilder nb;
  const Ref a = nb.input("a"), b = nb.input("b");
  const auto g = lower_to_maj(nb.build({nb.xor_(a, b)}));
  const auto t = truth_table(g);
  EXPECT_FALSE(t.get(0, 0));
  EXPECT_TRUE(t.get(1, 0));
  EXPECT_TRUE(t.get(2, 0));
  EXPECT_FALSE(t.get(3, 0));
}

TEST(Lowering, RandomNetlistsStayEquivalent) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const auto n = random_netlist(rng, 1 + i % 10, 25, 3);
    ASSERT_TRUE(equivalent(n, lower_to_maj(n)));
  }
}

TEST(Optimize, MajorityOfEqualOperandsSimplifies) {
  const MajGraph g({"a", "b"}, {MajNode{{in(0), in(0), in(1)}}}, {Edge{Ref::node(0), false}});
  const auto r = optimize(g, 1);
  EXPECT_EQ(r.graph.node_count(), 0u);
  EXPECT_EQ(r.graph.outputs()[0], in(0));
}

TEST(Optimize, MajorityOfComplementaryOperandsSimplifies) {
  const MajGraph g({"a", "b"}, {MajNode{{in(0), in(0, true), in(1)}}}, {Edge{Ref::node(0), false}});
  const auto r = optimize(g, 1);
  EXPECT_EQ(r.graph.node_count(), 0u);
  EXPECT_EQ(r.graph.outputs()[0], in(1));
}

TEST(Optimize, EffortZeroIsIdentity) {
  const auto g = lower_to_maj(ripple_adder(3));
  const auto r = optimize(g, 0);
  EXPECT_EQ(r.graph, g);
  EXPECT_EQ(r.report.passes, 0u);
  EXPECT_EQ(r.report.estimated_activations_after, r.report.estimated_activations_before);
}

TEST(Optimize, FourBitAdderShrinks) {
  const auto naive = lower_to_maj(ripple_adder(4));
  const auto r = optimize(naive, 2);
  EXPECT_LT(r.graph.node_count(), naive.node_count());
  EXPECT_TRUE(equivalent(ripple_adder(4), r.graph));
  EXPECT_LT(r.report.estimated_activations_after, r.report.estimated_activations_before);
  EXPECT_EQ(r.report.node_count_before, naive.node_count());
  EXPECT_EQ(r.report.node_count_after, r.graph.node_count());
  EXPECT_FALSE(r.report.rules_applied.empty());
}

TEST(Optimize, PipelineEquivalenceAndMonotoneCost) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    const unsigned inputs = 2 + i % 11;
    const auto n = random_netlist(rng, inputs, 30, 3);
    const auto g = lower_to_maj(n);
    for (unsigned effort : {1u, 2u}) {
      const auto r = optimize(g, effort);
      ASSERT_TRUE(equivalent(n, r.graph)) << "trial " << i << " effort " << effort;
      ASSERT_LE(r.report.estimated_activations_after, r.report.estimated_activations_before);
      ASSERT_EQ(r.report.estimated_activations_after, estimate_cost_static(r.graph));
    }
  }
}

TEST(Optimize, IdempotentAtFixpoint) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto g = lower_to_maj(random_netlist(rng, 6, 30, 2));
    const auto once = optimize(g, 2);
    const auto twice = optimize(once.graph, 2);
    ASSERT_EQ(twice.graph, once.graph) << "trial " << i;
  }
  const auto adder = optimize(lower_to_maj(ripple_adder(4)), 2).graph;
  EXPECT_EQ(optimize(adder, 2).graph, adder);
}

TEST(Optimize, Deterministic) {
  const auto g = lower_to_maj(ripple_adder(5));
  EXPECT_EQ(optimize(g, 2).graph, optimize(g, 2).graph);
}

TEST(Rules, LibraryVerifies) {
  const auto checks = verify_rules();
  EXPECT_EQ(checks.size(), rewrite_rules().size() + 1);
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_EQ(checks.back().name, kExactResynthesisRule);
}

TEST(Rules, CommutativityAndAbsorptionHold) {
  for (const auto& r : rewrite_rules())
    if (r.name == "commutativity" || r.name == "majority") EXPECT_TRUE(rule_holds(r));
}

TEST(Rules, CorruptedRuleFailsWithItsName) {
  std::vector<RewriteRule> rules = rewrite_rules();
  rules.push_back({"broken_distributivity", "<<x,y,u>,<x,y,v>,z>", "<x,y,<u,!v,z>>", RuleGoal::Size});
  try {
    verify_rules(rules);
    FAIL() << "expected RuleVerificationError";
  } catch (const RuleVerificationError& e) {
    EXPECT_EQ(e.rule(), "broken_distributivity");
  }
}

TEST(Rules, MalformedExpressionRejected) {
  EXPECT_THROW(rule_holds({"bad", "<x,y>", "x", RuleGoal::Size}), ValidationError);
}
