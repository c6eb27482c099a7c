#include <algorithm>
#include <functional>

#include "exact_db.hpp"
#include "mig_network.hpp"
#include "pud/codegen.hpp"
#include "pud/synthesis.hpp"
#include "rule_expr.hpp"

namespace pud {
namespace {

using namespace detail;

struct Score {
  std::size_t activations = 0;
  unsigned depth = 0;
  std::size_t nodes = 0;
  friend auto operator<=>(const Score&, const Score&) = default;
};

Score score_of(const MajGraph& g) { return {estimate_cost_static(g), g.depth(), g.node_count()}; }

// Instantiates replacement structure while recording which nodes it creates
// and which nodes of the about-to-die cone it reuses.
class Builder {
 public:
  Builder(MigNetwork& net, const std::vector<std::uint32_t>& cone) : net_(net), cone_(cone), first_(net.size()) {}

  Signal maj(Signal a, Signal b, Signal c) {
    const Signal s = net_.create_maj(a, b, c);
    const std::uint32_t n = node_of(s);
    if (n < first_ && net_.is_gate(n) && std::binary_search(cone_.begin(), cone_.end(), n) &&
        std::find(revived_.begin(), revived_.end(), n) == revived_.end())
      revived_.push_back(n);
    return s;
  }
  std::uint32_t first_new() const { return first_; }
  int cost() const { return static_cast<int>(net_.size() - first_ + revived_.size()); }

 private:
  MigNetwork& net_;
  const std::vector<std::uint32_t>& cone_;
  std::uint32_t first_;
  std::vector<std::uint32_t> revived_;
};

struct Candidate {
  int gain = 0;
  std::uint32_t level = 0;
  Signal signal = 0;
  unsigned complemented_inputs = 0;  // of the replacement root, constants excluded
  bool noop = true;
};

unsigned complemented_inputs(const MigNetwork& net, std::uint32_t n) {
  if (!net.is_gate(n)) return 0;
  unsigned c = 0;
  for (Signal f : net.fanins(n))
    if (is_complemented(f) && node_of(f) != 0) ++c;
  return c;
}

using Instantiate = std::function<Signal(Builder&)>;

Candidate evaluate(MigNetwork& net, std::uint32_t root, const std::vector<std::uint32_t>& leaves,
                   const Instantiate& build) {
  std::vector<std::uint32_t> cone;
  net.deref_cone(root, leaves, cone);
  net.ref_cone(root, leaves);
  std::sort(cone.begin(), cone.end());

  Builder b(net, cone);
  Candidate c;
  c.signal = build(b);
  c.noop = node_of(c.signal) == root;
  c.gain = static_cast<int>(cone.size()) - b.cost();
  c.level = net.level(node_of(c.signal));
  c.complemented_inputs = complemented_inputs(net, node_of(c.signal));
  net.discard_unused_since(b.first_new());
  return c;
}

void apply(MigNetwork& net, std::uint32_t root, const Instantiate& build) {
  static const std::vector<std::uint32_t> kNoCone;
  Builder b(net, kNoCone);
  const Signal s = build(b);
  net.substitute(root, s);
}

// ---------------------------------------------------------------------------
// Template rules

struct Bindings {
  std::array<Signal, 26> value{};
  std::uint32_t bound = 0;
};

struct Goal {
  const RuleExpr* pattern;
  Signal signal;
};

using MatchFn = std::function<bool(const Bindings&)>;

bool solve(const MigNetwork& net, std::vector<Goal>& goals, std::size_t i, Bindings& b, const MatchFn& on_match) {
  if (i == goals.size()) return on_match(b);
  const RuleExpr& p = *goals[i].pattern;
  const Signal s = goals[i].signal;
  switch (p.kind) {
    case RuleExpr::Kind::Var: {
      const Signal v = p.complemented ? s ^ 1u : s;
      if ((b.bound >> p.var) & 1u) return b.value[p.var] == v && solve(net, goals, i + 1, b, on_match);
      b.bound |= 1u << p.var;
      b.value[p.var] = v;
      const bool done = solve(net, goals, i + 1, b, on_match);
      b.bound &= ~(1u << p.var);
      return done;
    }
    case RuleExpr::Kind::Const:
      return s == make_signal(0, p.value != p.complemented) && solve(net, goals, i + 1, b, on_match);
    case RuleExpr::Kind::Maj: {
      if (is_complemented(s) != p.complemented || !net.is_gate(node_of(s))) return false;
      const std::array<Signal, 3> f = net.fanins(node_of(s));
      static constexpr std::array<std::array<int, 3>, 6> kPerms = {
          {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
      for (const auto& perm : kPerms) {
        const std::size_t base = goals.size();
        for (int k = 0; k < 3; ++k) goals.push_back({&p.kids[k], f[perm[k]]});
        const bool done = solve(net, goals, i + 1, b, on_match);
        goals.resize(base);
        if (done) return true;
      }
      return false;
    }
  }
  return false;
}

Signal instantiate(Builder& b, const RuleExpr& e, const Bindings& bind) {
  Signal s = 0;
  switch (e.kind) {
    case RuleExpr::Kind::Var: s = bind.value[e.var]; break;
    case RuleExpr::Kind::Const: s = make_signal(0, e.value); break;
    case RuleExpr::Kind::Maj:
      s = b.maj(instantiate(b, e.kids[0], bind), instantiate(b, e.kids[1], bind), instantiate(b, e.kids[2], bind));
      break;
  }
  return e.complemented ? s ^ 1u : s;
}

bool accepts(RuleGoal goal, const MigNetwork& net, std::uint32_t root, const Candidate& c) {
  if (c.noop) return false;
  const std::uint32_t root_level = net.level(root);
  switch (goal) {
    case RuleGoal::Canonical: return false;
    case RuleGoal::Size: return c.gain > 0 || (c.gain == 0 && c.level < root_level);
    case RuleGoal::Depth: return c.gain >= 0 && c.level < root_level;
    case RuleGoal::Complements: {
      if (c.gain < 0) return false;
      const unsigned fan = net.complemented_fanout(root);
      const unsigned before = complemented_inputs(net, root) + fan;
      const unsigned after =
          c.complemented_inputs + (is_complemented(c.signal) ? net.refs(root) - fan : fan);
      return after < before;
    }
  }
  return false;
}

std::size_t run_template(MigNetwork& net, const RewriteRule& rule) {
  const RuleExpr lhs = parse_rule_expr(rule.lhs);
  const RuleExpr rhs = parse_rule_expr(rule.rhs);
  std::size_t applications = 0;
  const std::uint32_t end = net.size();
  std::vector<Goal> goals;
  for (std::uint32_t root = net.input_count() + 1; root < end; ++root) {
    if (net.is_dead(root) || net.refs(root) == 0) continue;
    Bindings b;
    goals.assign(1, {&lhs, make_signal(root, false)});
    solve(net, goals, 0, b, [&](const Bindings& bind) {
      std::vector<std::uint32_t> leaves;
      for (std::uint8_t v = 0; v < 26; ++v)
        if ((bind.bound >> v) & 1u) leaves.push_back(node_of(bind.value[v]));
      const Instantiate build = [&](Builder& bb) { return instantiate(bb, rhs, bind); };
      const Candidate c = evaluate(net, root, leaves, build);
      if (!accepts(rule.goal, net, root, c)) return false;
      apply(net, root, build);
      ++applications;
      return true;
    });
  }
  return applications;
}

// ---------------------------------------------------------------------------
// Cut-based exact resynthesis

struct Cut {
  std::array<std::uint32_t, 3> leaves{};
  std::uint8_t size = 0;
  std::uint8_t tt = 0;
};

constexpr std::size_t kMaxCutsPerNode = 12;

std::uint8_t expand(const Cut& from, const std::array<std::uint32_t, 3>& to, std::uint8_t to_size) {
  std::array<int, 3> pos{};
  for (std::uint8_t j = 0; j < from.size; ++j)
    pos[j] = static_cast<int>(std::find(to.begin(), to.begin() + to_size, from.leaves[j]) - to.begin());
  std::uint8_t r = 0;
  for (unsigned m = 0; m < 8; ++m) {
    unsigned y = 0;
    for (std::uint8_t j = 0; j < from.size; ++j)
      if ((m >> pos[j]) & 1u) y |= 1u << j;
    if ((from.tt >> y) & 1u) r |= static_cast<std::uint8_t>(1u << m);
  }
  return r;
}

std::vector<std::vector<Cut>> enumerate_cuts(const MigNetwork& net, std::uint32_t end) {
  std::vector<std::vector<Cut>> cuts(end);
  cuts[0] = {Cut{{}, 0, 0x00}};
  for (std::uint32_t n = 1; n < end; ++n) {
    const Cut trivial{{n, 0, 0}, 1, 0xAA};
    if (!net.is_gate(n) || net.is_dead(n)) {
      cuts[n] = {trivial};
      continue;
    }
    const auto f = net.fanins(n);
    std::vector<Cut> found;
    for (const Cut& a : cuts[node_of(f[0])])
      for (const Cut& b : cuts[node_of(f[1])])
        for (const Cut& c : cuts[node_of(f[2])]) {
          std::array<std::uint32_t, 9> all{};
          std::size_t k = 0;
          for (const Cut* x : {&a, &b, &c})
            for (std::uint8_t j = 0; j < x->size; ++j) all[k++] = x->leaves[j];
          std::sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
          const auto uend = std::unique(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
          const auto size = static_cast<std::size_t>(uend - all.begin());
          if (size > 3) continue;
          Cut cut;
          cut.size = static_cast<std::uint8_t>(size);
          std::copy(all.begin(), uend, cut.leaves.begin());
          const bool dup = std::any_of(found.begin(), found.end(), [&](const Cut& o) {
            return o.size == cut.size && o.leaves == cut.leaves;
          });
          if (dup) continue;
          auto tt = [&](const Cut& x, Signal s) {
            const std::uint8_t t = expand(x, cut.leaves, cut.size);
            return static_cast<std::uint8_t>(is_complemented(s) ? ~t : t);
          };
          const std::uint8_t x = tt(a, f[0]), y = tt(b, f[1]), z = tt(c, f[2]);
          cut.tt = static_cast<std::uint8_t>((x & y) | (x & z) | (y & z));
          found.push_back(cut);
        }
    std::stable_sort(found.begin(), found.end(), [](const Cut& l, const Cut& r) { return l.size < r.size; });
    if (found.size() > kMaxCutsPerNode) found.resize(kMaxCutsPerNode);
    found.push_back(trivial);
    cuts[n] = std::move(found);
  }
  return cuts;
}

Signal instantiate_exact(Builder& b, const ExactStructure& s, const Cut& cut) {
  std::vector<Signal> lit = {make_signal(0, false)};
  for (std::uint8_t i = 0; i < 3; ++i) lit.push_back(i < cut.size ? make_signal(cut.leaves[i], false) : make_signal(0, false));
  auto val = [&](const ExactLiteral& l) { return lit[l.base] ^ (l.complemented ? 1u : 0u); };
  for (const auto& n : s.nodes) lit.push_back(b.maj(val(n[0]), val(n[1]), val(n[2])));
  return val(s.output);
}

std::size_t run_exact(MigNetwork& net) {
  const std::uint32_t end = net.size();
  const auto cuts = enumerate_cuts(net, end);
  std::size_t applications = 0;
  for (std::uint32_t root = net.input_count() + 1; root < end; ++root) {
    if (net.is_dead(root) || net.refs(root) == 0) continue;
    const Cut* best_cut = nullptr;
    const ExactStructure* best_struct = nullptr;
    Candidate best;
    for (const Cut& cut : cuts[root]) {
      if (cut.size == 1 && cut.leaves[0] == root) continue;
      bool alive = true;
      for (std::uint8_t i = 0; i < cut.size; ++i) alive = alive && !net.is_dead(cut.leaves[i]);
      if (!alive) continue;
      const std::vector<std::uint32_t> leaves(cut.leaves.begin(), cut.leaves.begin() + cut.size);
      for (const ExactStructure& s : exact_structures(cut.tt)) {
        const Candidate c = evaluate(net, root, leaves, [&](Builder& b) { return instantiate_exact(b, s, cut); });
        if (c.noop) continue;
        if (!best_cut || c.gain > best.gain || (c.gain == best.gain && c.level < best.level)) {
          best = c;
          best_cut = &cut;
          best_struct = &s;
        }
      }
    }
    if (best_cut && accepts(RuleGoal::Size, net, root, best)) {
      apply(net, root, [&](Builder& b) { return instantiate_exact(b, *best_struct, *best_cut); });
      ++applications;
    }
  }
  return applications;
}

void count_rule(SynthesisReport& r, const std::string& name, std::size_t n) {
  auto it = std::find_if(r.rules_applied.begin(), r.rules_applied.end(), [&](const RuleCount& c) { return c.name == name; });
  if (it == r.rules_applied.end()) r.rules_applied.push_back({name, n});
  else it->applications += n;
}

}  // namespace

SynthesisResult optimize(const MajGraph& graph, unsigned effort) {
  SynthesisReport report;
  report.node_count_before = graph.node_count();
  report.depth_before = graph.depth();
  report.estimated_activations_before = estimate_cost_static(graph);

  MajGraph current = graph;
  if (effort > 0) {
    Score score = score_of(current);
    const unsigned max_passes = effort == 1 ? 1 : kMaxOptimizationPasses;

    auto try_step = [&](const std::string& name, const std::function<std::size_t(MigNetwork&)>& step) {
      MigNetwork net(current);
      const std::size_t applications = step(net);
      MajGraph candidate = net.to_graph();
      if (candidate == current) return false;
      const Score s = score_of(candidate);
      if (!(s < score)) return false;
      const std::size_t shrink = current.node_count() > candidate.node_count() ? current.node_count() - candidate.node_count() : 0;
      count_rule(report, name, applications ? applications : shrink);
      current = std::move(candidate);
      score = s;
      return true;
    };

    for (unsigned pass = 0; pass < max_passes; ++pass) {
      ++report.passes;
      bool accepted = try_step("structural_hashing", [](MigNetwork&) { return std::size_t{0}; });
      accepted |= try_step(kExactResynthesisRule, run_exact);
      for (const RewriteRule& rule : rewrite_rules()) {
        if (rule.goal == RuleGoal::Canonical) continue;
        accepted |= try_step(rule.name, [&](MigNetwork& net) { return run_template(net, rule); });
      }
      if (!accepted) break;
    }
  }

  report.node_count_after = current.node_count();
  report.depth_after = current.depth();
  report.estimated_activations_after = estimate_cost_static(current);
  return {std::move(current), std::move(report)};
}

}  // namespace pud
