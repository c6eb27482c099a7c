
#include "exact_db.hpp"
#include "pud/error.hpp"
#include "pud/synthesis.hpp"
#include "rule_expr.hpp"

namespace pud {
namespace detail {
namespace {

struct ExprParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }
  [[noreturn]] void fail(const char* what) const {
    throw ValidationError("rule expression '" + std::string(text) + "': " + what);
  }
  void expect(char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) fail("unexpected character");
    ++pos;
  }
  RuleExpr parse() {
    skip();
    if (pos >= text.size()) fail("unexpected end");
    const char c = text[pos];
    if (c == '!') {
      ++pos;
      RuleExpr e = parse();
      e.complemented = !e.complemented;
      return e;
    }
    if (c == '<') {
      ++pos;
      RuleExpr e;
      e.kind = RuleExpr::Kind::Maj;
      e.kids.push_back(parse());
      expect(',');
      e.kids.push_back(parse());
      expect(',');
      e.kids.push_back(parse());
      expect('>');
      return e;
    }
    ++pos;
    RuleExpr e;
    if (c == '0' || c == '1') {
      e.kind = RuleExpr::Kind::Const;
      e.value = c == '1';
    } else if (c >= 'a' && c <= 'z') {
      e.kind = RuleExpr::Kind::Var;
      e.var = static_cast<std::uint8_t>(c - 'a');
    } else {
      fail("unknown token");
    }
    return e;
  }
};

}  // namespace

RuleExpr parse_rule_expr(std::string_view text) {
  ExprParser p{text};
  RuleExpr e = p.parse();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  return e;
}

std::uint32_t rule_vars(const RuleExpr& e) {
  switch (e.kind) {
    case RuleExpr::Kind::Var: return 1u << e.var;
    case RuleExpr::Kind::Const: return 0;
    case RuleExpr::Kind::Maj: return rule_vars(e.kids[0]) | rule_vars(e.kids[1]) | rule_vars(e.kids[2]);
  }
  return 0;
}

bool eval_rule_expr(const RuleExpr& e, std::uint32_t assignment) {
  bool v = false;
  switch (e.kind) {
    case RuleExpr::Kind::Var: v = (assignment >> e.var) & 1u; break;
    case RuleExpr::Kind::Const: v = e.value; break;
    case RuleExpr::Kind::Maj: {
      const int ones = eval_rule_expr(e.kids[0], assignment) + eval_rule_expr(e.kids[1], assignment) +
                       eval_rule_expr(e.kids[2], assignment);
      v = ones >= 2;
      break;
    }
  }
  return v != e.complemented;
}

namespace {

constexpr std::uint8_t kLeafPattern[3] = {0xAA, 0xCC, 0xF0};

std::uint8_t maj8(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
  return static_cast<std::uint8_t>((a & b) | (a & c) | (b & c));
}

std::vector<std::vector<ExactStructure>> build_exact_table() {
  std::vector<std::vector<ExactStructure>> table(256);
  std::vector<int> best(256, -1);

  auto record = [&](std::uint8_t f, const ExactStructure& s, int size) {
    if (best[f] == -1) best[f] = size;
    if (best[f] == size && table[f].size() < kExactAlternatives) table[f].push_back(s);
  };

  // Literal bases: 0 = const, 1..3 leaves, 4.. nodes. Function value per base.
  std::vector<std::uint8_t> base_fn = {0x00, kLeafPattern[0], kLeafPattern[1], kLeafPattern[2]};
  for (std::uint8_t b = 0; b < 4; ++b)
    for (bool c : {false, true}) {
      ExactStructure s;
      s.output = {b, c};
      record(static_cast<std::uint8_t>(c ? ~base_fn[b] : base_fn[b]), s, 0);
    }

  ExactStructure cur;
  // Depth-first over node sequences; each node picks 3 distinct bases and polarities.
  auto extend = [&](auto&& self, unsigned depth) -> void {
    if (depth == kExactMaxNodes) return;
    const auto nb = static_cast<std::uint8_t>(base_fn.size());
    for (std::uint8_t i = 0; i < nb; ++i)
      for (std::uint8_t j = i + 1; j < nb; ++j)
        for (std::uint8_t k = j + 1; k < nb; ++k)
          for (unsigned pol = 0; pol < 8; ++pol) {
            const std::array<ExactLiteral, 3> lits = {ExactLiteral{i, (pol & 1u) != 0},
                                                      ExactLiteral{j, (pol & 2u) != 0},
                                                      ExactLiteral{k, (pol & 4u) != 0}};
            // MAJ(0, 1, x) style constants are already handled by smaller structures.
            auto val = [&](const ExactLiteral& l) {
              return static_cast<std::uint8_t>(l.complemented ? ~base_fn[l.base] : base_fn[l.base]);
            };
            const std::uint8_t f = maj8(val(lits[0]), val(lits[1]), val(lits[2]));
            cur.nodes.push_back(lits);
            const auto node_base = static_cast<std::uint8_t>(base_fn.size());
            cur.output = {node_base, false};
            record(f, cur, static_cast<int>(depth + 1));
            cur.output = {node_base, true};
            record(static_cast<std::uint8_t>(~f), cur, static_cast<int>(depth + 1));
            base_fn.push_back(f);
            self(self, depth + 1);
            base_fn.pop_back();
            cur.nodes.pop_back();
          }
  };
  extend(extend, 0);
  return table;
}

}  // namespace

const std::vector<ExactStructure>& exact_structures(std::uint8_t function) {
  static const std::vector<std::vector<ExactStructure>> table = build_exact_table();
  return table[function];
}

std::uint8_t evaluate_structure(const ExactStructure& s) {
  std::vector<std::uint8_t> fn = {0x00, kLeafPattern[0], kLeafPattern[1], kLeafPattern[2]};
  auto val = [&](const ExactLiteral& l) {
    return static_cast<std::uint8_t>(l.complemented ? ~fn[l.base] : fn[l.base]);
  };
  for (const auto& n : s.nodes) fn.push_back(maj8(val(n[0]), val(n[1]), val(n[2])));
  return val(s.output);
}

}  // namespace detail

const std::vector<RewriteRule>& rewrite_rules() {
  static const std::vector<RewriteRule> rules = {
      {"commutativity", "<x,y,z>", "<y,x,z>", RuleGoal::Canonical},
      {"majority", "<x,x,y>", "x", RuleGoal::Canonical},
      {"majority_complement", "<x,!x,y>", "y", RuleGoal::Canonical},
      {"distributivity", "<<x,y,u>,<x,y,v>,z>", "<x,y,<u,v,z>>", RuleGoal::Size},
      {"complementary_associativity", "<x,u,<y,!u,z>>", "<x,u,<y,x,z>>", RuleGoal::Size},
      {"associativity", "<x,u,<y,u,z>>", "<z,u,<y,u,x>>", RuleGoal::Depth},
      {"inverter_propagation", "<!x,!y,!z>", "!<x,y,z>", RuleGoal::Complements},
      {"inverter_propagation_2", "<!x,!y,z>", "!<x,y,!z>", RuleGoal::Complements},
  };
  return rules;
}

bool rule_holds(const RewriteRule& rule) {
  const auto lhs = detail::parse_rule_expr(rule.lhs);
  const auto rhs = detail::parse_rule_expr(rule.rhs);
  const std::uint32_t vars = detail::rule_vars(lhs) | detail::rule_vars(rhs);
  // Enumerate only the used variables.
  std::vector<std::uint8_t> used;
  for (std::uint8_t v = 0; v < 26; ++v)
    if ((vars >> v) & 1u) used.push_back(v);
  for (std::uint32_t m = 0; m < (1u << used.size()); ++m) {
    std::uint32_t assignment = 0;
    for (std::size_t k = 0; k < used.size(); ++k)
      if ((m >> k) & 1u) assignment |= 1u << used[k];
    if (detail::eval_rule_expr(lhs, assignment) != detail::eval_rule_expr(rhs, assignment)) return false;
  }
  return true;
}

std::vector<RuleCheck> verify_rules(const std::vector<RewriteRule>& rules) {
  std::vector<RuleCheck> checks;
  for (const auto& r : rules) checks.push_back({r.name, rule_holds(r)});
  for (const auto& c : checks)
    if (!c.passed) throw RuleVerificationError(c.name);
  return checks;
}

std::vector<RuleCheck> verify_rules() {
  auto checks = verify_rules(rewrite_rules());
  bool exact_ok = true;
  for (unsigned f = 0; f < 256; ++f)
    for (const auto& s : detail::exact_structures(static_cast<std::uint8_t>(f)))
      exact_ok = exact_ok && detail::evaluate_structure(s) == f;
  checks.push_back({kExactResynthesisRule, exact_ok});
  if (!exact_ok) throw RuleVerificationError(kExactResynthesisRule);
  return checks;
}

}  // namespace pud
