#pragma once

// Parsed form of RewriteRule sides. Not part of the public API.

#include <cstdint>
#include <string_view>
#include <vector>

namespace pud::detail {

struct RuleExpr {
  enum class Kind : std::uint8_t { Var, Const, Maj };
  Kind kind = Kind::Const;
  std::uint8_t var = 0;  // 0..25 for Var
  bool value = false;    // for Const
  bool complemented = false;
  std::vector<RuleExpr> kids;  // exactly 3 for Maj
};

/// Throws ValidationError on malformed text.
RuleExpr parse_rule_expr(std::string_view text);

/// Bitmask of variables used.
std::uint32_t rule_vars(const RuleExpr& e);

/// Evaluates with variable v bound to bit v of `assignment`.
bool eval_rule_expr(const RuleExpr& e, std::uint32_t assignment);

}  // namespace pud::detail
