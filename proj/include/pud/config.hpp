#pragma once

// Run configuration: subarray geometry, cost parameters and classifier
// thresholds, loaded from `key = value` text with `#` comments.
//
//   subarray.rows      total rows; the top 8 become the reserved group
//   subarray.columns
//   cost.t_aap_ns  cost.t_tra_ns  cost.e_act_pj  cost.e_pre_pj
//   cost.transpose_ns_per_word  cost.banks  cost.columns_per_subarray
//   classify.mpki_high  classify.locality_high  classify.ai_high
//   classify.lfmr_high  classify.trend_epsilon

#include <string>
#include <string_view>
#include <vector>

#include "pud/bottleneck.hpp"
#include "pud/codegen.hpp"
#include "pud/costmodel.hpp"

namespace pud {

struct RunConfig {
  SubarrayConfig subarray;
  CostParams cost;
  Thresholds classify;

  /// Sets one key. Throws ParseError (line 0) for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  /// Throws ValidationError if any part is invalid.
  void validate() const;

  static const std::vector<std::string>& keys();
};

/// Applies every assignment in `text` on top of `base`. Errors carry the line number.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

}  // namespace pud
