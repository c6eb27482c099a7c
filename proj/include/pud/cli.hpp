#pragma once

// Command-line front end. Verbs: compile, run, bench, classify, transpose.
//
// Exit codes: 0 success, 1 other failure, 2 usage error (bad arguments,
// unknown op, malformed CSV header), 3 capacity or data error.

#include <iosfwd>
#include <string>
#include <vector>

#include "pud/config.hpp"
#include "pud/oplib.hpp"

namespace pud {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchRow {
  OpKind kind;
  unsigned width;
  CostReport base;  // effort 0
  CostReport optimized;
  bool kept_unoptimized = false;
};

/// Compiles every op at every width at effort 0 and `effort`. Failures are
/// appended to `failures` as "op width: message" and skipped.
std::vector<BenchRow> bench_table(const RunConfig& cfg, const std::vector<unsigned>& widths, unsigned effort,
                                  std::vector<std::string>& failures);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace pud
