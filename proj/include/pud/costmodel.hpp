#pragma once

// Analytical latency/energy/throughput accounting for μPrograms.
//
// Default parameters are placeholders chosen for relative comparisons. They
// are not calibrated against any DRAM part; only ratios between programs
// evaluated under the same parameters are meaningful.

#include <cstdint>
#include <optional>

#include "pud/codegen.hpp"

namespace pud {

struct CostParams {
  double t_aap_ns = 100.0;
  double t_tra_ns = 150.0;
  double e_act_pj = 900.0;
  double e_pre_pj = 150.0;
  double transpose_ns_per_word = 10.0;
  std::uint32_t banks = 1;
  std::uint32_t columns_per_subarray = 65536;

  /// Throws ValidationError unless every field is strictly positive.
  void validate() const;

  friend bool operator==(const CostParams&, const CostParams&) = default;
};

struct CostReport {
  double latency_ns = 0;
  double energy_pj = 0;
  /// banks * columns / latency. Zero for an empty program.
  double throughput_ops_per_s = 0;
  std::size_t aap = 0;
  std::size_t tra = 0;
  std::size_t activations = 0;
};

/// Every command costs its latency; every row activation costs e_act and
/// every command closes with one precharge costing e_pre.
CostReport estimate(const ActivationCount& count, const CostParams& params);
CostReport estimate(const MicroProgram& program, const CostParams& params);

/// Ratios of `a` over `b`. A ratio whose denominator is zero is left empty
/// and sets `undefined`.
struct CostRatio {
  std::optional<double> latency;
  std::optional<double> energy;
  std::optional<double> throughput;
  bool undefined = false;
};

CostRatio compare(const CostReport& a, const CostReport& b);

/// Host-side cost of moving `values` operands of `width` bits through the transposition unit.
double transpose_latency_ns(std::size_t values, unsigned width, const CostParams& params);

}  // namespace pud
