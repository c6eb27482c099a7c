#pragma once

// Data-movement bottleneck classifier. Labels a function from its cache
// metrics with one of six bottleneck classes and says whether moving it near
// memory is likely to help.
//
// The decision tree and its default thresholds are a reconstruction; they are
// configurable and should be recalibrated before drawing research conclusions.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pud {

struct MetricsRecord {
  std::string function;
  double llc_mpki = 0;
  double temporal_locality = 0;     // [0, 1]
  double arithmetic_intensity = 0;  // operations per byte
  /// (core count, LFMR) pairs, core counts strictly increasing, at least one entry.
  std::vector<std::pair<unsigned, double>> lfmr_by_cores;

  /// Throws ValidationError when a metric is out of range.
  void validate() const;
};

enum class BottleneckClass {
  DramBandwidthBound,
  DramLatencyBound,
  L1L2CacheCapacity,
  L3CacheContention,
  L1CacheCapacity,
  ComputeBound,
};

inline constexpr BottleneckClass kAllClasses[] = {
    BottleneckClass::DramBandwidthBound, BottleneckClass::DramLatencyBound, BottleneckClass::L1L2CacheCapacity,
    BottleneckClass::L3CacheContention,  BottleneckClass::L1CacheCapacity,  BottleneckClass::ComputeBound,
};

std::string_view to_string(BottleneckClass c);

struct Thresholds {
  double mpki_high = 10;
  double locality_high = 0.1;
  double ai_high = 0.25;
  double lfmr_high = 0.7;
  double trend_epsilon = 0.05;

  /// Throws ValidationError unless all are positive and locality/LFMR lie in (0, 1).
  void validate() const;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

/// llc_misses / l1_misses. Throws MetricError when l1_misses is zero or llc_misses exceeds it.
double compute_lfmr(std::uint64_t llc_misses, std::uint64_t l1_misses);

struct Classification {
  BottleneckClass cls = BottleneckClass::ComputeBound;
  std::string rationale;
  /// Set when the record falls in a region the taxonomy does not describe.
  std::optional<std::string> warning;
};

/// Total and deterministic for every valid record.
Classification classify(const MetricsRecord& m, const Thresholds& t = {});

enum class Suitability {
  PnmBeneficial,
  PnmBeneficialAtLowCoreCounts,
  PnmCostEffectiveVsLargerL3,
  Neutral,
  PnmHarmful,
};

struct Recommendation {
  Suitability suitability;
  std::string_view label;   // e.g. "PnM-harmful"
  std::string_view reason;  // one sentence
};

Recommendation recommend(BottleneckClass c);

/// CSV with header `function,llc_mpki,temporal_locality,arithmetic_intensity,lfmr@<cores>...`
/// (at least one lfmr column). Empty input yields no records. Throws ParseError
/// with the offending line for malformed rows or headers, ValidationError
/// (message prefixed with the line) for out-of-range metrics.
std::vector<MetricsRecord> parse_metrics_csv(std::string_view text);
std::vector<MetricsRecord> ingest_csv(const std::string& path);

/// Input columns plus `class,recommendation,rationale`.
void write_classified_csv(std::ostream& out, const std::vector<MetricsRecord>& records, const Thresholds& t);

}  // namespace pud
