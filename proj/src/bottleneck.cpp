#include "pud/bottleneck.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pud/error.hpp"

namespace pud {

namespace {

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

double first_lfmr(const MetricsRecord& m) { return m.lfmr_by_cores.front().second; }
double last_lfmr(const MetricsRecord& m) { return m.lfmr_by_cores.back().second; }

double min_lfmr(const MetricsRecord& m) {
  double v = 1.0;
  for (const auto& [cores, lfmr] : m.lfmr_by_cores) v = std::min(v, lfmr);
  return v;
}

}  // namespace

void MetricsRecord::validate() const {
  const auto fail = [&](const std::string& what) {
    throw ValidationError("function '" + function + "': " + what);
  };
  if (!(llc_mpki >= 0)) fail("llc_mpki must be >= 0, got " + num(llc_mpki));
  if (!(temporal_locality >= 0 && temporal_locality <= 1))
    fail("temporal_locality must lie in [0, 1], got " + num(temporal_locality));
  if (!(arithmetic_intensity >= 0)) fail("arithmetic_intensity must be >= 0, got " + num(arithmetic_intensity));
  if (lfmr_by_cores.empty()) fail("at least one LFMR value is required");
  for (std::size_t i = 0; i < lfmr_by_cores.size(); ++i) {
    const auto [cores, lfmr] = lfmr_by_cores[i];
    if (cores == 0) fail("core count must be positive");
    if (i > 0 && cores <= lfmr_by_cores[i - 1].first) fail("core counts must be strictly increasing");
    if (!(lfmr >= 0 && lfmr <= 1)) fail("LFMR must lie in [0, 1], got " + num(lfmr));
  }
}

std::string_view to_string(BottleneckClass c) {
  switch (c) {
    case BottleneckClass::DramBandwidthBound: return "DramBandwidthBound";
    case BottleneckClass::DramLatencyBound: return "DramLatencyBound";
    case BottleneckClass::L1L2CacheCapacity: return "L1L2CacheCapacity";
    case BottleneckClass::L3CacheContention: return "L3CacheContention";
    case BottleneckClass::L1CacheCapacity: return "L1CacheCapacity";
    case BottleneckClass::ComputeBound: return "ComputeBound";
  }
  return "?";
}

void Thresholds::validate() const {
  const auto check = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("threshold ") + what);
  };
  check(mpki_high > 0, "mpki_high must be positive");
  check(locality_high > 0 && locality_high < 1, "locality_high must lie in (0, 1)");
  check(ai_high > 0, "ai_high must be positive");
  check(lfmr_high > 0 && lfmr_high < 1, "lfmr_high must lie in (0, 1)");
  check(trend_epsilon > 0, "trend_epsilon must be positive");
}

double compute_lfmr(std::uint64_t llc_misses, std::uint64_t l1_misses) {
  if (l1_misses == 0) throw MetricError("LFMR is undefined with zero L1 misses");
  if (llc_misses > l1_misses)
    throw MetricError("inconsistent counts: " + std::to_string(llc_misses) + " LLC misses exceed " +
                      std::to_string(l1_misses) + " L1 misses");
  return static_cast<double>(llc_misses) / static_cast<double>(l1_misses);
}

Classification classify(const MetricsRecord& m, const Thresholds& t) {
  m.validate();
  t.validate();
  const double trend = last_lfmr(m) - first_lfmr(m);
  const bool high_mpki = m.llc_mpki >= t.mpki_high;
  const std::string mpki = "MPKI " + num(m.llc_mpki) + (high_mpki ? " >= " : " < ") + num(t.mpki_high);
  const std::string trend_text = "LFMR " + num(first_lfmr(m)) + " -> " + num(last_lfmr(m)) + " across core counts";

  Classification c;
  if (m.temporal_locality < t.locality_high) {
    const std::string loc = "low temporal locality (" + num(m.temporal_locality) + ")";
    if (high_mpki) {
      c.cls = BottleneckClass::DramBandwidthBound;
      c.rationale = loc + " and " + mpki;
    } else if (-trend > t.trend_epsilon) {
      c.cls = BottleneckClass::L1L2CacheCapacity;
      c.rationale = loc + ", " + mpki + ", " + trend_text + " falls as caches grow";
    } else if (min_lfmr(m) >= t.lfmr_high) {
      c.cls = BottleneckClass::DramLatencyBound;
      c.rationale = loc + ", " + mpki + ", LFMR stays >= " + num(t.lfmr_high);
    } else {
      // Caches catch a fair share of misses without a clear trend: closest to the capacity class.
      c.cls = BottleneckClass::L1L2CacheCapacity;
      c.rationale = loc + ", " + mpki + ", LFMR below " + num(t.lfmr_high) + " with no clear trend";
    }
    return c;
  }
  const std::string loc = "high temporal locality (" + num(m.temporal_locality) + ")";
  if (high_mpki) {
    c.cls = BottleneckClass::DramBandwidthBound;
    c.rationale = loc + " but " + mpki;
    c.warning = "high locality with high MPKI is outside the taxonomy; MPKI taken as dominant";
  } else if (trend > t.trend_epsilon) {
    c.cls = BottleneckClass::L3CacheContention;
    c.rationale = loc + ", " + trend_text + " rises with cores";
  } else if (m.arithmetic_intensity < t.ai_high) {
    c.cls = BottleneckClass::L1CacheCapacity;
    c.rationale = loc + ", arithmetic intensity " + num(m.arithmetic_intensity) + " < " + num(t.ai_high);
  } else {
    c.cls = BottleneckClass::ComputeBound;
    c.rationale = loc + ", arithmetic intensity " + num(m.arithmetic_intensity) + " >= " + num(t.ai_high);
  }
  return c;
}

Recommendation recommend(BottleneckClass c) {
  switch (c) {
    case BottleneckClass::DramBandwidthBound:
      return {Suitability::PnmBeneficial, "PnM-beneficial", "benefits from the larger memory bandwidth near memory"};
    case BottleneckClass::DramLatencyBound:
      return {Suitability::PnmBeneficial, "PnM-beneficial", "benefits from the lower access latency near memory"};
    case BottleneckClass::L1L2CacheCapacity:
      return {Suitability::PnmBeneficialAtLowCoreCounts, "PnM-beneficial-at-low-core-counts",
              "benefits near memory at low core counts; larger caches catch up as cores grow"};
    case BottleneckClass::L3CacheContention:
      return {Suitability::PnmCostEffectiveVsLargerL3, "PnM-cost-effective-vs-larger-L3",
              "near-memory cores relieve contention more cheaply than a larger L3"};
    case BottleneckClass::L1CacheCapacity:
      return {Suitability::Neutral, "neutral", "similar performance and energy on host and near memory"};
    case BottleneckClass::ComputeBound:
      return {Suitability::PnmHarmful, "PnM-harmful", "near-memory cores degrade performance of compute-bound code"};
  }
  return {Suitability::Neutral, "neutral", ""};
}

// ---------------------------------------------------------------------------
// CSV

namespace {

const char* const kFixedColumns[] = {"function", "llc_mpki", "temporal_locality", "arithmetic_intensity"};

std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cells.back() += ch;
      }
    } else if (ch == '"' && cells.back().empty()) {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back();
    } else {
      cells.back() += ch;
    }
  }
  if (quoted) throw ParseError(line_no, "unterminated quoted field");
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view cell, std::size_t line_no, std::string_view column) {
  cell = trim(cell);
  double v = 0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size())
    throw ParseError(line_no, std::string(column) + ": '" + std::string(cell) + "' is not a number");
  return v;
}

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"') r += '"';
    r += ch;
  }
  return r + "\"";
}

}  // namespace

std::vector<MetricsRecord> parse_metrics_csv(std::string_view text) {
  std::vector<MetricsRecord> records;
  std::vector<unsigned> cores;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line, line_no);

    if (!have_header) {
      if (cells.size() < 5) throw HeaderError(line_no, "header needs the four metric columns and at least one lfmr@<cores>");
      for (std::size_t i = 0; i < 4; ++i)
        if (trim(cells[i]) != kFixedColumns[i])
          throw HeaderError(line_no, "header column " + std::to_string(i + 1) + " must be '" + kFixedColumns[i] + "'");
      for (std::size_t i = 4; i < cells.size(); ++i) {
        const std::string_view h = trim(cells[i]);
        unsigned c = 0;
        const auto [end, ec] = std::from_chars(h.data() + std::min<std::size_t>(5, h.size()), h.data() + h.size(), c);
        if (h.substr(0, 5) != "lfmr@" || ec != std::errc() || end != h.data() + h.size() || c == 0)
          throw HeaderError(line_no, "bad lfmr column '" + std::string(h) + "'");
        if (!cores.empty() && c <= cores.back())
          throw HeaderError(line_no, "lfmr core counts must be strictly increasing");
        cores.push_back(c);
      }
      have_header = true;
      continue;
    }

    if (cells.size() != cores.size() + 4)
      throw ParseError(line_no, "expected " + std::to_string(cores.size() + 4) + " fields, got " +
                                    std::to_string(cells.size()));
    MetricsRecord m;
    m.function = std::string(trim(cells[0]));
    if (m.function.empty()) throw ParseError(line_no, "empty function name");
    m.llc_mpki = parse_double(cells[1], line_no, kFixedColumns[1]);
    m.temporal_locality = parse_double(cells[2], line_no, kFixedColumns[2]);
    m.arithmetic_intensity = parse_double(cells[3], line_no, kFixedColumns[3]);
    for (std::size_t i = 0; i < cores.size(); ++i) {
      // Only the first LFMR column is mandatory per row.
      if (i > 0 && trim(cells[4 + i]).empty()) continue;
      m.lfmr_by_cores.emplace_back(cores[i], parse_double(cells[4 + i], line_no, "lfmr"));
    }
    try {
      m.validate();
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(std::move(m));
  }
  return records;
}

std::vector<MetricsRecord> ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_metrics_csv(s.str());
}

void write_classified_csv(std::ostream& out, const std::vector<MetricsRecord>& records, const Thresholds& t) {
  if (records.empty()) return;
  std::set<unsigned> cores;
  for (const auto& m : records)
    for (const auto& [c, v] : m.lfmr_by_cores) cores.insert(c);
  for (const char* col : kFixedColumns) out << col << ',';
  for (unsigned c : cores) out << "lfmr@" << c << ',';
  out << "class,recommendation,rationale\n";
  for (const auto& m : records) {
    const Classification c = classify(m, t);
    out << quote(m.function) << ',' << num(m.llc_mpki) << ',' << num(m.temporal_locality) << ','
        << num(m.arithmetic_intensity) << ',';
    const std::map<unsigned, double> by(m.lfmr_by_cores.begin(), m.lfmr_by_cores.end());
    for (unsigned core : cores) {
      if (auto it = by.find(core); it != by.end()) out << num(it->second);
      out << ',';
    }
    std::string rationale = c.rationale;
    if (c.warning) rationale += " (warning: " + *c.warning + ")";
    out << to_string(c.cls) << ',' << recommend(c.cls).label << ',' << quote(rationale) << '\n';
  }
}

}  // namespace pud
