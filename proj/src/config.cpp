#include "pud/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pud/error.hpp"

namespace pud {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T v{};
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || end != value.data() + value.size())
    throw ParseError(0, std::string(key) + ": '" + std::string(value) + "' is not a valid number");
  return v;
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "subarray.rows",      "subarray.columns",       "cost.t_aap_ns",         "cost.t_tra_ns",
      "cost.e_act_pj",      "cost.e_pre_pj",          "cost.transpose_ns_per_word",
      "cost.banks",         "cost.columns_per_subarray", "classify.mpki_high", "classify.locality_high",
      "classify.ai_high",   "classify.lfmr_high",     "classify.trend_epsilon",
  };
  return k;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "subarray.rows") {
    const auto rows = parse_number<std::uint32_t>(key, value);
    if (rows < SubarrayConfig::kReservedRows + 1)
      throw ParseError(0, "subarray.rows must be at least " + std::to_string(SubarrayConfig::kReservedRows + 1));
    subarray.total_rows = rows;
    subarray.data_rows = rows - SubarrayConfig::kReservedRows;
    subarray.reserved_base = subarray.data_rows;
  } else if (key == "subarray.columns") {
    subarray.columns = parse_number<std::uint32_t>(key, value);
  } else if (key == "cost.t_aap_ns") {
    cost.t_aap_ns = parse_number<double>(key, value);
  } else if (key == "cost.t_tra_ns") {
    cost.t_tra_ns = parse_number<double>(key, value);
  } else if (key == "cost.e_act_pj") {
    cost.e_act_pj = parse_number<double>(key, value);
  } else if (key == "cost.e_pre_pj") {
    cost.e_pre_pj = parse_number<double>(key, value);
  } else if (key == "cost.transpose_ns_per_word") {
    cost.transpose_ns_per_word = parse_number<double>(key, value);
  } else if (key == "cost.banks") {
    cost.banks = parse_number<std::uint32_t>(key, value);
  } else if (key == "cost.columns_per_subarray") {
    cost.columns_per_subarray = parse_number<std::uint32_t>(key, value);
  } else if (key == "classify.mpki_high") {
    classify.mpki_high = parse_number<double>(key, value);
  } else if (key == "classify.locality_high") {
    classify.locality_high = parse_number<double>(key, value);
  } else if (key == "classify.ai_high") {
    classify.ai_high = parse_number<double>(key, value);
  } else if (key == "classify.lfmr_high") {
    classify.lfmr_high = parse_number<double>(key, value);
  } else if (key == "classify.trend_epsilon") {
    classify.trend_epsilon = parse_number<double>(key, value);
  } else {
    throw ParseError(0, "unknown key '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  subarray.validate();
  cost.validate();
  classify.validate();
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    try {
      base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str(), base);
}

}  // namespace pud
