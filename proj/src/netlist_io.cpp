#include <charconv>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "pud/error.hpp"
#include "pud/logic.hpp"

namespace pud {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t j = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > j) toks.push_back(line.substr(j, i - j));
  }
  return toks;
}

bool parse_uint(std::string_view s, std::uint32_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

std::string ref_token(Ref r) {
  switch (r.kind) {
    case RefKind::Constant: return r.index ? "1" : "0";
    case RefKind::Input: return "in" + std::to_string(r.index);
    case RefKind::Node: return "g" + std::to_string(r.index);
  }
  return "?";
}

}  // namespace

Netlist parse_netlist(std::string_view text) {
  std::size_t line_no = 0;
  std::optional<std::uint32_t> inputs;
  std::vector<Gate> gates;
  std::vector<Ref> outputs;
  bool have_outputs = false;
  std::unordered_map<std::uint32_t, std::uint32_t> gate_ids;  // text id -> position

  auto operand = [&](std::string_view tok) -> Ref {
    std::uint32_t v = 0;
    if (tok == "0") return Ref::constant(false);
    if (tok == "1") return Ref::constant(true);
    if (tok.starts_with("in") && parse_uint(tok.substr(2), v)) {
      if (v >= *inputs) throw ParseError(line_no, "input '" + std::string(tok) + "' out of range");
      return Ref::input(v);
    }
    if (tok.starts_with("g") && parse_uint(tok.substr(1), v)) {
      auto it = gate_ids.find(v);
      if (it == gate_ids.end()) throw ParseError(line_no, "gate '" + std::string(tok) + "' used before definition");
      return Ref::node(it->second);
    }
    throw ParseError(line_no, "unknown operand '" + std::string(tok) + "'");
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (have_outputs) throw ParseError(line_no, "content after outputs line");

    if (toks[0] == "inputs") {
      std::uint32_t n = 0;
      if (inputs || toks.size() != 2 || !parse_uint(toks[1], n)) throw ParseError(line_no, "malformed inputs header");
      inputs = n;
      continue;
    }
    if (!inputs) throw ParseError(line_no, "missing 'inputs <n>' header");
    if (toks[0] == "outputs") {
      for (std::size_t k = 1; k < toks.size(); ++k) outputs.push_back(operand(toks[k]));
      have_outputs = true;
      continue;
    }
    std::uint32_t id = 0;
    if (toks.size() < 4 || toks[1] != "=" || !toks[0].starts_with("g") || !parse_uint(toks[0].substr(1), id))
      throw ParseError(line_no, "expected 'g<id> = <KIND> <operands>'");
    if (gate_ids.contains(id)) throw ParseError(line_no, "gate g" + std::to_string(id) + " redefined");
    GateKind kind;
    if (toks[2] == "AND") kind = GateKind::And;
    else if (toks[2] == "OR") kind = GateKind::Or;
    else if (toks[2] == "XOR") kind = GateKind::Xor;
    else if (toks[2] == "NOT") kind = GateKind::Not;
    else throw ParseError(line_no, "unknown gate kind '" + std::string(toks[2]) + "'");
    const std::size_t arity = kind == GateKind::Not ? 1 : 2;
    if (toks.size() != 3 + arity) throw ParseError(line_no, std::string(toks[2]) + " takes " + std::to_string(arity) + " operand(s)");
    Gate g{kind, {operand(toks[3]), arity == 2 ? operand(toks[4]) : Ref::constant(false)}};
    gate_ids.emplace(id, static_cast<std::uint32_t>(gates.size()));
    gates.push_back(g);
  }
  if (!inputs) throw ParseError(0, "missing 'inputs <n>' header");
  if (!have_outputs) throw ParseError(0, "missing 'outputs' footer");

  std::vector<std::string> names;
  for (std::uint32_t i = 0; i < *inputs; ++i) names.push_back("in" + std::to_string(i));
  return Netlist(std::move(names), std::move(gates), std::move(outputs));
}

std::string to_text(const Netlist& netlist) {
  std::ostringstream os;
  os << "inputs " << netlist.input_count() << '\n';
  for (std::size_t g = 0; g < netlist.gates().size(); ++g) {
    const Gate& gate = netlist.gates()[g];
    os << 'g' << g << " = " << to_string(gate.kind) << ' ' << ref_token(gate.operands[0]);
    if (gate.arity() == 2) os << ' ' << ref_token(gate.operands[1]);
    os << '\n';
  }
  os << "outputs";
  for (Ref r : netlist.outputs()) os << ' ' << ref_token(r);
  os << '\n';
  return os.str();
}

}  // namespace pud
