#include "pud/codegen.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "pud/error.hpp"

namespace pud {

// ---------------------------------------------------------------------------
// Config and rows

void SubarrayConfig::validate() const {
  if (columns < 1) throw ValidationError("subarray needs at least one column");
  if (total_rows < kReservedRows) throw ValidationError("subarray needs at least 8 rows for the reserved group");
  if (data_rows + kReservedRows > total_rows)
    throw ValidationError("data rows (" + std::to_string(data_rows) + ") + 8 reserved rows exceed total rows (" +
                          std::to_string(total_rows) + ")");
  if (reserved_base < data_rows) throw ValidationError("reserved rows overlap the data rows");
  if (reserved_base + kReservedRows > total_rows) throw ValidationError("reserved rows extend past the subarray");
}

SubarrayConfig SubarrayConfig::with_columns(std::uint32_t c) {
  SubarrayConfig cfg;
  cfg.columns = c;
  return cfg;
}

std::string Row::token() const {
  switch (kind) {
    case RowKind::Data: return "D" + std::to_string(index);
    case RowKind::Compute: return "T" + std::to_string(index);
    case RowKind::Dcc: return "DCC" + std::to_string(index);
    case RowKind::DccBar: return "~DCC" + std::to_string(index);
    case RowKind::Constant: return "C" + std::to_string(index);
  }
  return "?";
}

namespace {

std::optional<std::uint32_t> parse_index(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<Row> parse_row(std::string_view t) {
  auto suffix = [&](std::string_view prefix) -> std::optional<std::uint32_t> {
    if (t.substr(0, prefix.size()) != prefix) return std::nullopt;
    return parse_index(t.substr(prefix.size()));
  };
  if (t.starts_with("~DCC")) {
    if (auto i = suffix("~DCC"); i && *i < SubarrayConfig::kDccRows) return Row::dcc_bar(*i);
    return std::nullopt;
  }
  if (t.starts_with("DCC")) {
    if (auto i = suffix("DCC"); i && *i < SubarrayConfig::kDccRows) return Row::dcc(*i);
    return std::nullopt;
  }
  if (auto i = suffix("D")) return Row::data(*i);
  if (auto i = suffix("T"); i && *i < SubarrayConfig::kComputeRows) return Row::compute(*i);
  if (auto i = suffix("C"); i && *i < 2) return Row::constant(*i == 1);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

ProgramHeader parse_header(const std::vector<std::string_view>& toks, std::size_t line) {
  ProgramHeader h;
  bool seen_op = false, seen_width = false, seen_rows = false;
  for (auto tok : toks) {
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected key=value in header, got '" + std::string(tok) + "'");
    const auto key = tok.substr(0, eq);
    const auto value = tok.substr(eq + 1);
    auto number = [&]() {
      auto v = parse_index(value);
      if (!v) throw ParseError(line, "bad number '" + std::string(value) + "' for " + std::string(key));
      return *v;
    };
    bool* seen = nullptr;
    if (key == "op") {
      if (value.empty()) throw ParseError(line, "empty op name");
      h.op_name = std::string(value);
      seen = &seen_op;
    } else if (key == "width") {
      h.width = number();
      seen = &seen_width;
    } else if (key == "data_rows") {
      h.data_rows = number();
      seen = &seen_rows;
    } else {
      throw ParseError(line, "unknown header key '" + std::string(key) + "'");
    }
    if (*seen) throw ParseError(line, "duplicate header key '" + std::string(key) + "'");
    *seen = true;
  }
  if (!seen_op || !seen_width || !seen_rows) throw ParseError(line, "header needs op=, width= and data_rows=");
  return h;
}

}  // namespace

MicroProgram parse_program(std::string_view text) {
  MicroProgram prog;
  enum class State { Magic, Header, Body, Done } state = State::Magic;
  std::size_t line_no = 0;
  std::size_t last_content = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = split_ws(line);
    if (toks.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    last_content = line_no;
    switch (state) {
      case State::Magic:
        if (toks.size() != 1 || toks[0] != "UP/1") throw ParseError(line_no, "expected 'UP/1'");
        state = State::Header;
        break;
      case State::Header:
        prog.header = parse_header(toks, line_no);
        state = State::Body;
        break;
      case State::Body: {
        if (toks[0] == "END") {
          if (toks.size() != 1) throw ParseError(line_no, "unexpected tokens after END");
          state = State::Done;
          break;
        }
        auto row = [&](std::string_view t) {
          auto r = parse_row(t);
          if (!r) throw ParseError(line_no, "unknown row token '" + std::string(t) + "'");
          return *r;
        };
        if (toks[0] == "AAP") {
          if (toks.size() != 3) throw ParseError(line_no, "AAP takes 2 rows");
          prog.commands.push_back(Command::aap(row(toks[1]), row(toks[2])));
        } else if (toks[0] == "TRA") {
          if (toks.size() != 4) throw ParseError(line_no, "TRA takes 3 rows");
          prog.commands.push_back(Command::tra(row(toks[1]), row(toks[2]), row(toks[3])));
        } else {
          throw ParseError(line_no, "unknown command '" + std::string(toks[0]) + "'");
        }
        prog.source_lines.push_back(line_no);
        break;
      }
      case State::Done: throw ParseError(line_no, "content after END");
    }
    if (nl == text.size()) break;
  }
  if (state != State::Done) throw ParseError(last_content, "missing END");
  return prog;
}

std::string to_text(const MicroProgram& p) {
  std::string out = "UP/1\nop=" + p.header.op_name + " width=" + std::to_string(p.header.width) +
                    " data_rows=" + std::to_string(p.header.data_rows) + "\n";
  for (const Command& c : p.commands) {
    if (c.op == Opcode::Aap) {
      out += "AAP " + c.rows[0].token() + " " + c.rows[1].token() + "\n";
    } else {
      out += "TRA " + c.rows[0].token() + " " + c.rows[1].token() + " " + c.rows[2].token() + "\n";
    }
  }
  out += "END\n";
  return out;
}

ActivationCount activation_count(const MicroProgram& program) {
  ActivationCount n;
  for (const Command& c : program.commands) (c.op == Opcode::Aap ? n.aap : n.tra)++;
  n.total = 2 * n.aap + 3 * n.tra;
  return n;
}

RowMap allocate_rows(const MajGraph& graph, const SubarrayConfig& cfg) {
  const std::size_t need = graph.input_count() + graph.outputs().size();
  if (need > cfg.data_rows)
    throw CapacityError("need " + std::to_string(need) + " data rows, config provides " +
                        std::to_string(cfg.data_rows) + " (short by " + std::to_string(need - cfg.data_rows) + ")");
  RowMap m;
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < graph.input_count(); ++i) m.input_rows.push_back(r++);
  for (std::size_t i = 0; i < graph.outputs().size(); ++i) m.output_rows.push_back(r++);
  m.scratch_base = r;
  m.scratch_limit = cfg.data_rows;
  return m;
}

// ---------------------------------------------------------------------------
// Scheduler

namespace {

constexpr int kNone = -1;
constexpr int kTransient = -2;  // complemented operand staged for the pending TRA

struct Slot {
  Row row;
  bool dcc = false;
  int value = kNone;
  std::uint64_t touch = 0;
};

struct Operand {
  int value = 0;
  bool complemented = false;
};

struct Pick {
  bool dcc_only = false;
  bool prefer_dcc = false;
  bool no_dcc = false;
};

// Value ids: 0 and 1 are the constants, then inputs, then graph nodes.
class Scheduler {
 public:
  Scheduler(const MajGraph& g, const RowMap& rm, bool unbounded)
      : g_(g), rm_(rm), unbounded_(unbounded), node_base_(static_cast<int>(2 + g.input_count())) {
    const std::size_t values = node_base_ + g.node_count();
    home_.assign(values, std::nullopt);
    scratch_home_.assign(values, false);
    uses_.assign(values, 0);
    copies_.assign(values, {});
    home_[0] = Row::constant(false);
    home_[1] = Row::constant(true);
    for (std::size_t i = 0; i < g.input_count(); ++i) home_[2 + i] = Row::data(rm.input_rows[i]);
    for (std::uint32_t i = 0; i < SubarrayConfig::kComputeRows; ++i) add_slot(Row::compute(i), false);
    for (std::uint32_t i = 0; i < SubarrayConfig::kDccRows; ++i) add_slot(Row::dcc(i), true);
    next_scratch_ = rm.scratch_base;

    const std::size_t n = g.node_count();
    live_.assign(n, false);
    want_dcc_.assign(n, false);
    outputs_of_.assign(n, {});
    std::vector<std::uint32_t> stack;
    for (std::size_t o = 0; o < g.outputs().size(); ++o) {
      const Edge& e = g.outputs()[o];
      if (!e.ref.is_node()) continue;
      outputs_of_[e.ref.index].push_back(o);
      if (e.complemented) want_dcc_[e.ref.index] = true;
      if (!live_[e.ref.index]) {
        live_[e.ref.index] = true;
        stack.push_back(e.ref.index);
      }
    }
    while (!stack.empty()) {
      const std::uint32_t k = stack.back();
      stack.pop_back();
      for (const Edge& e : g.nodes()[k].operands)
        if (e.ref.is_node() && !live_[e.ref.index]) {
          live_[e.ref.index] = true;
          stack.push_back(e.ref.index);
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!live_[k]) continue;
      for (const Edge& e : g.nodes()[k].operands) {
        const Operand op = operand(e);
        if (!is_constant(op.value)) ++uses_[op.value];
        if (e.ref.is_node() && op.complemented) want_dcc_[e.ref.index] = true;
      }
    }
  }

  void run() {
    for (std::size_t o = 0; o < g_.outputs().size(); ++o) {
      const Edge& e = g_.outputs()[o];
      if (!e.ref.is_node()) write_output(o, operand(e));
    }
    for (int v = 2; v < node_base_; ++v)
      if (uses_[v] == 0) kill(v);
    for (std::uint32_t k : order()) schedule_node(k);
  }

  std::vector<Command> commands;
  std::vector<NodePlacement> placements;
  std::uint32_t scratch_high = 0;  // one past the highest scratch row used

 private:
  static bool is_constant(int v) { return v < 2; }

  // Depth-first post-order from the outputs: a topological order that
  // finishes each output cone before starting the next, keeping live ranges short.
  std::vector<std::uint32_t> order() const {
    std::vector<std::uint32_t> out;
    std::vector<bool> seen(g_.node_count(), false);
    for (const Edge& o : g_.outputs()) {
      if (!o.ref.is_node() || seen[o.ref.index]) continue;
      std::vector<std::pair<std::uint32_t, int>> stack{{o.ref.index, 0}};
      seen[o.ref.index] = true;
      while (!stack.empty()) {
        auto& [k, child] = stack.back();
        if (child < 3) {
          const Edge& e = g_.nodes()[k].operands[child++];
          if (e.ref.is_node() && !seen[e.ref.index]) {
            seen[e.ref.index] = true;
            stack.emplace_back(e.ref.index, 0);
          }
          continue;
        }
        out.push_back(k);
        stack.pop_back();
      }
    }
    return out;
  }

  Operand operand(const Edge& e) const {
    switch (e.ref.kind) {
      case RefKind::Constant: return {static_cast<int>((e.ref.index != 0) != e.complemented), false};
      case RefKind::Input: return {static_cast<int>(2 + e.ref.index), e.complemented};
      case RefKind::Node: return {static_cast<int>(node_base_ + e.ref.index), e.complemented};
    }
    return {};
  }

  int add_slot(Row row, bool dcc) {
    const int s = static_cast<int>(slots_.size());
    slots_.push_back({row, dcc, kNone, 0});
    locked_.push_back(false);
    (dcc ? free_dcc_ : free_t_).insert(s);
    if (dcc) ++dcc_count_;
    else ++t_count_;
    return s;
  }

  void assign(int s, int v) {
    Slot& slot = slots_[s];
    if (slot.value >= 0) {
      auto& c = copies_[slot.value];
      c.erase(std::find(c.begin(), c.end(), s));
    } else if (slot.value == kNone) {
      (slot.dcc ? free_dcc_ : free_t_).erase(s);
    }
    slot.value = v;
    if (v >= 0) copies_[v].push_back(s);
    slot.touch = ++clock_;
  }

  void release(int s) {
    Slot& slot = slots_[s];
    slot.value = kNone;
    (slot.dcc ? free_dcc_ : free_t_).insert(s);
  }

  void kill(int v) {
    for (int s : copies_[v]) release(s);
    copies_[v].clear();
    if (scratch_home_[v]) {
      free_scratch_.insert(home_[v]->index);
      scratch_home_[v] = false;
    }
  }

  void aap(Row src, Row dst) { commands.push_back(Command::aap(src, dst)); }

  int compute_copy(int v) const {
    int best = -1;
    for (int s : copies_[v])
      if (best < 0 || (slots_[best].dcc && !slots_[s].dcc) ||
          (slots_[best].dcc == slots_[s].dcc && s < best))
        best = s;
    return best;
  }

  int dcc_copy(int v) const {
    int best = -1;
    for (int s : copies_[v])
      if (slots_[s].dcc && (best < 0 || s < best)) best = s;
    return best;
  }

  // Row to copy v from, plus its slot if it is a compute row.
  std::pair<Row, int> source(int v) {
    if (const int s = compute_copy(v); s >= 0) {
      slots_[s].touch = ++clock_;
      return {slots_[s].row, s};
    }
    if (!home_[v]) throw std::logic_error("scheduler lost track of a live value");
    return {*home_[v], -1};
  }

  std::uint32_t take_scratch() {
    std::uint32_t r = 0;
    if (!free_scratch_.empty()) {
      r = *free_scratch_.begin();
      free_scratch_.erase(free_scratch_.begin());
    } else {
      if (next_scratch_ >= rm_.scratch_limit)
        throw CapacityError("spill needs more than " + std::to_string(rm_.scratch_limit - rm_.scratch_base) +
                            " scratch data rows");
      r = next_scratch_++;
    }
    scratch_high = std::max(scratch_high, r + 1);
    return r;
  }

  int pick(const Pick& p, const std::vector<int>& pending) {
    if (unbounded_) {
      const bool want_dcc = p.dcc_only || (p.prefer_dcc && !p.no_dcc);
      if (want_dcc) {
        if (!free_dcc_.empty()) return *free_dcc_.begin();
        return add_slot(Row::dcc(dcc_count_), true);
      }
      if (!free_t_.empty()) return *free_t_.begin();
      return add_slot(Row::compute(t_count_), false);
    }

    using Key = std::tuple<int, int, std::uint64_t, int>;
    int best = -1;
    Key best_key{};
    for (int s = 0; s < static_cast<int>(slots_.size()); ++s) {
      const Slot& slot = slots_[s];
      if (locked_[s] || (p.dcc_only && !slot.dcc) || (p.no_dcc && slot.dcc)) continue;
      int tier = 0;
      if (slot.value >= 0) {
        const int v = slot.value;
        int surviving = 0;
        for (int c : copies_[v])
          if (c != s && !locked_[c]) ++surviving;
        tier = surviving > 0 ? 1 : home_[v] ? 2 : 3;
        if (tier >= 2 && std::find(pending.begin(), pending.end(), v) != pending.end()) tier += 2;
      }
      const int mismatch = p.prefer_dcc ? !slot.dcc : slot.dcc;
      const Key key{tier, mismatch, slot.touch, s};
      if (best < 0 || key < best_key) {
        best = s;
        best_key = key;
      }
    }
    if (best < 0) throw std::logic_error("no compute row available");
    const int v = slots_[best].value;
    if (v >= 0 && !home_[v]) {
      bool other = false;
      for (int c : copies_[v]) other = other || (c != best && !locked_[c]);
      if (!other) {
        const std::uint32_t r = take_scratch();
        aap(slots_[best].row, Row::data(r));
        home_[v] = Row::data(r);
        scratch_home_[v] = true;
      }
    }
    return best;
  }

  void write_output(std::size_t o, Operand op) {
    const Row dst = Row::data(rm_.output_rows[o]);
    const int v = op.value;
    if (!op.complemented) {
      aap(source(v).first, dst);
      if (!home_[v]) home_[v] = dst;
      return;
    }
    int d = dcc_copy(v);
    if (d < 0) {
      const auto [src, src_slot] = source(v);
      const bool was_locked = src_slot >= 0 && locked_[src_slot];
      if (src_slot >= 0) locked_[src_slot] = true;
      d = pick({.dcc_only = true}, {});
      if (src_slot >= 0) locked_[src_slot] = was_locked;
      aap(src, slots_[d].row);
      assign(d, v);
    }
    slots_[d].touch = ++clock_;
    aap(Row::dcc_bar(slots_[d].row.index), dst);
  }

  void schedule_node(std::uint32_t k) {
    const int self = node_base_ + static_cast<int>(k);
    std::array<Operand, 3> ops;
    for (int j = 0; j < 3; ++j) ops[j] = operand(g_.nodes()[k].operands[j]);
    std::array<int, 3> at = {-1, -1, -1};
    int dcc_reserved = 0;
    auto lock = [&](int j, int s) {
      at[j] = s;
      locked_[s] = true;
      if (slots_[s].dcc) ++dcc_reserved;
    };

    // Consume existing copies in place when no later reader needs them.
    for (int j = 0; j < 3; ++j) {
      if (ops[j].complemented) continue;
      const int v = ops[j].value;
      int chosen = -1;
      for (int s : copies_[v]) {
        if (locked_[s] || (slots_[s].dcc && dcc_reserved > 0)) continue;
        if (chosen < 0 || (slots_[chosen].dcc && !slots_[s].dcc) ||
            (slots_[chosen].dcc == slots_[s].dcc && s < chosen))
          chosen = s;
      }
      if (chosen < 0) continue;
      int occurrences = 0;
      for (const Operand& o : ops) occurrences += o.value == v;
      const int uses_after = is_constant(v) ? 1 : uses_[v] - occurrences;
      int others = 0;
      for (int s : copies_[v])
        if (s != chosen && !locked_[s]) ++others;
      if (uses_after == 0 || others > 0 || home_[v]) {
        lock(j, chosen);
        slots_[chosen].touch = ++clock_;
      }
    }

    // Copy the remaining operands into fresh rows.
    for (int j = 0; j < 3; ++j) {
      if (at[j] >= 0) continue;
      const int v = ops[j].value;
      std::vector<int> pending;
      int compl_after = 0;
      for (int i = j; i < 3; ++i) {
        if (at[i] >= 0) continue;
        pending.push_back(ops[i].value);
        if (i > j && ops[i].complemented) ++compl_after;
      }
      Pick p;
      p.no_dcc = dcc_reserved > 0 && compl_after > 0;
      p.prefer_dcc = want_dcc_[k] && dcc_reserved == 0 && !p.no_dcc;

      if (!ops[j].complemented) {
        const auto [src, src_slot] = source(v);
        const bool was_locked = src_slot >= 0 && locked_[src_slot];
        if (src_slot >= 0) locked_[src_slot] = true;
        const int d = pick(p, pending);
        if (src_slot >= 0) locked_[src_slot] = was_locked;
        aap(src, slots_[d].row);
        assign(d, v);
        lock(j, d);
        continue;
      }

      int stage = dcc_copy(v);
      if (stage < 0) {
        const auto [src, src_slot] = source(v);
        const bool was_locked = src_slot >= 0 && locked_[src_slot];
        if (src_slot >= 0) locked_[src_slot] = true;
        stage = pick({.dcc_only = true}, pending);
        if (src_slot >= 0) locked_[src_slot] = was_locked;
        aap(src, slots_[stage].row);
        assign(stage, v);
      }
      const bool stage_locked = locked_[stage];
      locked_[stage] = true;
      const int d = pick(p, pending);
      locked_[stage] = stage_locked;
      slots_[stage].touch = ++clock_;
      aap(Row::dcc_bar(slots_[stage].row.index), slots_[d].row);
      assign(d, kTransient);
      lock(j, d);
    }

    commands.push_back(Command::tra(slots_[at[0]].row, slots_[at[1]].row, slots_[at[2]].row));
    placements.push_back({k, {slots_[at[0]].row, slots_[at[1]].row, slots_[at[2]].row}, commands.size() - 1});
    for (int s : at) {
      assign(s, self);
      locked_[s] = false;
    }
    for (const Operand& o : ops)
      if (!is_constant(o.value) && --uses_[o.value] == 0) kill(o.value);

    for (std::size_t o : outputs_of_[k]) write_output(o, operand(g_.outputs()[o]));
    if (uses_[self] == 0) kill(self);
  }

  const MajGraph& g_;
  const RowMap& rm_;
  bool unbounded_;
  int node_base_;

  std::vector<Slot> slots_;
  std::vector<bool> locked_;
  std::set<int> free_t_, free_dcc_;
  std::uint32_t t_count_ = 0, dcc_count_ = 0;
  std::uint64_t clock_ = 0;

  std::vector<std::optional<Row>> home_;
  std::vector<bool> scratch_home_;
  std::vector<int> uses_;
  std::vector<std::vector<int>> copies_;
  std::uint32_t next_scratch_ = 0;
  std::set<std::uint32_t> free_scratch_;

  std::vector<bool> live_, want_dcc_;
  std::vector<std::vector<std::size_t>> outputs_of_;
};

RowMap unbounded_rowmap(const MajGraph& g) {
  RowMap m;
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < g.input_count(); ++i) m.input_rows.push_back(r++);
  for (std::size_t i = 0; i < g.outputs().size(); ++i) m.output_rows.push_back(r++);
  m.scratch_base = r;
  m.scratch_limit = std::numeric_limits<std::uint32_t>::max();
  return m;
}

std::size_t activations(const std::vector<Command>& cmds) {
  std::size_t n = 0;
  for (const Command& c : cmds) n += c.op == Opcode::Aap ? 2 : 3;
  return n;
}

}  // namespace

std::size_t estimate_cost_static(const MajGraph& graph) {
  const RowMap rm = unbounded_rowmap(graph);
  Scheduler s(graph, rm, true);
  s.run();
  return activations(s.commands);
}

Schedule schedule(const MajGraph& graph, const RowMap& rowmap, const SubarrayConfig& cfg, std::string op_name,
                  unsigned width) {
  cfg.validate();
  if (rowmap.input_rows.size() != graph.input_count() || rowmap.output_rows.size() != graph.outputs().size())
    throw ValidationError("row map does not cover the graph's inputs and outputs");
  std::uint32_t top = 0;
  for (auto r : rowmap.input_rows) top = std::max(top, r + 1);
  for (auto r : rowmap.output_rows) top = std::max(top, r + 1);
  if (top > cfg.data_rows || rowmap.scratch_limit > cfg.data_rows || rowmap.scratch_base > rowmap.scratch_limit)
    throw ValidationError("row map places rows outside the data region");

  Scheduler s(graph, rowmap, false);
  s.run();

  Schedule out;
  out.program.header = {std::move(op_name), width, std::max(top, s.scratch_high)};
  out.program.commands = std::move(s.commands);
  out.placements = std::move(s.placements);
  out.estimated_activations = estimate_cost_static(graph);
  const std::size_t actual = activation_count(out.program).total;
  out.spill_activations = actual > out.estimated_activations ? actual - out.estimated_activations : 0;
  out.scratch_rows = s.scratch_high > rowmap.scratch_base ? s.scratch_high - rowmap.scratch_base : 0;
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic audit

namespace {

// Hash-consed majority expressions. A symbol packs (id << 1) | complemented;
// id 0 is constant 0, ids 1..n are the inputs.
class Symbols {
 public:
  explicit Symbols(std::size_t inputs) : next_(static_cast<std::uint32_t>(1 + inputs)) {}
  std::uint32_t maj(std::array<std::uint32_t, 3> k) {
    std::sort(k.begin(), k.end());
    auto [it, inserted] = table_.try_emplace(k, next_);
    if (inserted) ++next_;
    return it->second << 1;
  }

 private:
  std::map<std::array<std::uint32_t, 3>, std::uint32_t> table_;
  std::uint32_t next_;
};

}  // namespace

void audit_program(const MajGraph& graph, const RowMap& rowmap, const MicroProgram& program) {
  if (rowmap.input_rows.size() != graph.input_count() || rowmap.output_rows.size() != graph.outputs().size())
    throw ValidationError("row map does not cover the graph's inputs and outputs");
  Symbols sym(graph.input_count());

  std::vector<std::uint32_t> node_sym(graph.node_count());
  auto edge_sym = [&](const Edge& e) -> std::uint32_t {
    std::uint32_t s = 0;
    switch (e.ref.kind) {
      case RefKind::Constant: s = e.ref.index; break;
      case RefKind::Input: s = (1 + e.ref.index) << 1; break;
      case RefKind::Node: s = node_sym[e.ref.index]; break;
    }
    return e.complemented ? s ^ 1u : s;
  };
  for (std::size_t k = 0; k < graph.node_count(); ++k) {
    const auto& ops = graph.nodes()[k].operands;
    node_sym[k] = sym.maj({edge_sym(ops[0]), edge_sym(ops[1]), edge_sym(ops[2])});
  }

  std::map<Row, std::uint32_t> state;
  for (std::size_t i = 0; i < graph.input_count(); ++i)
    state[Row::data(rowmap.input_rows[i])] = static_cast<std::uint32_t>((1 + i) << 1);

  auto fail = [&](std::size_t i, const std::string& what) {
    throw ValidationError("line " + std::to_string(program.line_of(i)) + ": " + what);
  };
  auto read = [&](std::size_t i, Row r) -> std::uint32_t {
    if (r.kind == RowKind::Constant) return r.index;
    const bool bar = r.kind == RowKind::DccBar;
    const Row base = bar ? Row::dcc(r.index) : r;
    auto it = state.find(base);
    if (it == state.end()) fail(i, "reads row " + r.token() + " before it holds a value");
    return bar ? it->second ^ 1u : it->second;
  };

  for (std::size_t i = 0; i < program.commands.size(); ++i) {
    const Command& c = program.commands[i];
    if (c.op == Opcode::Aap) {
      const Row dst = c.rows[1];
      if (dst.kind == RowKind::Constant || dst.kind == RowKind::DccBar)
        fail(i, "AAP destination " + dst.token() + " is not writable");
      if (c.rows[0] == dst) fail(i, "AAP source and destination are the same row");
      state[dst] = read(i, c.rows[0]);
    } else {
      for (const Row& r : c.rows)
        if (!r.in_compute_group()) fail(i, "TRA operand " + r.token() + " is outside the compute rows");
      if (c.rows[0] == c.rows[1] || c.rows[0] == c.rows[2] || c.rows[1] == c.rows[2])
        fail(i, "TRA operands must be distinct");
      const std::uint32_t m = sym.maj({read(i, c.rows[0]), read(i, c.rows[1]), read(i, c.rows[2])});
      for (const Row& r : c.rows) state[r] = m;
    }
  }

  for (std::size_t o = 0; o < graph.outputs().size(); ++o) {
    const Row r = Row::data(rowmap.output_rows[o]);
    auto it = state.find(r);
    if (it == state.end() || it->second != edge_sym(graph.outputs()[o]))
      throw ValidationError("output " + std::to_string(o) + " (row " + r.token() +
                            ") does not hold the expected function at program end");
  }
}

}  // namespace pud
