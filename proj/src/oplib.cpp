#include "pud/oplib.hpp"

#include <bit>
#include <random>

#include "pud/error.hpp"
#include "pud/subarray.hpp"
#include "pud/transpose.hpp"

namespace pud {
namespace {

struct OpName {
  OpKind kind;
  std::string_view name;
};

constexpr std::array<OpName, 16> kNames = {{
    {OpKind::AndN, "and_n"},
    {OpKind::OrN, "or_n"},
    {OpKind::XorN, "xor_n"},
    {OpKind::Eq, "eq"},
    {OpKind::Neq, "neq"},
    {OpKind::Gt, "gt"},
    {OpKind::Ge, "ge"},
    {OpKind::Max, "max"},
    {OpKind::Min, "min"},
    {OpKind::Add, "add"},
    {OpKind::Sub, "sub"},
    {OpKind::Mul, "mul"},
    {OpKind::Div, "div"},
    {OpKind::IfThenElse, "if_then_else"},
    {OpKind::Bitcount, "bitcount"},
    {OpKind::Relu, "relu"},
}};

constexpr std::uint64_t mask(unsigned w) { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }

using Bits = std::vector<Ref>;

struct Circuit {
  NetlistBuilder nb;

  Ref mux(Ref s, Ref x, Ref y) { return nb.or_(nb.and_(s, x), nb.and_(nb.not_(s), y)); }

  // Returns the sum bits and the carry out.
  std::pair<Bits, Ref> add(const Bits& a, const Bits& b, Ref carry) {
    Bits sum;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Ref t = nb.xor_(a[i], b[i]);
      sum.push_back(nb.xor_(t, carry));
      carry = nb.or_(nb.and_(a[i], b[i]), nb.and_(t, carry));
    }
    return {sum, carry};
  }

  // a - b as a + ~b + 1; the second result is the borrow (a < b).
  std::pair<Bits, Ref> sub(const Bits& a, const Bits& b) {
    Bits nb_bits;
    for (Ref x : b) nb_bits.push_back(nb.not_(x));
    auto [diff, carry] = add(a, nb_bits, Ref::constant(true));
    return {diff, nb.not_(carry)};
  }

  Ref greater(const Bits& a, const Bits& b) {
    Ref g = Ref::constant(false);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Ref same = nb.not_(nb.xor_(a[i], b[i]));
      g = nb.or_(nb.and_(a[i], nb.not_(b[i])), nb.and_(same, g));
    }
    return g;
  }

  Bits select(Ref s, const Bits& x, const Bits& y) {
    Bits out;
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back(mux(s, x[i], y[i]));
    return out;
  }
};

void check_width(unsigned width) {
  if (width < 1 || width > kMaxOpWidth)
    throw ValidationError("operation width " + std::to_string(width) + " outside 1..64");
}

}  // namespace

std::string_view to_string(OpKind kind) {
  for (const auto& n : kNames)
    if (n.kind == kind) return n.name;
  return "?";
}

std::optional<OpKind> parse_op(std::string_view name) {
  for (const auto& n : kNames)
    if (n.name == name) return n.kind;
  return std::nullopt;
}

bool is_n_input(OpKind kind) { return kind == OpKind::AndN || kind == OpKind::OrN || kind == OpKind::XorN; }

unsigned OpSignature::input_bits() const {
  unsigned n = 0;
  for (unsigned w : inputs) n += w;
  return n;
}

unsigned OpSignature::output_bits() const {
  unsigned n = 0;
  for (unsigned w : outputs) n += w;
  return n;
}

OpSignature signature(OpKind kind, unsigned width, unsigned n_inputs) {
  check_width(width);
  const unsigned w = width;
  switch (kind) {
    case OpKind::AndN:
    case OpKind::OrN:
    case OpKind::XorN:
      if (n_inputs < 2) throw ValidationError("N-input operations need at least 2 inputs");
      return {std::vector<unsigned>(n_inputs, w), {w}};
    case OpKind::Eq:
    case OpKind::Neq:
    case OpKind::Gt:
    case OpKind::Ge: return {{w, w}, {1}};
    case OpKind::Max:
    case OpKind::Min:
    case OpKind::Mul:
    case OpKind::Div: return {{w, w}, {w}};
    case OpKind::Add:
    case OpKind::Sub: return {{w, w}, {w, 1}};
    case OpKind::IfThenElse: return {{1, w, w}, {w}};
    case OpKind::Bitcount: return {{w}, {static_cast<unsigned>(std::bit_width(w))}};
    case OpKind::Relu: return {{w}, {w}};
  }
  throw ValidationError("unknown operation");
}

Netlist build_netlist(OpKind kind, unsigned width, unsigned n_inputs) {
  const OpSignature sig = signature(kind, width, n_inputs);
  Circuit c;
  auto& nb = c.nb;
  std::vector<Bits> in;
  for (std::size_t k = 0; k < sig.inputs.size(); ++k)
    in.push_back(nb.inputs(std::string(1, static_cast<char>('a' + k)), sig.inputs[k]));
  const unsigned w = width;
  Bits out;

  switch (kind) {
    case OpKind::AndN:
    case OpKind::OrN:
    case OpKind::XorN: {
      const GateKind g = kind == OpKind::AndN ? GateKind::And : kind == OpKind::OrN ? GateKind::Or : GateKind::Xor;
      out = in[0];
      for (std::size_t k = 1; k < in.size(); ++k)
        for (unsigned i = 0; i < w; ++i) out[i] = nb.gate(g, out[i], in[k][i]);
      break;
    }
    case OpKind::Eq: {
      Ref e = nb.not_(nb.xor_(in[0][0], in[1][0]));
      for (unsigned i = 1; i < w; ++i) e = nb.and_(e, nb.not_(nb.xor_(in[0][i], in[1][i])));
      out = {e};
      break;
    }
    case OpKind::Neq: {
      Ref d = nb.xor_(in[0][0], in[1][0]);
      for (unsigned i = 1; i < w; ++i) d = nb.or_(d, nb.xor_(in[0][i], in[1][i]));
      out = {d};
      break;
    }
    case OpKind::Gt: out = {c.greater(in[0], in[1])}; break;
    case OpKind::Ge: out = {nb.not_(c.greater(in[1], in[0]))}; break;
    case OpKind::Max: out = c.select(c.greater(in[0], in[1]), in[0], in[1]); break;
    case OpKind::Min: out = c.select(c.greater(in[0], in[1]), in[1], in[0]); break;
    case OpKind::Add: {
      auto [sum, carry] = c.add(in[0], in[1], Ref::constant(false));
      out = sum;
      out.push_back(carry);
      break;
    }
    case OpKind::Sub: {
      auto [diff, borrow] = c.sub(in[0], in[1]);
      out = diff;
      out.push_back(borrow);
      break;
    }
    case OpKind::Mul: {
      // Shift-and-add; the shift is an index offset, so row i only touches bits >= i.
      Bits acc(w, Ref::constant(false));
      for (unsigned i = 0; i < w; ++i) {
        Ref carry = Ref::constant(false);
        for (unsigned j = i; j < w; ++j) {
          const Ref p = nb.and_(in[0][j - i], in[1][i]);
          const Ref t = nb.xor_(acc[j], p);
          const Ref s = nb.xor_(t, carry);
          carry = nb.or_(nb.and_(acc[j], p), nb.and_(t, carry));
          acc[j] = s;
        }
      }
      out = acc;
      break;
    }
    case OpKind::Div: {
      // Restoring division. The partial remainder stays below the divisor, so
      // w bits suffice between steps; each trial subtraction uses w + 1 bits.
      Bits rem(w, Ref::constant(false));
      Bits divisor = in[1];
      divisor.push_back(Ref::constant(false));
      Bits quotient(w);
      for (unsigned step = 0; step < w; ++step) {
        const unsigned i = w - 1 - step;
        Bits shifted = {in[0][i]};
        shifted.insert(shifted.end(), rem.begin(), rem.end());
        auto [diff, borrow] = c.sub(shifted, divisor);
        const Ref q = nb.not_(borrow);
        quotient[i] = q;
        rem = c.select(q, Bits(diff.begin(), diff.begin() + w), Bits(shifted.begin(), shifted.begin() + w));
      }
      out = quotient;
      break;
    }
    case OpKind::IfThenElse: out = c.select(in[0][0], in[1], in[2]); break;
    case OpKind::Bitcount: {
      Bits count(sig.outputs[0], Ref::constant(false));
      for (unsigned i = 0; i < w; ++i) {
        Ref carry = in[0][i];
        for (auto& bit : count) {
          const Ref s = nb.xor_(bit, carry);
          carry = nb.and_(bit, carry);
          bit = s;
        }
      }
      out = count;
      break;
    }
    case OpKind::Relu: {
      const Ref keep = nb.not_(in[0][w - 1]);
      for (unsigned i = 0; i < w; ++i) out.push_back(nb.and_(in[0][i], keep));
      break;
    }
  }
  return nb.build(out);
}

std::vector<std::uint64_t> oracle(OpKind kind, unsigned width, std::span<const std::uint64_t> x) {
  const unsigned n = is_n_input(kind) ? static_cast<unsigned>(x.size()) : kDefaultNInputs;
  const OpSignature sig = signature(kind, width, std::max(n, 2u));
  if (x.size() != sig.inputs.size())
    throw ArityError(std::string(to_string(kind)) + " takes " + std::to_string(sig.inputs.size()) + " operands, got " +
                     std::to_string(x.size()));
  const std::uint64_t m = mask(width);
  auto a = [&](std::size_t k) { return x[k] & mask(sig.inputs[k]); };
  switch (kind) {
    case OpKind::AndN: {
      std::uint64_t v = m;
      for (std::size_t k = 0; k < x.size(); ++k) v &= a(k);
      return {v};
    }
    case OpKind::OrN: {
      std::uint64_t v = 0;
      for (std::size_t k = 0; k < x.size(); ++k) v |= a(k);
      return {v};
    }
    case OpKind::XorN: {
      std::uint64_t v = 0;
      for (std::size_t k = 0; k < x.size(); ++k) v ^= a(k);
      return {v};
    }
    case OpKind::Eq: return {a(0) == a(1) ? 1u : 0u};
    case OpKind::Neq: return {a(0) != a(1) ? 1u : 0u};
    case OpKind::Gt: return {a(0) > a(1) ? 1u : 0u};
    case OpKind::Ge: return {a(0) >= a(1) ? 1u : 0u};
    case OpKind::Max: return {std::max(a(0), a(1))};
    case OpKind::Min: return {std::min(a(0), a(1))};
    case OpKind::Add: {
      const std::uint64_t s = (a(0) + a(1)) & m;
      const bool carry = width == 64 ? s < a(0) : ((a(0) + a(1)) >> width) != 0;
      return {s, carry ? 1u : 0u};
    }
    case OpKind::Sub: return {(a(0) - a(1)) & m, a(0) < a(1) ? 1u : 0u};
    case OpKind::Mul: return {(a(0) * a(1)) & m};
    case OpKind::Div: return {a(1) == 0 ? m : a(0) / a(1)};
    case OpKind::IfThenElse: return {a(0) ? a(1) : a(2)};
    case OpKind::Bitcount: return {static_cast<std::uint64_t>(std::popcount(a(0)))};
    case OpKind::Relu: return {(a(0) >> (width - 1)) & 1u ? 0u : a(0)};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Execution

namespace {

std::vector<std::vector<std::uint64_t>> run_lanes(const MicroProgram& program, const OpSignature& sig,
                                                  const RowMap& rm,
                                                  const std::vector<std::vector<std::uint64_t>>& inputs,
                                                  const SubarrayConfig& cfg, ExecPolicy policy) {
  if (inputs.size() != sig.inputs.size())
    throw ArityError("expected " + std::to_string(sig.inputs.size()) + " operands, got " +
                     std::to_string(inputs.size()));
  const std::size_t lanes = inputs.empty() ? 0 : inputs[0].size();
  for (const auto& v : inputs)
    if (v.size() != lanes) throw ValidationError("operands have different lane counts");
  if (lanes > cfg.columns)
    throw CapacityError(std::to_string(lanes) + " lanes exceed " + std::to_string(cfg.columns) + " columns");
  if (program.header.data_rows > cfg.data_rows)
    throw CapacityError("program uses " + std::to_string(program.header.data_rows) + " data rows, config has " +
                        std::to_string(cfg.data_rows));

  Subarray s(cfg, policy);
  std::size_t bit = 0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    to_vertical({inputs[k], sig.inputs[k]}, s, rm.input_rows[bit], policy);
    bit += sig.inputs[k];
  }
  s.run(program);
  std::vector<std::vector<std::uint64_t>> out;
  bit = 0;
  for (unsigned w : sig.outputs) {
    out.push_back(to_horizontal(s, rm.output_rows[bit], w, static_cast<std::uint32_t>(lanes), policy).values);
    bit += w;
  }
  return out;
}

RowMap layout(const OpSignature& sig) {
  RowMap rm;
  std::uint32_t r = 0;
  for (unsigned i = 0; i < sig.input_bits(); ++i) rm.input_rows.push_back(r++);
  for (unsigned i = 0; i < sig.output_bits(); ++i) rm.output_rows.push_back(r++);
  rm.scratch_base = r;
  return rm;
}

std::uint64_t seed_for(OpKind kind, unsigned width, unsigned n) {
  return 0x5EEDull * 1000003u + static_cast<unsigned>(kind) * 131u + width * 7u + n;
}

void verify(CompiledOp& op, const SubarrayConfig& cfg) {
  const unsigned bits = op.sig.input_bits();
  const bool exhaustive = bits <= 16;
  const std::uint64_t total = exhaustive ? std::uint64_t{1} << bits : 4096;
  std::mt19937_64 rng(seed_for(op.kind, op.width, op.n_inputs));
  const std::uint64_t batch = cfg.columns;

  for (std::uint64_t first = 0; first < total; first += batch) {
    const std::uint64_t count = std::min(batch, total - first);
    std::vector<std::vector<std::uint64_t>> in(op.sig.inputs.size(), std::vector<std::uint64_t>(count));
    for (std::uint64_t l = 0; l < count; ++l) {
      std::uint64_t lane = first + l;
      for (std::size_t k = 0; k < in.size(); ++k) {
        const unsigned w = op.sig.inputs[k];
        if (exhaustive) {
          in[k][l] = lane & mask(w);
          lane >>= w;
        } else {
          in[k][l] = rng() & mask(w);
        }
      }
    }
    const auto out = execute_op(op, in, cfg);
    std::vector<std::uint64_t> operands(in.size());
    for (std::uint64_t l = 0; l < count; ++l) {
      for (std::size_t k = 0; k < in.size(); ++k) operands[k] = in[k][l];
      const auto expect = oracle(op.kind, op.width, operands);
      for (std::size_t k = 0; k < expect.size(); ++k)
        if (out[k][l] != expect[k])
          throw ValidationError(std::string(to_string(op.kind)) + " width " + std::to_string(op.width) +
                                ": compiled program disagrees with the oracle");
    }
  }
  op.verified_lanes = total;
  op.verified_exhaustively = exhaustive;
}

}  // namespace

CompiledOp compile_op(OpKind kind, unsigned width, const SubarrayConfig& cfg, unsigned effort, unsigned n_inputs) {
  cfg.validate();
  CompiledOp op;
  op.kind = kind;
  op.width = width;
  op.n_inputs = is_n_input(kind) ? n_inputs : kDefaultNInputs;
  op.effort = effort;
  op.sig = signature(kind, width, op.n_inputs);

  const MajGraph naive = lower_to_maj(build_netlist(kind, width, op.n_inputs));
  auto result = optimize(naive, effort);
  op.graph = std::move(result.graph);
  op.report = std::move(result.report);
  op.rowmap = allocate_rows(op.graph, cfg);
  op.schedule = schedule(op.graph, op.rowmap, cfg, std::string(to_string(kind)), width);

  if (effort > 0) {
    auto fallback = schedule(naive, op.rowmap, cfg, std::string(to_string(kind)), width);
    if (activation_count(fallback.program).total < activation_count(op.schedule.program).total) {
      op.graph = naive;
      op.schedule = std::move(fallback);
      op.kept_unoptimized = true;
    }
  }

  audit_program(op.graph, op.rowmap, op.schedule.program);
  verify(op, cfg);
  return op;
}

std::vector<std::vector<std::uint64_t>> execute_op(const CompiledOp& op,
                                                   const std::vector<std::vector<std::uint64_t>>& inputs,
                                                   const SubarrayConfig& cfg, ExecPolicy policy) {
  return run_lanes(op.program(), op.sig, op.rowmap, inputs, cfg, policy);
}

std::vector<std::vector<std::uint64_t>> execute_program(const MicroProgram& program, const OpSignature& sig,
                                                        const std::vector<std::vector<std::uint64_t>>& inputs,
                                                        const SubarrayConfig& cfg, ExecPolicy policy) {
  return run_lanes(program, sig, layout(sig), inputs, cfg, policy);
}

}  // namespace pud
