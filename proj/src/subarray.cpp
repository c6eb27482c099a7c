#include "pud/subarray.hpp"

#include "pud/error.hpp"

namespace pud {

Subarray::Subarray(const SubarrayConfig& cfg, ExecPolicy policy) : cfg_(cfg), policy_(policy) {
  cfg_.validate();
  words_ = (cfg_.columns + 63) / 64;
  if (cfg_.columns % 64) tail_mask_ = (std::uint64_t{1} << (cfg_.columns % 64)) - 1;
  bits_.assign(static_cast<std::size_t>(cfg_.total_rows) * words_, 0);
  auto one = raw(physical(Row::constant(true)));
  std::fill(one.begin(), one.end(), ~std::uint64_t{0});
  one.back() &= tail_mask_;
}

std::uint32_t Subarray::physical(Row r) const {
  const std::uint32_t base = cfg_.reserved_base;
  switch (r.kind) {
    case RowKind::Data:
      if (r.index >= cfg_.data_rows)
        throw ValidationError("row " + r.token() + " does not exist (" + std::to_string(cfg_.data_rows) + " data rows)");
      return r.index;
    case RowKind::Compute:
      if (r.index >= SubarrayConfig::kComputeRows) break;
      return base + r.index;
    case RowKind::Dcc:
    case RowKind::DccBar:
      if (r.index >= SubarrayConfig::kDccRows) break;
      return base + SubarrayConfig::kComputeRows + r.index;
    case RowKind::Constant:
      if (r.index > 1) break;
      return base + SubarrayConfig::kComputeRows + SubarrayConfig::kDccRows + r.index;
  }
  throw ValidationError("row " + r.token() + " does not exist");
}

std::vector<bool> Subarray::read_row(Row r) const {
  if (r.kind == RowKind::DccBar) throw RowSafetyError("~DCC aliases are readable only as an AAP source");
  const auto w = raw(physical(r));
  std::vector<bool> out(cfg_.columns);
  for (std::uint32_t c = 0; c < cfg_.columns; ++c) out[c] = (w[c / 64] >> (c % 64)) & 1u;
  return out;
}

void Subarray::write_row(Row r, const std::vector<bool>& bits) {
  if (bits.size() != cfg_.columns)
    throw SizeError("row write of " + std::to_string(bits.size()) + " bits into " + std::to_string(cfg_.columns) +
                    " columns");
  auto w = words(r);
  std::fill(w.begin(), w.end(), 0);
  for (std::uint32_t c = 0; c < cfg_.columns; ++c)
    if (bits[c]) w[c / 64] |= std::uint64_t{1} << (c % 64);
}

bool Subarray::get(Row r, std::uint32_t column) const {
  if (column >= cfg_.columns) throw ValidationError("column " + std::to_string(column) + " out of range");
  return (words(r)[column / 64] >> (column % 64)) & 1u;
}

std::span<const std::uint64_t> Subarray::words(Row r) const {
  if (r.kind == RowKind::DccBar) throw RowSafetyError("~DCC aliases are readable only as an AAP source");
  return raw(physical(r));
}

std::span<std::uint64_t> Subarray::words(Row r) {
  if (r.kind == RowKind::Constant) throw RowSafetyError("constant row " + r.token() + " is read-only");
  if (r.kind == RowKind::DccBar) throw RowSafetyError("~DCC aliases are readable only as an AAP source");
  return raw(physical(r));
}

void Subarray::aap(Row src, Row dst) {
  if (dst.kind == RowKind::Constant) throw RowSafetyError("AAP destination " + dst.token() + " is a constant row");
  if (dst.kind == RowKind::DccBar) throw RowSafetyError("AAP destination " + dst.token() + " is a read-only alias");
  const std::uint32_t s = physical(src);
  const std::uint32_t d = physical(dst);
  if (src == dst) throw RowSafetyError("AAP source and destination are both " + src.token());
  if (src.kind == RowKind::DccBar) {
    kernels::copy_not(policy_, raw(d), raw(s), tail_mask_);
  } else if (s != d) {
    kernels::copy(policy_, raw(d), raw(s));
  }
  ++log_.aap;
  log_.activations += 2;
}

void Subarray::tra(Row a, Row b, Row c) {
  for (const Row& r : {a, b, c})
    if (!r.in_compute_group()) throw RowSafetyError("TRA operand " + r.token() + " is outside the compute rows");
  if (a == b || a == c || b == c) throw RowSafetyError("TRA operands must be three distinct rows");
  kernels::maj3(policy_, raw(physical(a)), raw(physical(b)), raw(physical(c)));
  ++log_.tra;
  log_.activations += 3;
}

ExecutionReport Subarray::run(const MicroProgram& program) {
  ExecutionReport report;
  for (std::size_t i = 0; i < program.commands.size(); ++i) {
    const Command& cmd = program.commands[i];
    try {
      if (cmd.op == Opcode::Aap) {
        aap(cmd.rows[0], cmd.rows[1]);
        ++report.aap;
        report.activations += 2;
      } else {
        tra(cmd.rows[0], cmd.rows[1], cmd.rows[2]);
        ++report.tra;
        report.activations += 3;
      }
    } catch (const Error& e) {
      throw ExecutionError(program.line_of(i), e.what());
    }
  }
  if (!constants_intact()) throw std::logic_error("constant rows changed during execution");
  return report;
}

std::string Subarray::dump(std::uint32_t first, std::uint32_t count) const {
  std::string out;
  for (std::uint32_t r = first; r < first + count; ++r) {
    if (r >= cfg_.total_rows) throw ValidationError("dump past the last row");
    const auto w = raw(r);
    for (std::uint32_t c = 0; c < cfg_.columns; ++c) out += ((w[c / 64] >> (c % 64)) & 1u) ? '1' : '0';
    out += '\n';
  }
  return out;
}

bool Subarray::constants_intact() const {
  const auto zero = raw(physical(Row::constant(false)));
  const auto one = raw(physical(Row::constant(true)));
  for (std::size_t i = 0; i < words_; ++i) {
    const std::uint64_t full = i + 1 == words_ ? tail_mask_ : ~std::uint64_t{0};
    if (zero[i] != 0 || one[i] != full) return false;
  }
  return true;
}

}  // namespace pud
