#include <gtest/gtest.h>

#include <random>

#include "pud/codegen.hpp"
#include "pud/error.hpp"
#include "pud/kernels.hpp"
#include "pud/subarray.hpp"
#include "pud/synthesis.hpp"
#include "test_util.hpp"

using namespace pud;
using pud::testing::bits_of;
using pud::testing::random_graph;

namespace {

SubarrayConfig small(std::uint32_t columns = 64) { return SubarrayConfig::with_columns(columns); }

std::vector<bool> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<bool> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = rng() & 1u;
  return b;
}

MicroProgram and_program() {
  MicroProgram p;
  p.header = {"and", 1, 3};
  p.commands = {Command::aap(Row::data(0), Row::compute(0)), Command::aap(Row::data(1), Row::compute(1)),
                Command::aap(Row::constant(false), Row::compute(2)),
                Command::tra(Row::compute(0), Row::compute(1), Row::compute(2)),
                Command::aap(Row::compute(0), Row::data(2))};
  return p;
}

}  // namespace

TEST(Kernels, SerialAndParallelAgree) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 7u, 255u, 256u, 1000u}) {
    std::vector<std::uint64_t> a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = rng(), b[i] = rng(), c[i] = rng();
    auto a2 = a, b2 = b, c2 = c;
    kernels::serial::maj3(a, b, c);
    kernels::parallel::maj3(a2, b2, c2);
    EXPECT_EQ(a, a2);
    EXPECT_EQ(b, b2);
    EXPECT_EQ(c, c2);

    std::vector<std::uint64_t> d1(n), d2(n);
    kernels::serial::copy_not(d1, a, 0xFFu);
    kernels::parallel::copy_not(d2, a, 0xFFu);
    EXPECT_EQ(d1, d2);
    EXPECT_EQ(d1.back() & ~0xFFull, 0u);
    kernels::serial::copy(d1, b);
    kernels::parallel::copy(d2, b);
    EXPECT_EQ(d1, d2);
    EXPECT_EQ(d1, b);
  }
}

TEST(Subarray, NewStateHasConstantsAndZeros) {
  Subarray s(SubarrayConfig{});
  const auto one = s.read_row(Row::constant(true));
  EXPECT_EQ(std::count(one.begin(), one.end(), true), 65536);
  Subarray t(small());
  EXPECT_EQ(t.read_row(Row::data(0)).size(), 64u);
  EXPECT_EQ(t.words_per_row(), 1u);
  const auto zero = t.read_row(Row::constant(false));
  EXPECT_EQ(std::count(zero.begin(), zero.end(), true), 0);
  EXPECT_EQ(t.read_row(Row::compute(2)), std::vector<bool>(64, false));
  EXPECT_TRUE(t.constants_intact());
}

TEST(Subarray, OverlappingGroupsRejected) {
  SubarrayConfig cfg = small();
  cfg.reserved_base = 100;
  EXPECT_THROW(Subarray{cfg}, ValidationError);
}

TEST(Subarray, AapCopiesAndComplements) {
  std::mt19937_64 rng(3);
  Subarray s(small(100));
  s.aap(Row::constant(true), Row::compute(0));
  EXPECT_EQ(s.read_row(Row::compute(0)), std::vector<bool>(100, true));

  const auto p = random_bits(rng, 100);
  s.write_row(Row::dcc(0), p);
  s.aap(Row::dcc_bar(0), Row::compute(1));
  auto expect = p;
  expect.flip();
  EXPECT_EQ(s.read_row(Row::compute(1)), expect);
  EXPECT_EQ(s.read_row(Row::dcc(0)), p);
  EXPECT_TRUE(s.constants_intact());
}

TEST(Subarray, RowSafety) {
  Subarray s(small());
  EXPECT_THROW(s.aap(Row::data(0), Row::constant(false)), RowSafetyError);
  EXPECT_THROW(s.aap(Row::data(0), Row::dcc_bar(1)), RowSafetyError);
  EXPECT_THROW(s.aap(Row::data(3), Row::data(3)), RowSafetyError);
  EXPECT_THROW(s.write_row(Row::constant(true), std::vector<bool>(64)), RowSafetyError);
  EXPECT_THROW(s.write_row(Row::data(0), std::vector<bool>(63)), SizeError);
  EXPECT_THROW(s.tra(Row::compute(0), Row::compute(0), Row::compute(1)), RowSafetyError);
  EXPECT_THROW(s.tra(Row::compute(0), Row::data(0), Row::compute(1)), RowSafetyError);
  EXPECT_THROW(s.tra(Row::compute(0), Row::constant(true), Row::compute(1)), RowSafetyError);
  EXPECT_TRUE(s.constants_intact());
}

TEST(Subarray, WriteThenReadIsExact) {
  std::mt19937_64 rng(4);
  Subarray s(small(130));
  const auto bits = random_bits(rng, 130);
  s.write_row(Row::data(0), bits);
  EXPECT_EQ(s.read_row(Row::data(0)), bits);
  EXPECT_EQ(s.read_row(Row::constant(false)), std::vector<bool>(130, false));
}

TEST(Subarray, TraIsMajorityForAllTriplesAndDestructive) {
  Subarray s(small(8));
  std::array<std::vector<bool>, 3> in;
  for (auto& r : in) r.assign(8, false);
  for (unsigned col = 0; col < 8; ++col)
    for (unsigned k = 0; k < 3; ++k) in[k][col] = (col >> k) & 1u;
  s.write_row(Row::compute(1), in[0]);
  s.write_row(Row::dcc(1), in[1]);
  s.write_row(Row::compute(3), in[2]);
  s.tra(Row::compute(1), Row::dcc(1), Row::compute(3));
  const auto r = s.read_row(Row::compute(1));
  for (unsigned col = 0; col < 8; ++col) EXPECT_EQ(r[col], std::popcount(col) >= 2) << col;
  EXPECT_EQ(s.read_row(Row::dcc(1)), r);
  EXPECT_EQ(s.read_row(Row::compute(3)), r);
}

TEST(Subarray, RunsAndProgramOnRandomColumns) {
  std::mt19937_64 rng(5);
  Subarray s(small());
  const auto a = random_bits(rng, 64), b = random_bits(rng, 64);
  s.write_row(Row::data(0), a);
  s.write_row(Row::data(1), b);
  const auto report = s.run(and_program());
  EXPECT_EQ(report, (ExecutionReport{4, 1, 11}));
  EXPECT_EQ(s.log(), report);
  const auto out = s.read_row(Row::data(2));
  for (int c = 0; c < 64; ++c) EXPECT_EQ(out[c], a[c] && b[c]);
}

TEST(Subarray, SingleColumnAnd) {
  Subarray s(small(1));
  s.write_row(Row::data(0), {true});
  s.write_row(Row::data(1), {true});
  s.run(and_program());
  EXPECT_TRUE(s.get(Row::data(2), 0));
}

TEST(Subarray, FailingCommandReportsItsLine) {
  SubarrayConfig cfg = small();
  cfg.total_rows = 40;
  cfg.data_rows = 32;
  cfg.reserved_base = 32;
  Subarray s(cfg);
  const auto p = parse_program("UP/1\nop=x width=1 data_rows=2\nAAP D0 T0\n# bad row next\nAAP T0 D9999\nEND\n");
  try {
    s.run(p);
    FAIL();
  } catch (const ExecutionError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(Subarray, ScheduledGraphsMatchEvaluatorExhaustively) {
  std::mt19937_64 rng(6);
  SubarrayConfig cfg = SubarrayConfig::with_columns(256);
  for (int trial = 0; trial < 120; ++trial) {
    const unsigned n = 1 + trial % 8;
    const auto g = random_graph(rng, n, 4 + trial % 30, 1 + trial % 4);
    const auto rm = allocate_rows(g, cfg);
    const auto sched = schedule(g, rm, cfg);
    Subarray s(cfg);
    const std::uint32_t lanes = 1u << n;
    for (unsigned i = 0; i < n; ++i) {
      std::vector<bool> row(cfg.columns, false);
      for (std::uint32_t lane = 0; lane < lanes; ++lane) row[lane] = (lane >> i) & 1u;
      s.write_row(Row::data(rm.input_rows[i]), row);
    }
    s.run(sched.program);
    for (std::uint32_t lane = 0; lane < lanes; ++lane) {
      const auto expect = evaluate(g, bits_of(lane, n));
      for (std::size_t o = 0; o < expect.size(); ++o)
        ASSERT_EQ(s.get(Row::data(rm.output_rows[o]), lane), expect[o]) << "trial " << trial << " lane " << lane;
    }
  }
}

TEST(Subarray, ColumnIndependence) {
  std::mt19937_64 rng(8);
  const std::uint32_t cols = 16;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_graph(rng, 6, 25, 3);
    SubarrayConfig cfg = SubarrayConfig::with_columns(cols);
    const auto rm = allocate_rows(g, cfg);
    const auto prog = schedule(g, rm, cfg).program;
    std::vector<std::vector<bool>> inputs;
    Subarray wide(cfg);
    for (auto r : rm.input_rows) {
      inputs.push_back(random_bits(rng, cols));
      wide.write_row(Row::data(r), inputs.back());
    }
    wide.run(prog);
    for (std::uint32_t c = 0; c < cols; ++c) {
      Subarray narrow(SubarrayConfig::with_columns(1));
      for (std::size_t i = 0; i < rm.input_rows.size(); ++i) narrow.write_row(Row::data(rm.input_rows[i]), {inputs[i][c]});
      narrow.run(prog);
      for (std::uint32_t r = 0; r < cfg.data_rows; ++r) ASSERT_EQ(narrow.get(Row::data(r), 0), wide.get(Row::data(r), c));
    }
  }
}

TEST(Subarray, SerialAndParallelPoliciesAgree) {
  std::mt19937_64 rng(12);
  const auto g = optimize(lower_to_maj(pud::testing::ripple_adder(6)), 2).graph;
  SubarrayConfig cfg = SubarrayConfig::with_columns(40000);
  const auto rm = allocate_rows(g, cfg);
  const auto prog = schedule(g, rm, cfg).program;
  Subarray a(cfg, ExecPolicy::Serial), b(cfg, ExecPolicy::Parallel);
  for (auto r : rm.input_rows) {
    const auto bits = random_bits(rng, cfg.columns);
    a.write_row(Row::data(r), bits);
    b.write_row(Row::data(r), bits);
  }
  a.run(prog);
  b.run(prog);
  EXPECT_EQ(a.dump(0, cfg.total_rows), b.dump(0, cfg.total_rows));
}

TEST(Subarray, DumpIsRowMajorZeroOne) {
  Subarray s(small(4));
  s.write_row(Row::data(1), {true, false, true, true});
  EXPECT_EQ(s.dump(0, 2), "0000\n1011\n");
}
