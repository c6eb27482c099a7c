#include <gtest/gtest.h>

#include <random>

#include "pud/codegen.hpp"
#include "pud/error.hpp"
#include "pud/synthesis.hpp"
#include "test_util.hpp"

using namespace pud;
using pud::testing::random_graph;
using pud::testing::ripple_adder;

namespace {

Edge in(std::uint32_t i, bool c = false) { return {Ref::input(i), c}; }

MajGraph and_graph() {
  return MajGraph({"a", "b"}, {MajNode{{in(0), in(1), Edge{Ref::constant(false), false}}}}, {Edge{Ref::node(0), false}});
}

MajGraph not_graph() { return MajGraph({"a"}, {}, {in(0, true)}); }

}  // namespace

TEST(Config, DefaultsValidate) {
  SubarrayConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.total_rows, 512u);
  EXPECT_EQ(cfg.columns, 65536u);
}

TEST(Config, OverlapsRejected) {
  SubarrayConfig cfg;
  cfg.reserved_base = 500;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.data_rows = 505;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.columns = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Rows, TokensRoundTrip) {
  for (const Row r : {Row::data(0), Row::data(503), Row::compute(3), Row::dcc(1), Row::dcc_bar(0), Row::constant(true)})
    EXPECT_EQ(parse_row(r.token()), r);
  for (const char* bad : {"T4", "DCC2", "~T0", "C2", "D", "Dx", "D-1", "~DCC", "X0", ""}) EXPECT_FALSE(parse_row(bad)) << bad;
}

TEST(AllocateRows, WorkedExamples) {
  SubarrayConfig cfg;
  const auto m = allocate_rows(and_graph(), cfg);
  EXPECT_EQ(m.input_rows.size() + m.output_rows.size(), 3u);
  EXPECT_EQ(m.scratch_base, 3u);

  const auto adder = lower_to_maj(ripple_adder(4));
  EXPECT_EQ(allocate_rows(adder, cfg).scratch_base, 13u);

  cfg.data_rows = 4;
  try {
    allocate_rows(adder, cfg);
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("short by 9"), std::string::npos) << e.what();
  }
}

TEST(Schedule, MajWithConstantIsFiveCommands) {
  SubarrayConfig cfg;
  const auto g = and_graph();
  const auto rm = allocate_rows(g, cfg);
  const auto s = schedule(g, rm, cfg, "and", 1);
  const std::vector<Command> expect = {
      Command::aap(Row::data(0), Row::compute(0)),         Command::aap(Row::data(1), Row::compute(1)),
      Command::aap(Row::constant(false), Row::compute(2)), Command::tra(Row::compute(0), Row::compute(1), Row::compute(2)),
      Command::aap(Row::compute(0), Row::data(2)),
  };
  EXPECT_EQ(s.program.commands, expect);
  EXPECT_EQ(activation_count(s.program), (ActivationCount{4, 1, 11}));
  EXPECT_EQ(estimate_cost_static(g), 11u);
  EXPECT_EQ(s.estimated_activations, 11u);
  EXPECT_EQ(s.spill_activations, 0u);
}

TEST(Schedule, NotIsTwoCommandsThroughDcc) {
  SubarrayConfig cfg;
  const auto g = not_graph();
  const auto s = schedule(g, allocate_rows(g, cfg), cfg);
  const std::vector<Command> expect = {Command::aap(Row::data(0), Row::dcc(0)), Command::aap(Row::dcc_bar(0), Row::data(1))};
  EXPECT_EQ(s.program.commands, expect);
  EXPECT_EQ(activation_count(s.program), (ActivationCount{2, 0, 4}));
}

TEST(Schedule, EmptyGraphCostsCopiesOnly) {
  const MajGraph g({"a", "b"}, {}, {in(1), in(0), Edge{Ref::constant(true), false}});
  EXPECT_EQ(estimate_cost_static(g), 6u);
}

TEST(Schedule, EmptyProgramCountsZero) { EXPECT_EQ(activation_count(MicroProgram{}), (ActivationCount{0, 0, 0})); }

TEST(Schedule, RandomGraphsPassAuditAndStayWithinEstimateSlack) {
  std::mt19937_64 rng(41);
  SubarrayConfig cfg;
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = random_graph(rng, 1 + trial % 8, 5 + trial % 40, 1 + trial % 5);
    const auto rm = allocate_rows(g, cfg);
    const auto s = schedule(g, rm, cfg);
    ASSERT_NO_THROW(audit_program(g, rm, s.program)) << "trial " << trial;
    const auto total = activation_count(s.program).total;
    ASSERT_LE(s.estimated_activations, total) << "trial " << trial;
    ASSERT_EQ(total, s.estimated_activations + s.spill_activations);
    for (const Command& c : s.program.commands) {
      if (c.op == Opcode::Aap) {
        ASSERT_NE(c.rows[1].kind, RowKind::Constant);
        ASSERT_NE(c.rows[1].kind, RowKind::DccBar);
      } else {
        for (const Row& r : c.rows) ASSERT_TRUE(r.in_compute_group());
      }
    }
  }
}

TEST(Schedule, Deterministic) {
  SubarrayConfig cfg;
  const auto g = optimize(lower_to_maj(ripple_adder(8)), 2).graph;
  const auto rm = allocate_rows(g, cfg);
  EXPECT_EQ(to_text(schedule(g, rm, cfg, "add", 8).program), to_text(schedule(g, rm, cfg, "add", 8).program));
}

TEST(Schedule, ScratchExhaustionIsCapacityError) {
  std::mt19937_64 rng(2);
  const auto g = random_graph(rng, 8, 200, 8);
  SubarrayConfig cfg;
  cfg.data_rows = 16;
  const auto rm = allocate_rows(g, cfg);
  bool spilled = schedule(g, allocate_rows(g, SubarrayConfig{}), SubarrayConfig{}).scratch_rows > 0;
  if (spilled) {
    cfg.data_rows = 16;
    const auto tight = allocate_rows(g, cfg);
    EXPECT_THROW(schedule(g, RowMap{tight.input_rows, tight.output_rows, tight.scratch_base, tight.scratch_base}, cfg),
                 CapacityError);
  }
  (void)rm;
}

TEST(Audit, DetectsClobberedOutput) {
  SubarrayConfig cfg;
  const auto g = and_graph();
  const auto rm = allocate_rows(g, cfg);
  auto p = schedule(g, rm, cfg).program;
  p.commands.push_back(Command::aap(Row::constant(true), Row::data(2)));
  EXPECT_THROW(audit_program(g, rm, p), ValidationError);
}

TEST(Audit, DetectsReadOfUnwrittenRow) {
  SubarrayConfig cfg;
  const auto g = and_graph();
  const auto rm = allocate_rows(g, cfg);
  auto p = schedule(g, rm, cfg).program;
  p.commands.insert(p.commands.begin(), Command::aap(Row::compute(3), Row::data(2)));
  try {
    audit_program(g, rm, p);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ProgramText, RoundTripIsByteIdentical) {
  SubarrayConfig cfg;
  const auto g = optimize(lower_to_maj(ripple_adder(4)), 2).graph;
  const auto s = schedule(g, allocate_rows(g, cfg), cfg, "add", 4);
  const auto text = to_text(s.program);
  const auto parsed = parse_program(text);
  EXPECT_EQ(parsed.header, s.program.header);
  EXPECT_EQ(parsed.commands, s.program.commands);
  EXPECT_EQ(to_text(parsed), text);
  EXPECT_EQ(text.substr(0, 5), "UP/1\n");
}

TEST(ProgramText, CommentsAndLineNumbers) {
  const auto p = parse_program("# header comment\nUP/1\nop=x width=1 data_rows=3\n\nAAP D0 T0 # copy\nTRA T0 T1 DCC0\nEND\n");
  ASSERT_EQ(p.commands.size(), 2u);
  EXPECT_EQ(p.line_of(0), 5u);
  EXPECT_EQ(p.line_of(1), 6u);
}

TEST(ProgramText, RejectsUnknownTokens) {
  auto line_of_error = [](const char* text) -> std::size_t {
    try {
      parse_program(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of_error("UP/2\n"), 1u);
  EXPECT_EQ(line_of_error("UP/1\nop=a width=1\n"), 2u);
  EXPECT_EQ(line_of_error("UP/1\nop=a width=1 data_rows=2 extra=3\n"), 2u);
  EXPECT_EQ(line_of_error("UP/1\nop=a width=1 data_rows=2\nAAP D0 T9\nEND\n"), 3u);
  EXPECT_EQ(line_of_error("UP/1\nop=a width=1 data_rows=2\nNOP\nEND\n"), 3u);
  EXPECT_EQ(line_of_error("UP/1\nop=a width=1 data_rows=2\nTRA T0 T1\nEND\n"), 3u);
  EXPECT_EQ(line_of_error("UP/1\nop=a width=1 data_rows=2\nAAP D0 T0\n"), 3u);
  EXPECT_EQ(line_of_error("UP/1\nop=a width=1 data_rows=2\nEND\nAAP D0 T0\n"), 4u);
}
