#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pud/cli.hpp"
#include "pud/error.hpp"

namespace pud {
namespace {

namespace fs = std::filesystem;

TEST(Config, KeysApply) {
  const RunConfig c = parse_config(
      "# geometry\n"
      "subarray.rows = 256\n"
      "subarray.columns=128\n"
      "\n"
      "cost.t_aap_ns = 50   # faster copies\n"
      "cost.banks = 4\n"
      "classify.mpki_high = 20\n");
  EXPECT_EQ(c.subarray.total_rows, 256u);
  EXPECT_EQ(c.subarray.data_rows, 248u);
  EXPECT_EQ(c.subarray.reserved_base, 248u);
  EXPECT_EQ(c.subarray.columns, 128u);
  EXPECT_EQ(c.cost.t_aap_ns, 50.0);
  EXPECT_EQ(c.cost.banks, 4u);
  EXPECT_EQ(c.classify.mpki_high, 20.0);
  EXPECT_EQ(c.cost.t_tra_ns, CostParams{}.t_tra_ns);
}

TEST(Config, ErrorsCarryLines) {
  try {
    parse_config("cost.banks = 2\nsubarray.colums = 4\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_config("cost.banks 2\n"), ParseError);
  EXPECT_THROW(parse_config("cost.t_aap_ns = fast\n"), ParseError);
  EXPECT_THROW(parse_config("cost.t_aap_ns = -1\n"), ValidationError);
  EXPECT_THROW(parse_config("classify.lfmr_high = 1.5\n"), ValidationError);
}

TEST(Config, EveryListedKeyIsAccepted) {
  RunConfig c;
  for (const std::string& k : RunConfig::keys()) EXPECT_NO_THROW(c.set(k, k == "subarray.rows" ? "512" : "1")) << k;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pudc_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int cli(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, CompileWritesReparseableProgram) {
  ASSERT_EQ(cli({"compile", "--op", "add", "--width", "4", "-o", path("add4.up")}), kExitOk) << err_.str();
  const std::string text = read("add4.up");
  EXPECT_EQ(text.rfind("UP/1\n", 0), 0u);
  EXPECT_EQ(to_text(parse_program(text)), text);
  EXPECT_NE(out_.str().find("activations"), std::string::npos);
  EXPECT_NE(out_.str().find("verified 256 lanes (exhaustive)"), std::string::npos);
}

TEST_F(Cli, UnknownOpIsUsageError) {
  EXPECT_EQ(cli({"compile", "--op", "nosuch", "--width", "4", "-o", path("x.up")}), kExitUsage);
  EXPECT_EQ(cli({}), kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}), kExitUsage);
  EXPECT_EQ(cli({"compile", "--op", "add", "--width", "0", "-o", path("x.up")}), kExitUsage);
}

TEST_F(Cli, CapacityErrorExitsThree) {
  write("tiny.conf", "subarray.rows = 16\n");
  EXPECT_EQ(cli({"compile", "--op", "mul", "--width", "8", "--config", path("tiny.conf"), "-o", path("m.up")}),
            kExitData);
}

TEST_F(Cli, BadConfigIsUsageError) {
  write("bad.conf", "subarray.bogus = 1\n");
  EXPECT_EQ(cli({"compile", "--op", "add", "--width", "4", "--config", path("bad.conf"), "-o", path("x.up")}),
            kExitUsage);
  EXPECT_EQ(cli({"compile", "--op", "add", "--width", "4", "--set", "cost.banks", "-o", path("x.up")}), kExitUsage);
}

TEST_F(Cli, NInputAndSweep) {
  ASSERT_EQ(cli({"compile", "--op", "and_n", "--inputs", "4", "--width", "1", "-o", path("and4.up")}), kExitOk);
  std::string cols[4];
  for (unsigned v = 0; v < 16; ++v)
    for (int k = 0; k < 4; ++k) cols[k] += std::to_string((v >> k) & 1u) + "\n";
  for (int k = 0; k < 4; ++k) write("in" + std::to_string(k), cols[k]);
  ASSERT_EQ(cli({"run", path("and4.up"), path("in0"), path("in1"), path("in2"), path("in3"), "-o", path("o.txt")}),
            kExitOk)
      << err_.str();
  std::string want;
  for (unsigned v = 0; v < 16; ++v) want += v == 15 ? "1\n" : "0\n";
  EXPECT_EQ(read("o.txt"), want);
}

TEST_F(Cli, RunAddsAndWritesCarry) {
  ASSERT_EQ(cli({"compile", "--op", "add", "--width", "4", "-o", path("add4.up")}), kExitOk);
  write("a.txt", "5\n");
  write("b.txt", "6\n");
  ASSERT_EQ(cli({"run", path("add4.up"), path("a.txt"), path("b.txt"), "-o", path("out.txt")}), kExitOk);
  EXPECT_EQ(read("out.txt"), "11\n");
  EXPECT_EQ(read("out.txt.1"), "0\n");
  EXPECT_NE(out_.str().find("latency_ns"), std::string::npos);
  EXPECT_NE(out_.str().find("energy_pj"), std::string::npos);
}

TEST_F(Cli, RunMismatchedLengthsExitsThree) {
  ASSERT_EQ(cli({"compile", "--op", "add", "--width", "4", "-o", path("add4.up")}), kExitOk);
  write("a.txt", "1\n2\n");
  write("b.txt", "1\n");
  EXPECT_EQ(cli({"run", path("add4.up"), path("a.txt"), path("b.txt"), "-o", path("o.txt")}), kExitData);
  write("c.txt", "x\n");
  EXPECT_EQ(cli({"run", path("add4.up"), path("a.txt"), path("c.txt"), "-o", path("o.txt")}), kExitData);
  write("broken.up", "UP/1\nop=add width=4 data_rows=14\nAAP D0\n");
  EXPECT_EQ(cli({"run", path("broken.up"), path("a.txt"), path("a.txt"), "-o", path("o.txt")}), kExitData);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
}

TEST_F(Cli, RunMatchesHostAdditionOn64RandomLanes) {
  ASSERT_EQ(cli({"compile", "--op", "add", "--width", "16", "-o", path("add16.up")}), kExitOk);
  std::mt19937_64 rng(2);
  std::string a, b, want;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t x = rng() & 0xFFFF, y = rng() & 0xFFFF;
    a += std::to_string(x) + "\n";
    b += std::to_string(y) + "\n";
    want += std::to_string((x + y) & 0xFFFF) + "\n";
  }
  write("a.txt", a);
  write("b.txt", b);
  ASSERT_EQ(cli({"run", path("add16.up"), path("a.txt"), path("b.txt"), "-o", path("o.txt"), "--serial"}), kExitOk);
  EXPECT_EQ(read("o.txt"), want);
}

TEST_F(Cli, BenchEmitsRatioRows) {
  ASSERT_EQ(cli({"bench", "--widths", "4", "-o", path("bench.csv"), "--set", "subarray.columns=256"}), kExitOk)
      << err_.str();
  std::istringstream in(read("bench.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("op,width,activations_e0,activations_opt,activation_ratio", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 12u);
    EXPECT_LE(std::stoull(cells[3]), std::stoull(cells[2])) << line;
    EXPECT_GE(std::stod(cells[4]), 1.0) << line;
  }
  EXPECT_EQ(rows, 16);
}

TEST_F(Cli, ClassifyArchetypes) {
  write("m.csv",
        "function,llc_mpki,temporal_locality,arithmetic_intensity,lfmr@1,lfmr@4,lfmr@16\n"
        "bw,50,0.03,0.1,0.95,0.94,0.93\n"
        "lat,2,0.05,0.1,0.92,0.91,0.90\n"
        "cap,3,0.04,0.1,0.8,0.5,0.2\n"
        "l3,1,0.6,0.1,0.1,0.3,0.6\n"
        "l1,1,0.7,0.05,0.2,0.2,0.2\n"
        "cpu,1,0.8,2.0,0.1,0.1,0.1\n");
  ASSERT_EQ(cli({"classify", path("m.csv")}), kExitOk) << err_.str();
  const std::string o = out_.str();
  for (const char* c : {",DramBandwidthBound,", ",DramLatencyBound,", ",L1L2CacheCapacity,", ",L3CacheContention,",
                        ",L1CacheCapacity,", ",ComputeBound,PnM-harmful,"})
    EXPECT_NE(o.find(c), std::string::npos) << c;
}

TEST_F(Cli, ClassifyEmptyAndBadInput) {
  write("empty.csv", "");
  EXPECT_EQ(cli({"classify", path("empty.csv")}), kExitOk);
  EXPECT_EQ(out_.str(), "");
  write("bad.csv", "fn,mpki\n");
  EXPECT_EQ(cli({"classify", path("bad.csv")}), kExitUsage);
  write("row.csv", "function,llc_mpki,temporal_locality,arithmetic_intensity,lfmr@1\nf,1,2,3\n");
  EXPECT_EQ(cli({"classify", path("row.csv")}), kExitData);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos);
}

TEST_F(Cli, TransposeRoundTrip) {
  write("v.txt", "3\n200\n7\n");
  ASSERT_EQ(cli({"transpose", path("v.txt"), "--width", "8", "-o", path("rows.txt")}), kExitOk);
  EXPECT_EQ(read("rows.txt").substr(0, 4), "101\n");
  ASSERT_EQ(cli({"transpose", path("rows.txt"), "--width", "8", "--inverse"}), kExitOk);
  EXPECT_EQ(out_.str(), "3\n200\n7\n");
  write("big.txt", "256\n");
  EXPECT_EQ(cli({"transpose", path("big.txt"), "--width", "8"}), kExitData);
}

}  // namespace
}  // namespace pud
