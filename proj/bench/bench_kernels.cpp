// Serial reference vs OpenMP kernels: row primitives, whole-program execution,
// transposition and truth-table simulation.

#include <benchmark/benchmark.h>

#include <random>

#include "pud/kernels.hpp"
#include "pud/logic.hpp"
#include "pud/oplib.hpp"
#include "pud/subarray.hpp"
#include "pud/transpose.hpp"

namespace {

using pud::ExecPolicy;

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(1) == 0 ? ExecPolicy::Serial : ExecPolicy::Parallel;
}

std::vector<std::uint64_t> random_words(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> v(n);
  for (auto& w : v) w = rng();
  return v;
}

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "parallel"); }

void BM_Maj3(benchmark::State& state) {
  const auto words = static_cast<std::size_t>(state.range(0));
  auto a = random_words(words, 1), b = random_words(words, 2), c = random_words(words, 3);
  const ExecPolicy p = policy_of(state);
  for (auto _ : state) {
    pud::kernels::maj3(p, a, b, c);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * words * 3 * sizeof(std::uint64_t)));
  label(state);
}

void BM_CopyNot(benchmark::State& state) {
  const auto words = static_cast<std::size_t>(state.range(0));
  auto src = random_words(words, 4);
  std::vector<std::uint64_t> dst(words);
  const ExecPolicy p = policy_of(state);
  for (auto _ : state) {
    pud::kernels::copy_not(p, dst, src, ~std::uint64_t{0});
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * words * 2 * sizeof(std::uint64_t)));
  label(state);
}

// One 8-bit addition program over a full 65536-column subarray.
void BM_RunAdd8(benchmark::State& state) {
  static const pud::SubarrayConfig cfg = pud::SubarrayConfig::with_columns(65536);
  static const pud::CompiledOp op = pud::compile_op(pud::OpKind::Add, 8, cfg, 2);
  const ExecPolicy p = policy_of(state);
  pud::Subarray s(cfg, p);
  for (auto _ : state) benchmark::DoNotOptimize(s.run(op.program()));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.columns));
  label(state);
}

void BM_Transpose(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const unsigned width = 32;
  pud::SubarrayConfig cfg = pud::SubarrayConfig::with_columns(static_cast<std::uint32_t>(count));
  pud::Subarray s(cfg);
  std::mt19937_64 rng(5);
  pud::HorizontalBlock block{{}, width};
  for (std::size_t i = 0; i < count; ++i) block.values.push_back(rng() & 0xFFFFFFFFu);
  const ExecPolicy p = policy_of(state);
  for (auto _ : state) {
    pud::to_vertical(block, s, 0, p);
    benchmark::DoNotOptimize(pud::to_horizontal(s, 0, width, static_cast<std::uint32_t>(count), p));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * count));
  label(state);
}

void BM_TruthTable(benchmark::State& state) {
  const pud::Netlist nl = pud::build_netlist(pud::OpKind::Add, static_cast<unsigned>(state.range(0)));
  const ExecPolicy p = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(pud::truth_table(nl, p));
  label(state);
}

}  // namespace

BENCHMARK(BM_Maj3)->ArgsProduct({{1024, 65536}, {0, 1}});
BENCHMARK(BM_CopyNot)->ArgsProduct({{1024, 65536}, {0, 1}});
BENCHMARK(BM_RunAdd8)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Transpose)->ArgsProduct({{4096, 65536}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TruthTable)->ArgsProduct({{6, 8}, {0, 1}})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
