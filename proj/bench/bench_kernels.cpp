// Serial reference vs OpenMP kernels on whole-box scans.

#include <benchmark/benchmark.h>

#include "tarski/instances.hpp"
#include "tarski/kernels.hpp"

using namespace tarski;

namespace {

Box cube_for(std::int64_t side) { return Box::cube(3, static_cast<Coord>(side)); }

void BM_Tabulate(benchmark::State& st) {
  const FnOracle f = gen_random_steps(cube_for(st.range(0)), 1, 16);
  const bool par = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::tabulate(f, par));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.box().volume()));
}

void BM_CheckFnTable(benchmark::State& st) {
  const Box box = cube_for(st.range(0));
  const auto table = kernels::tabulate(gen_random_steps(box, 2, 16), true);
  const bool par = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::check_fn_table(box, table, par));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(box.volume()));
}

void BM_CheckSignTable(benchmark::State& st) {
  const Box box = cube_for(st.range(0));
  const SignOracle g = slice_oracle(gen_random_steps(Box::cube(4, box.side(0)), 3, 16), 3, 1);
  const auto table = kernels::tabulate(g, true);
  const bool par = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::check_sign_table(box, table, par));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(box.volume()));
}

void BM_FixedPoints(benchmark::State& st) {
  const Box box = cube_for(st.range(0));
  const auto table = kernels::tabulate(gen_random_steps(box, 4, 16), true);
  const bool par = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::fixed_point_indices(box, table, par));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(box.volume()));
}

void grid(benchmark::internal::Benchmark* b) {
  for (std::int64_t side : {16, 48, 96}) {
    for (std::int64_t par : {0, 1}) b->Args({side, par});
  }
  b->ArgNames({"side", "parallel"});
}

}  // namespace

BENCHMARK(BM_Tabulate)->Apply(grid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckFnTable)->Apply(grid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckSignTable)->Apply(grid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FixedPoints)->Apply(grid)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
