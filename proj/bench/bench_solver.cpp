#include <benchmark/benchmark.h>

#include "superbider/bider_engine.hpp"
#include "superbider/postlie.hpp"

using namespace superbider;

namespace {

const ConstraintSystem& system_for(int which) {
  static const ConstraintSystem vir = build_bider_system(
      get_module({"density-F", {{"b", Scalar(1)}}}, {"virasoro", {}}), Parity::even, Symmetry::symmetric,
      Window(8, 3, 2));
  static const ConstraintSystem n2 = build_bider_system(adjoint_module(get_algebra({"n2-ramond", {}})),
                                                        Parity::even, Symmetry::symmetric, Window(4, 2, 2));
  return which == 0 ? vir : n2;
}

void BM_Blocks(benchmark::State& state) {
  const auto& sys = system_for(static_cast<int>(state.range(0)));
  Exec exec = state.range(1) ? Exec::parallel : Exec::serial;
  PivotStrategy pivot = state.range(2) ? PivotStrategy::leftmost : PivotStrategy::markowitz;
  for (auto _ : state) benchmark::DoNotOptimize(nullspace_blocks(sys.blocks, exec, pivot));
  state.SetLabel(std::string(state.range(0) ? "n2-ramond" : "vir-F1") + (state.range(1) ? " parallel" : " serial") +
                 (state.range(2) ? " leftmost" : " markowitz"));
}
BENCHMARK(BM_Blocks)
    ->ArgsProduct({{0, 1}, {0, 1}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_SolveBider(benchmark::State& state) {
  ModuleSpec mod = adjoint_module(get_algebra({"sw22", {}}));
  Exec exec = state.range(0) ? Exec::parallel : Exec::serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_bider(mod, ParityChoice::both, Symmetry::symmetric, Window(HalfInt::from_twice(7), 2, 2), exec));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_SolveBider)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PostLie(benchmark::State& state) {
  AlgebraSpec s = get_algebra({"hv-super", {}});
  Exec exec = state.range(0) ? Exec::parallel : Exec::serial;
  for (auto _ : state) benchmark::DoNotOptimize(solve_postlie(s, Window(5, 2, 2), exec));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_PostLie)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
