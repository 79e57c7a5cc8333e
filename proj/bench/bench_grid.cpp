#include <benchmark/benchmark.h>

#include "qforge/forge/grid.hpp"
#include "qforge/forge/pipeline.hpp"
#include "qforge/forge/registry.hpp"

using namespace qforge;
using namespace qforge::forge;

namespace {

std::vector<Bindings> sv_cells() {
  GridSpec g{parse_grid("M=0..6,N=0..6"), parse_scalar_list("1/2,2/3,3/5"), {}};
  return g.cells();
}

void BM_GridSv3(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  const IdentityRecord& rec = Registry::builtin().get("sv3");
  const auto cells = sv_cells();
  for (auto _ : state) benchmark::DoNotOptimize(run_grid(rec, cells, 1e-12, std::nullopt, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cells.size()));
}
BENCHMARK(BM_GridSv3)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_GridQGaussNumeric(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  const IdentityRecord& rec = Registry::builtin().get("qgauss");
  GridSpec g{{}, parse_scalar_list("1/2,2/5,3/5,1/3"), {}};
  std::vector<Bindings> cells;
  for (auto b : g.cells())
    for (long d = 20; d < 30; ++d) {
      b["a"] = ExactScalar(Rational(1, 3));
      b["b"] = ExactScalar(Rational(1, 5));
      b["c"] = ExactScalar(Rational(1, d * 5));
      cells.push_back(b);
    }
  for (auto _ : state) benchmark::DoNotOptimize(run_grid(rec, cells, 1e-12, std::nullopt, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cells.size()));
}
BENCHMARK(BM_GridQGaussNumeric)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_CheckFamily(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  using relations::Var;
  auto V = [](Var v) { return RationalFunction::variable(v); };
  const ParamFamily kummer(V(Var::a), V(Var::b), V(Var::b) * V(Var::q) / V(Var::a), -V(Var::q) / V(Var::a));
  for (auto _ : state)
    benchmark::DoNotOptimize(check_family_detailed({0, 2, 2, 0}, kummer, 4, 20, kDefaultSeed, exec));
}
BENCHMARK(BM_CheckFamily)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
