// Serial reference vs OpenMP for the two grid sweeps the CLI exposes: closed
// form vs oracle roots over (N, p, k), and b̃ over a p grid.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "brl/charpoly.hpp"
#include "brl/parallel.hpp"
#include "brl/shooting.hpp"

using namespace brl;

namespace {

std::vector<Parameters> root_grid() {
  std::vector<Parameters> g;
  for (int N = 3; N <= 15; ++N)
    for (int j = 1; j <= 20; ++j) {
      const double hi = N == 3 ? 3.0 : 30.0;
      g.push_back({N, 1.0 + (hi - 1.0) * j / 21.0});
    }
  return g;
}

void BM_RootFidelity(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  const auto grid = root_grid();
  for (auto _ : state) {
    auto worst = map_indices(
        grid.size(),
        [&](std::size_t i) {
          double w = 0.0;
          for (int k = 0; k <= 12; ++k) {
            const auto closed = charpoly::mode_roots_closed(grid[i], k);
            const auto oracle = charpoly::solve_quartic(charpoly::mode_quartic(grid[i], k));
            w = std::max(w, charpoly::match_roots(closed, oracle).max_distance);
          }
          return w;
        },
        exec);
    benchmark::DoNotOptimize(worst.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t(grid.size()) * 13);
  state.counters["threads"] = exec == Execution::Parallel ? worker_count() : 1;
}

void BM_ShootingSweep(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  std::vector<double> ps;
  for (int j = 0; j < 8; ++j) ps.push_back(1.5 + 0.5 * j);
  for (auto _ : state) {
    auto bt = map_indices(
        ps.size(), [&](std::size_t i) { return shoot::find_b_tilde(1.0, {6, ps[i]}).b_tilde_est; },
        exec);
    benchmark::DoNotOptimize(bt.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t(ps.size()));
  state.counters["threads"] = exec == Execution::Parallel ? worker_count() : 1;
}

}  // namespace

BENCHMARK(BM_RootFidelity)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShootingSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
