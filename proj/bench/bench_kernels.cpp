#include <benchmark/benchmark.h>

#include <cmath>

#include "support/oracles.hpp"
#include "svjd/charfn.hpp"
#include "svjd/fourier.hpp"
#include "svjd/mc.hpp"

using namespace svjd;

namespace {

SimConfig bench_sim(VarianceScheme scheme) {
  SimConfig c;
  c.n_paths = 20000;
  c.n_steps = 100;
  c.seed = 1;
  c.scheme = scheme;
  return c;
}

template <bool Parallel>
void BM_Simulate(benchmark::State& state) {
  const MarketModel m = fixtures::desk_model(0);
  const MarketState st = spot_state(m);
  const SimConfig c = bench_sim(state.range(0) == 0 ? VarianceScheme::full_truncation_euler : VarianceScheme::qe);
  for (auto _ : state) {
    PathBatch b = Parallel ? simulate_omp(m, st, 0.0, 1.0, c, 0, c.n_paths)
                           : simulate_serial(m, st, 0.0, 1.0, c, 0, c.n_paths);
    benchmark::DoNotOptimize(b.x1.data());
  }
  state.SetItemsProcessed(state.iterations() * c.n_paths * c.n_steps);
}

template <bool Parallel>
void BM_FourierNodes(benchmark::State& state) {
  const MarketModel m = fixtures::desk_model(0);
  const MarketState st = spot_state(m);
  auto f = [&](double z) {
    const cplx w{z, -0.75};
    return std::real(phi_joint(m, st, 0.0, 1.0, w - cplx(0.0, 1.0), -w).value);
  };
  std::vector<double> values(static_cast<std::size_t>(state.range(0)) + 1);
  const double h = 200.0 / state.range(0);
  for (auto _ : state) {
    if (Parallel) eval_nodes_omp(f, h, values);
    else eval_nodes_serial(f, h, values);
    benchmark::DoNotOptimize(values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ExchangePrice(benchmark::State& state) {
  const MarketModel m = fixtures::desk_model(0);
  const MarketState st = spot_state(m);
  QuadratureConfig q;
  q.n_nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exchange_price(m, st, 0.0, 1.0, q).price);
}

}  // namespace

// range(0): 0 = full truncation Euler, 1 = QE
BENCHMARK(BM_Simulate<false>)->Name("simulate/serial")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulate<true>)->Name("simulate/omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourierNodes<false>)->Name("fourier_nodes/serial")->Arg(2048)->Arg(8192)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FourierNodes<true>)->Name("fourier_nodes/omp")->Arg(2048)->Arg(8192)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExchangePrice)->Arg(2048)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
