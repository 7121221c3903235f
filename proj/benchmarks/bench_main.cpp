#include <benchmark/benchmark.h>

#include "spgarch/simstudy.hpp"
#include "spgarch/spgarch_sampler.hpp"

namespace {

using namespace spgarch;

ReturnSeries dgp_series(int id, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  return ReturnSeries(simulate_dgp(dgp_spec(id), n, rng).returns);
}

const CTable& shared_table() {
  static const CTable table = build_c_table(quantile_knot_pool(), CGridSpec{});
  return table;
}

void BM_SpGarchEvaluate(benchmark::State& state) {
  const ReturnSeries r = dgp_series(1, static_cast<std::size_t>(state.range(0)), 3);
  const SpGarchTarget target(r, shared_table(), PriorConfig{});
  const Indicator m = Indicator::from_bitstring("001100000");
  Eigen::VectorXd x = target.initial_point(m);
  x[7] = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(target.evaluate(m, {x.data(), static_cast<std::size_t>(x.size())}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpGarchEvaluate)->Arg(1999)->Arg(4000);

void BM_GarchEvaluate(benchmark::State& state) {
  const ReturnSeries r = dgp_series(2, static_cast<std::size_t>(state.range(0)), 5);
  const ParametricTarget target(ModelKind::Garch, r);
  const Indicator m(0);
  const Eigen::VectorXd x = target.initial_point(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(target.evaluate(m, {x.data(), static_cast<std::size_t>(x.size())}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GarchEvaluate)->Arg(1999);

void BM_ComputeC(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compute_c(-1.0, 3.5));
}
BENCHMARK(BM_ComputeC);

void BM_BuildCTable(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_c_table(quantile_knot_pool(), CGridSpec{50, 2.02, 200.0}));
  }
}
BENCHMARK(BM_BuildCTable)->Unit(benchmark::kMillisecond);

void BM_Pilot(benchmark::State& state) {
  const ReturnSeries r = dgp_series(2, 1999, 11);
  const SpGarchTarget target(r, shared_table(), PriorConfig{});
  const Indicator m = Indicator::from_bitstring("000010000");
  PilotConfig cfg;
  cfg.n_iter = static_cast<std::size_t>(state.range(0));
  cfg.n_burn = cfg.n_iter / 4;
  for (auto _ : state) {
    RandomStream rng(1);
    benchmark::DoNotOptimize(pilot_rwm(target, m, cfg, rng));
  }
}
BENCHMARK(BM_Pilot)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
