#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "mlsa/core.hpp"
#include "mlsa/reference.hpp"
#include "mlsa/regression.hpp"

namespace {

struct Fixture {
  mlsa::PredictionTable table;
  mlsa::LabeledSample sample;
  mlsa::LossModel loss = mlsa::regression::squared_loss();
  mlsa::ToleranceGrid grid;
};

Fixture make_fixture(std::size_t n, std::size_t m) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> values(n * m);
  for (double& v : values) v = unif(rng);
  Fixture f;
  f.table = mlsa::PredictionTable(n, m, std::move(values), mlsa::PredictionTable::Duplicates::keep);
  for (std::size_t i = 0; i < n; ++i) f.sample.responses.push_back(unif(rng));
  f.grid = mlsa::regression::regression_grid(1.0, m);
  return f;
}

void BM_MlsaParallel(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlsa::run_mlsa(f.table, f.sample, f.loss, f.grid, mlsa::Aggregator::mean()));
  }
  state.counters["threads"] = omp_get_max_threads();
}

void BM_MlsaReference(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mlsa::reference::run_mlsa(f.table, f.sample, f.loss, f.grid, mlsa::Aggregator::mean()));
  }
}

void BM_GrowthAuditParallel(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlsa::grid_growth_audit(f.table, f.sample, f.loss, f.grid, 2.0));
  }
}

void BM_GrowthAuditReference(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlsa::reference::grid_growth_audit(f.table, f.sample, f.loss, f.grid, 2.0));
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {50, 200}) {
    for (int m : {32, 256}) b->Args({n, m});
  }
}

}  // namespace

BENCHMARK(BM_MlsaParallel)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MlsaReference)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GrowthAuditParallel)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GrowthAuditReference)->Apply(sizes)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
