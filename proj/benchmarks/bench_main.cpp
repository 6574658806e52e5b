#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "favfa/balance/planner.hpp"
#include "favfa/glm/logit.hpp"
#include "favfa/metrics/threshold.hpp"
#include "favfa/random.hpp"
#include "favfa/report/analyze.hpp"
#include "favfa/sim/simulator.hpp"

namespace {

using namespace favfa;

void BM_OptimizeThreshold(benchmark::State& state) {
  sim::SimulationConfig cfg;
  cfg.pairs = static_cast<std::size_t>(state.range(0));
  cfg.seed = 1;
  const auto ds = sim::simulate_verification(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::optimize_threshold(ds.pairs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OptimizeThreshold)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_FitLogit(benchmark::State& state) {
  const auto n = state.range(0);
  constexpr int kCols = 12;
  Rng rng(3);
  Eigen::MatrixXd x(n, kCols);
  Eigen::VectorXd y(n);
  Eigen::VectorXd beta = Eigen::VectorXd::LinSpaced(kCols, -0.5, 0.5);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    for (int j = 1; j < kCols; ++j) x(i, j) = rng.normal();
    y(i) = rng.bernoulli(glm::sigmoid(x.row(i).dot(beta))) ? 1.0 : 0.0;
  }
  std::vector<std::string> labels{"(Intercept)"};
  for (int j = 1; j < kCols; ++j) labels.push_back("x" + std::to_string(j));
  for (auto _ : state) {
    benchmark::DoNotOptimize(glm::fit_logit(x, y, labels));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FitLogit)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_PlanGeneration(benchmark::State& state) {
  const auto schema = data::default_schema();
  const auto pools = sim::simulate_planner_pools(schema, 1400, 2500, 5);
  for (auto _ : state) {
    const auto ids = balance::select_id_pool(pools.ids, schema, 10'000, 7);
    benchmark::DoNotOptimize(balance::assign_styles(ids, pools.styles, 50));
  }
}
BENCHMARK(BM_PlanGeneration)->Unit(benchmark::kMillisecond);

void BM_AnalyzeBundle(benchmark::State& state) {
  sim::SimulationConfig cfg;
  cfg.pairs = static_cast<std::size_t>(state.range(0));
  cfg.seed = 11;
  const auto ds = sim::simulate_verification(cfg);
  report::AnalysisOptions options;
  options.diagnostic_simulations = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(report::analyze(ds.schema, ds.images, ds.pairs, options));
  }
}
BENCHMARK(BM_AnalyzeBundle)->Arg(20'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
