#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ctxbo/acquisition.hpp"
#include "ctxbo/gp.hpp"
#include "ctxbo/objectives.hpp"
#include "ctxbo/sampling.hpp"
#include "ctxbo/sobol.hpp"

using namespace ctxbo;

namespace {

Dataset hartmann_data(std::size_t n) {
  const Objective h = hartmann6_objective();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset data(h.bounds());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(6);
    for (auto& v : x) v = u(rng);
    data.append(x, hartmann6(x));
  }
  return data;
}

void BM_FitPosterior(benchmark::State& state) {
  const Dataset data = hartmann_data(static_cast<std::size_t>(state.range(0)));
  const KernelParams p = KernelParams::defaults_for(data.bounds());
  for (auto _ : state) benchmark::DoNotOptimize(fit_posterior(data, p));
}
BENCHMARK(BM_FitPosterior)->Arg(10)->Arg(25)->Arg(53);

void BM_OptimizeHyperparameters(benchmark::State& state) {
  const Dataset data = hartmann_data(static_cast<std::size_t>(state.range(0)));
  const KernelParams p = KernelParams::defaults_for(data.bounds());
  for (auto _ : state) benchmark::DoNotOptimize(optimize_hyperparameters(data, p));
}
BENCHMARK(BM_OptimizeHyperparameters)->Arg(10)->Arg(53)->Unit(benchmark::kMillisecond);

void BM_Predict2048(benchmark::State& state) {
  const Dataset data = hartmann_data(static_cast<std::size_t>(state.range(0)));
  const GpPosterior model = fit_posterior(data, KernelParams::defaults_for(data.bounds()));
  SobolStream s(6);
  const CandidateSet c = sobol_points(s, 2048, data.bounds());
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_standardized(c.points));
}
BENCHMARK(BM_Predict2048)->Arg(10)->Arg(53);

void BM_ScoreAei(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<PosteriorSummary> batch;
  for (int i = 0; i < 2048; ++i) batch.push_back({n(rng), std::abs(n(rng)), 1.0, 0.2});
  for (auto _ : state) benchmark::DoNotOptimize(score(batch, {AcquisitionKind::aei}));
}
BENCHMARK(BM_ScoreAei);

void BM_MaximizeAcquisition(benchmark::State& state) {
  const Dataset data = hartmann_data(30);
  const GpPosterior model = fit_posterior(data, KernelParams::defaults_for(data.bounds()));
  for (auto _ : state) {
    SobolStream s(6);
    benchmark::DoNotOptimize(
        maximize_acquisition(model, {AcquisitionKind::aei}, data.bounds(), s, SearchBudget{}));
  }
}
BENCHMARK(BM_MaximizeAcquisition)->Unit(benchmark::kMillisecond);

void BM_Sobol(benchmark::State& state) {
  SobolStream s(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(s.dimension());
  for (auto _ : state) {
    s.next_into(out.data());
    benchmark::DoNotOptimize(out.data());
    if (s.index() > (1u << 30)) s = SobolStream(s.dimension());
  }
}
BENCHMARK(BM_Sobol)->Arg(2)->Arg(6)->Arg(21);

}  // namespace

BENCHMARK_MAIN();
