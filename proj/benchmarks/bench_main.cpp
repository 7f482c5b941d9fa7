// Microbenchmarks for the hot paths: basis construction, per-model evidence,
// both search strategies, posterior curve sampling and the two reference
// smoothers. Each fixture is seeded so numbers are comparable across runs.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "doseopt/baselines.hpp"
#include "doseopt/bma.hpp"
#include "doseopt/data.hpp"
#include "doseopt/dgp_sim.hpp"
#include "doseopt/fp_basis.hpp"
#include "doseopt/glm_laplace.hpp"
#include "doseopt/linear_model.hpp"
#include "doseopt/model_search.hpp"

namespace {

using namespace doseopt;

DoseResponseData gaussian_data() {
  ScenarioSpec spec;
  spec.scenario = Scenario::b;
  spec.family = Family::gaussian;
  spec.sigma = 0.5;
  spec.seed = 7;
  return simulate(spec);
}

DoseResponseData bernoulli_data() {
  ScenarioSpec spec;
  spec.scenario = Scenario::b;
  spec.family = Family::bernoulli;
  spec.sigma = 0.5;
  spec.seed = 7;
  return simulate(spec);
}

std::vector<double> doses_vector(const DoseResponseData& data) {
  return {data.doses.data(), data.doses.data() + data.n()};
}

void bm_build_design(benchmark::State& state) {
  const DoseResponseData data = gaussian_data();
  const std::vector<double> doses = doses_vector(data);
  const ModelIndex gamma = ModelIndex::from_transforms({2, 4, 9, 12});
  for (auto _ : state)
    benchmark::DoNotOptimize(build_design(doses, gamma));
}
BENCHMARK(bm_build_design);

void bm_gaussian_evidence(benchmark::State& state) {
  const DoseResponseData data = gaussian_data();
  const DesignMatrix design =
      build_design(doses_vector(data), ModelIndex::from_transforms({4, 6}));
  const double g = default_g(data.n());
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_gaussian(data.responses, design, g));
}
BENCHMARK(bm_gaussian_evidence);

void bm_logistic_laplace(benchmark::State& state) {
  const DoseResponseData data = bernoulli_data();
  const DesignMatrix design =
      build_design(doses_vector(data), ModelIndex::from_transforms({4, 6}));
  const double g = default_g(data.n());
  for (auto _ : state) {
    const LogisticFit fit = fit_logistic_map(data.responses, design, g);
    benchmark::DoNotOptimize(log_marginal_laplace(fit, design, g));
  }
}
BENCHMARK(bm_logistic_laplace);

void bm_score_model(benchmark::State& state) {
  const DoseResponseData data = gaussian_data();
  const double g = default_g(data.n());
  const int max_terms = default_max_terms(data);
  const ModelIndex gamma = ModelIndex::from_transforms({1, 4, 11});
  for (auto _ : state)
    benchmark::DoNotOptimize(score_model(data, gamma, g, max_terms));
}
BENCHMARK(bm_score_model);

void bm_enumerate_gaussian(benchmark::State& state) {
  const DoseResponseData data = gaussian_data();
  const double g = default_g(data.n());
  const int max_terms = default_max_terms(data);
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_models(data, g, max_terms));
}
BENCHMARK(bm_enumerate_gaussian)->Unit(benchmark::kMillisecond);

void bm_mjmcmc_gaussian(benchmark::State& state) {
  const DoseResponseData data = gaussian_data();
  const double g = default_g(data.n());
  const int iterations = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(mjmcmc(data, g, iterations, 3));
}
BENCHMARK(bm_mjmcmc_gaussian)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void bm_mjmcmc_bernoulli(benchmark::State& state) {
  const DoseResponseData data = bernoulli_data();
  const double g = default_g(data.n());
  const int iterations = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(mjmcmc(data, g, iterations, 3));
}
BENCHMARK(bm_mjmcmc_bernoulli)->Arg(2000)->Unit(benchmark::kMillisecond);

void bm_posterior_curve_draws(benchmark::State& state) {
  const DoseResponseData data = gaussian_data();
  const double g = default_g(data.n());
  const PosteriorEnsemble ensemble = mjmcmc(data, g, 5000, 3);
  const DoseGrid grid = DoseGrid::uniform(0.4, 30.0, 512);
  for (auto _ : state)
    benchmark::DoNotOptimize(posterior_curve_draws(ensemble, data, grid, 1000, 9));
}
BENCHMARK(bm_posterior_curve_draws)->Unit(benchmark::kMillisecond);

void bm_gp_baseline(benchmark::State& state) {
  const DoseResponseData data = gaussian_data();
  const DoseGrid grid = DoseGrid::uniform(0.4, 30.0, 512);
  const GpConfig config = default_gp_config(data);
  for (auto _ : state)
    benchmark::DoNotOptimize(gp_fit_predict(data, grid, config));
}
BENCHMARK(bm_gp_baseline)->Unit(benchmark::kMillisecond);

void bm_loess_baseline(benchmark::State& state) {
  const DoseResponseData data = gaussian_data();
  const DoseGrid grid = DoseGrid::uniform(0.4, 30.0, 512);
  const LoessConfig config;
  for (auto _ : state)
    benchmark::DoNotOptimize(loess_fit_predict(data, grid, config));
}
BENCHMARK(bm_loess_baseline);

}  // namespace

BENCHMARK_MAIN();
