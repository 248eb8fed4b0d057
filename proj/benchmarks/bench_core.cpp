#include <benchmark/benchmark.h>

#include "bsarma/estimation.hpp"
#include "bsarma/likelihood.hpp"
#include "bsarma/montecarlo.hpp"
#include "bsarma/rng.hpp"

namespace {

const bsarma::ModelOrder kOrder{1, 1, 1, 1, 12};

bsarma::ParamVector design_params() {
  bsarma::ParamVector params;
  params.beta = -1.0;
  params.ar = {-0.5};
  params.sar = {0.3};
  params.ma = {0.4};
  params.sma = {-0.35};
  params.precision = 120.0;
  return params;
}

bsarma::SeriesData make_series(int n) {
  std::mt19937_64 rng = bsarma::make_stream(99);
  return bsarma::simulate_series(kOrder, design_params(), n, rng);
}

void BM_ConditionalLoglik(benchmark::State& state) {
  const bsarma::SeriesData series = make_series(static_cast<int>(state.range(0)));
  const bsarma::ParamVector params = design_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bsarma::conditional_loglik(kOrder, params, series));
  }
}
BENCHMARK(BM_ConditionalLoglik)->Arg(100)->Arg(500)->Arg(2000);

void BM_LoglikAndScore(benchmark::State& state) {
  const bsarma::SeriesData series = make_series(static_cast<int>(state.range(0)));
  const bsarma::ParamVector params = design_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bsarma::loglik_and_score(kOrder, params, series));
  }
}
BENCHMARK(BM_LoglikAndScore)->Arg(100)->Arg(500)->Arg(2000);

void BM_FisherInformation(benchmark::State& state) {
  const bsarma::SeriesData series = make_series(static_cast<int>(state.range(0)));
  const bsarma::ParamVector params = design_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bsarma::fisher_information(kOrder, params, series));
  }
}
BENCHMARK(BM_FisherInformation)->Arg(500);

void BM_Fit(benchmark::State& state) {
  const bsarma::SeriesData series = make_series(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bsarma::fit(kOrder, series));
  }
}
BENCHMARK(BM_Fit)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_SimulateSeries(benchmark::State& state) {
  const bsarma::ParamVector params = design_params();
  std::mt19937_64 rng = bsarma::make_stream(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bsarma::simulate_series(
        kOrder, params, static_cast<int>(state.range(0)), rng));
  }
}
BENCHMARK(BM_SimulateSeries)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
