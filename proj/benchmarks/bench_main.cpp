#include <benchmark/benchmark.h>

#include "oracles.hpp"
#include "valsize/valsize.hpp"

using namespace valsize;

static void BM_PseudoObservations(benchmark::State& state) {
  const auto rec = oracle::random_records(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pseudo_observations(rec, 5.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PseudoObservations)->RangeMultiplier(4)->Range(256, 1 << 18)->Complexity();

static void BM_PseudoObservationsNaive(benchmark::State& state) {
  const auto rec = oracle::random_records(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::pseudo_observations(rec, 5.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PseudoObservationsNaive)->RangeMultiplier(2)->Range(64, 512)->Complexity();

static void BM_SampleCohort(benchmark::State& state) {
  const RiskDistribution d = BetaDist{1.33, 1.75};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_cohort(d, static_cast<std::size_t>(state.range(0)), kDefaultSeed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleCohort)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_FisherInfo(benchmark::State& state) {
  const auto cohort = sample_cohort(BetaDist{1.33, 1.75}, static_cast<std::size_t>(state.range(0)), 1);
  const auto lp = lp_samples(cohort.probs);
  for (auto _ : state) benchmark::DoNotOptimize(fisher_info(lp));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FisherInfo)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static PerformanceAnticipation anticipation() {
  PerformanceAnticipation a;
  a.threshold = 0.1;
  a.prevalence = 0.43;
  a.sensitivity = 0.988;
  a.specificity = 0.147;
  return a.completed();
}

static void BM_ClosedFormAll(benchmark::State& state) {
  const auto a = anticipation();
  for (auto _ : state) {
    for (Measure m : kAllMeasures) benchmark::DoNotOptimize(solve_wald(a, {m, TargetMode::CIW, 0.1}));
  }
}
BENCHMARK(BM_ClosedFormAll);

static void BM_AgrestiCoullIterative(benchmark::State& state) {
  const auto a = anticipation();
  for (auto _ : state) {
    for (Measure m : kProportionMeasures) benchmark::DoNotOptimize(n_iterative_agresti_coull(m, a, 0.1));
  }
}
BENCHMARK(BM_AgrestiCoullIterative);

static void BM_SurvivalRepetition(benchmark::State& state) {
  auto s = builtin_survival_scenario();
  s.sizes = {static_cast<std::size_t>(state.range(0))};
  std::size_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_repetition(s, 0, rep++));
}
BENCHMARK(BM_SurvivalRepetition)->Arg(3600)->Arg(14250)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
