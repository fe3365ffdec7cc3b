#include <benchmark/benchmark.h>

#include "calrisk/calibrators.hpp"
#include "calrisk/synthetic.hpp"

namespace {

void BM_SampleConfidences(benchmark::State& state) {
    const auto id = static_cast<calrisk::DistributionId>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::sample_confidences(id, 10000, 3));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
    state.SetLabel(calrisk::to_string(id));
}
BENCHMARK(BM_SampleConfidences)->DenseRange(0, 9);

void BM_RunExperiment(benchmark::State& state) {
    calrisk::ExperimentSpec spec;
    spec.n = static_cast<std::size_t>(state.range(0));
    spec.reps = 20;
    spec.master_seed = 9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::run_experiment(spec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 20);
}
BENCHMARK(BM_RunExperiment)->Arg(1000)->Arg(10000);

void BM_FitIsotonic(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto scores = calrisk::sample_confidences(calrisk::DistributionId::Uniform, n, 5);
    const auto set = calrisk::generate_labels(scores, calrisk::CalibrationModeId::Perfect, 5);
    std::vector<bool> correct;
    correct.reserve(n);
    for (const auto& rec : set.records()) correct.push_back(rec.correct());
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::fit_isotonic(scores, correct));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitIsotonic)->Range(1000, 100000);

void BM_FitPlatt(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto scores = calrisk::sample_confidences(calrisk::DistributionId::Uniform, n, 6);
    const auto set = calrisk::generate_labels(scores, calrisk::CalibrationModeId::Perfect, 6);
    std::vector<bool> correct;
    correct.reserve(n);
    for (const auto& rec : set.records()) correct.push_back(rec.correct());
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::fit_platt(scores, correct));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitPlatt)->Range(1000, 100000);

} // namespace

BENCHMARK_MAIN();
