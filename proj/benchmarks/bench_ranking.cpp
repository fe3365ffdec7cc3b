#include <benchmark/benchmark.h>

#include "calrisk/ranking.hpp"
#include "calrisk/synthetic.hpp"

namespace {

calrisk::EvaluationSet make_set(std::size_t n) {
    const auto confs =
        calrisk::sample_confidences(calrisk::DistributionId::Bell, n, 7);
    return calrisk::generate_labels(confs, calrisk::CalibrationModeId::Perfect, 7);
}

void BM_RocCurve(benchmark::State& state) {
    const auto set = make_set(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::roc_curve(set, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RocCurve)->Range(1000, 100000);

void BM_CwRocCurve(benchmark::State& state) {
    const auto set = make_set(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::cw_roc_curve(set, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CwRocCurve)->Range(1000, 100000);

void BM_AucGap(benchmark::State& state) {
    const auto set = make_set(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::auc_gap(set, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AucGap)->Range(1000, 100000);

} // namespace

BENCHMARK_MAIN();
