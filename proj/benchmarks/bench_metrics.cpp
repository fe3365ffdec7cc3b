#include <benchmark/benchmark.h>

#include "calrisk/metrics.hpp"
#include "calrisk/synthetic.hpp"

namespace {

calrisk::EvaluationSet make_set(std::size_t n) {
    const auto confs =
        calrisk::sample_confidences(calrisk::DistributionId::Uniform, n, 42);
    return calrisk::generate_labels(confs, calrisk::CalibrationModeId::Perfect, 42);
}

void BM_Csr(benchmark::State& state) {
    const auto set = make_set(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::csr(set));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Csr)->Range(1000, 1000000);

void BM_Ece(benchmark::State& state) {
    const auto set = make_set(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::ece(set, 15));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ece)->Range(1000, 1000000);

void BM_RiskReport(benchmark::State& state) {
    const auto set = make_set(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::risk_report(set, 15));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RiskReport)->Range(1000, 1000000);

void BM_ClipConfidences(benchmark::State& state) {
    const auto set = make_set(static_cast<std::size_t>(state.range(0)));
    const auto rows = set.records();
    for (auto _ : state) {
        benchmark::DoNotOptimize(calrisk::clip_confidences(rows, 2, 1e-8));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClipConfidences)->Range(1000, 1000000);

} // namespace

BENCHMARK_MAIN();
