#include <benchmark/benchmark.h>

#include "denfg/combinatorics.hpp"
#include "denfg/covers.hpp"
#include "denfg/ensembles.hpp"
#include "denfg/permanent.hpp"
#include "denfg/spa.hpp"

namespace {

using namespace denfg;

constexpr double kPi = 3.14159265358979323846;

ComplexMatrix bench_matrix(std::size_t n) {
    EnsembleSpec es;
    es.alpha = kPi;
    es.n = n;
    es.seed = 12345;
    es.count = 1;
    return sample_matrix(es, 0);
}

void BM_perm_ryser(benchmark::State& state) {
    const auto m = bench_matrix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(perm_ryser(m));
}
BENCHMARK(BM_perm_ryser)->DenseRange(4, 16, 4);

void BM_perm_naive(benchmark::State& state) {
    const auto m = bench_matrix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(perm_naive(m));
}
BENCHMARK(BM_perm_naive)->DenseRange(4, 8, 2);

void BM_spa_iteration(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto model = build_denfg(bench_matrix(n));
    SpaConfig cfg;
    Rng rng(7);
    MessageState st = init_messages(model, cfg, rng);
    for (auto _ : state) benchmark::DoNotOptimize(spa_step(st, model, cfg));
    state.SetItemsProcessed(state.iterations() * 4 * n * n);
}
BENCHMARK(BM_spa_iteration)->DenseRange(4, 16, 4);

void BM_run_spa(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto model = build_denfg(bench_matrix(n));
    SpaConfig cfg;
    cfg.seed = 3;
    for (auto _ : state) benchmark::DoNotOptimize(run_spa(model, cfg));
}
BENCHMARK(BM_run_spa)->DenseRange(4, 10, 3);

void BM_zb2_exact(benchmark::State& state) {
    const auto m = bench_matrix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(zb2_denfg_exact(m));
}
BENCHMARK(BM_zb2_exact)->DenseRange(2, 4, 1);

void BM_cycle_index_recurrence(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(psi_log(n, 2.0, 1.0, 2.0, 0.25));
}
BENCHMARK(BM_cycle_index_recurrence)->RangeMultiplier(2)->Range(50, 400);

void BM_sample_matrix(benchmark::State& state) {
    EnsembleSpec es;
    es.alpha = kPi;
    es.n = static_cast<std::size_t>(state.range(0));
    es.seed = 99;
    es.count = 1u << 30;
    std::size_t index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_matrix(es, index++));
}
BENCHMARK(BM_sample_matrix)->DenseRange(4, 16, 6);

} // namespace

BENCHMARK_MAIN();
