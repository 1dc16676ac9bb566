#include "subiso/lcst.hpp"
#include "subiso/matching.hpp"
#include "subiso/ov.hpp"
#include "subiso/subiso.hpp"

#include <benchmark/benchmark.h>

using namespace subiso;

namespace {

void BM_Deterministic(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tree h = random_tree(n / 4, 3, 12, 1);
    const Tree g = random_tree(n, 3, 14, 2);
    for (auto _ : state) benchmark::DoNotOptimize(subiso_det(h, g).contained);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Deterministic)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_RandBinaryComplete(benchmark::State& state) {
    const Tree t = complete_dary(2, static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    std::uint64_t calls = 0;
    for (auto _ : state) {
        const auto r = rand_binary(t, t, seed++);
        calls += r.stats.base_calls();
    }
    state.counters["base_calls"] = benchmark::Counter(static_cast<double>(calls), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_RandBinaryComplete)->DenseRange(4, 10, 2);

void BM_RandDary(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Tree h = random_tree(120, d, 6, 3);
    const Tree g = random_tree(300, d, 7, 4);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(rand_dary(h, g, d, seed++).contained);
}
BENCHMARK(BM_RandDary)->DenseRange(2, 4);

void BM_PerfectMatching(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    SplitMix64 rng(5);
    Adjacency a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a.set(i, j, rng.below(3) != 0);
    for (auto _ : state) benchmark::DoNotOptimize(has_perfect_matching(a));
}
BENCHMARK(BM_PerfectMatching)->RangeMultiplier(2)->Range(4, 64);

void BM_Lcst(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tree h = random_tree(n, 3, 12, 6);
    const Tree g = random_tree(n, 3, 12, 7);
    for (auto _ : state) benchmark::DoNotOptimize(lcst(h, g).size);
}
BENCHMARK(BM_Lcst)->RangeMultiplier(4)->Range(64, 1024);

void BM_BoundedReduction(benchmark::State& state) {
    const OvInstance inst = random_ov(static_cast<std::size_t>(state.range(0)), 8, 0.7, 8);
    for (auto _ : state) {
        const SubisoInstance r = build_bounded_instance(inst, 2);
        benchmark::DoNotOptimize(subiso_det(r.h, r.g).contained);
    }
}
BENCHMARK(BM_BoundedReduction)->RangeMultiplier(2)->Range(2, 16);

}  // namespace
BENCHMARK_MAIN();
