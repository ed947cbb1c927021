#include "hybrid/ldel.h"
#include "hybrid/overlay.h"
#include "hybrid/pipeline.h"
#include "hybrid/scenario.h"

#include <benchmark/benchmark.h>

#include <cmath>
#include <map>

using namespace hybrid;

namespace {

HybridTopology scenario(std::size_t n) {
    ScenarioSpec spec;
    spec.seed = 7;
    spec.node_count = n;
    const double side = std::sqrt(static_cast<double>(n) / 4.0);
    spec.region = {0, 0, side, side};
    spec.spacing = 0.35;
    spec.obstacles = {rectangle(side * 0.3, side * 0.3, side * 0.55, side * 0.6)};
    return generate_scenario(spec);
}

const HybridTopology& cached(std::size_t n) {
    static std::map<std::size_t, HybridTopology> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, scenario(n)).first;
    return it->second;
}

void BM_BuildLdel(benchmark::State& state) {
    const HybridTopology& t = cached(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_ldel2(t));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildLdel)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Pipeline(benchmark::State& state) {
    const HybridTopology& t = cached(static_cast<std::size_t>(state.range(0)));
    std::int64_t rounds = 0;
    for (auto _ : state) {
        Pipeline p(t, PipelineConfig{});
        p.build();
        rounds = p.report().total_rounds;
    }
    state.counters["rounds"] = static_cast<double>(rounds);
}
BENCHMARK(BM_Pipeline)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Route(benchmark::State& state) {
    const HybridTopology& t = cached(static_cast<std::size_t>(state.range(0)));
    PipelineConfig cfg;
    cfg.backend = state.range(1) ? Backend::OverlayDelaunay : Backend::Visibility;
    Pipeline p(t, cfg);
    p.build();
    const auto queries = p.sample_queries(64);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto [s, d] = queries[i++ % queries.size()];
        benchmark::DoNotOptimize(p.router().route(t.index_of(s), t.index_of(d)));
    }
}
BENCHMARK(BM_Route)->Args({1024, 0})->Args({1024, 1})->Unit(benchmark::kMicrosecond);

// Bitonic sort plus hull on a single counterclockwise ring.
void BM_RingSortAndHull(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const double r = 0.4 / std::sin(3.14159265358979 / static_cast<double>(k));
    std::map<NodeId, Point> nodes;
    for (std::size_t i = 0; i < k; ++i) {
        const double a = 2.0 * 3.14159265358979 * static_cast<double>(i) / static_cast<double>(k);
        const double rr = i % 2 ? r - 0.1 : r;
        nodes.emplace(static_cast<NodeId>(i), Point{rr * std::cos(a), rr * std::sin(a)});
    }
    const HybridTopology topo = build_udg(nodes);
    RingSpec ring;
    for (std::size_t i = 0; i < k; ++i) ring.members.push_back(static_cast<NodeIndex>(i));
    const std::vector<RingSpec> rings{ring};
    for (auto _ : state) {
        RoundEngine eng(topo, 1);
        const auto jumps = pointer_jumping(eng, rings, exchange_ring_neighbours(eng, rings));
        const auto cubes = assign_hypercube_ids(eng, rings, jumps);
        std::vector<std::vector<SortKey>> keys(1);
        for (std::size_t s = 0; s < cubes[0].slot_count(); ++s) {
            SortKey key;
            if (!cubes[0].is_virtual(s)) {
                const NodeIndex v = cubes[0].host_of_slot[s];
                key = {topo.points[v].x, topo.points[v].y, v};
            }
            keys[0].push_back(key);
        }
        const auto sorted = hypercube_sort(eng, cubes, keys);
        benchmark::DoNotOptimize(parallel_convex_hull(eng, cubes, sorted));
        state.counters["rounds"] = static_cast<double>(eng.round());
    }
}
BENCHMARK(BM_RingSortAndHull)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
