#include <benchmark/benchmark.h>

#include "monotile/coloured_graph.hpp"
#include "monotile/pipeline.hpp"
#include "monotile/ramsey_cover.hpp"
#include "monotile/sequence.hpp"
#include "monotile/vertex_set.hpp"

using namespace monotile;

// Hot kernel of every embedder: intersect colour rows across a window.
static void BM_CommonNeighbourhood(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(n, 2, 42);
    VertexSet within = VertexSet::full(n);
    std::vector<int> sources{0, n / 3, 2 * n / 3};
    for (auto _ : state) {
        VertexSet s = g.common_neighbourhood(sources, 0, within);
        benchmark::DoNotOptimize(s.count());
    }
}
BENCHMARK(BM_CommonNeighbourhood)->Arg(100)->Arg(400)->Arg(1000);

static void BM_EmbedMemberBacktracking(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(n, 2, 7);
    SequenceSpec spec = SequenceSpec::parse("path");
    VertexSet within = VertexSet::full(n);
    int k = n / 4;
    for (auto _ : state) {
        auto emb = embed_member_backtracking(g, within, spec, k, 0, 2'000'000);
        benchmark::DoNotOptimize(emb.has_value());
    }
}
BENCHMARK(BM_EmbedMemberBacktracking)->Arg(64)->Arg(200)->Arg(400);

static void BM_GreedyCover(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(n, 2, 13);
    SequenceSpec spec = SequenceSpec::parse("path");
    for (auto _ : state) {
        GreedyCoverResult res = greedy_cover(g, VertexSet::full(n), spec, 1, 3);
        benchmark::DoNotOptimize(res.tiles.size());
    }
}
BENCHMARK(BM_GreedyCover)->Arg(100)->Arg(250)->Arg(400);

static void BM_TilePipeline(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(n, 2, 23);
    SequenceSpec spec = SequenceSpec::parse("path");
    PipelineParams params;
    params.seed = 5;
    for (auto _ : state) {
        TileResult res = tile(g, spec, params);
        benchmark::DoNotOptimize(res.tiling.tiles.size());
    }
}
BENCHMARK(BM_TilePipeline)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
