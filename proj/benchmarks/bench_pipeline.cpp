#include "adhcn/dataset.hpp"
#include "adhcn/hypergraph.hpp"
#include "adhcn/line_expansion.hpp"
#include "adhcn/model.hpp"
#include "adhcn/rng.hpp"
#include "adhcn/train.hpp"

#include <benchmark/benchmark.h>

using namespace adhcn;

namespace {

Hypergraph make_hypergraph(Index nodes, Index edges, Index edge_size, std::uint64_t seed) {
    RandomStream stream(seed, 0);
    std::vector<Index> pool(static_cast<std::size_t>(nodes));
    for (Index i = 0; i < nodes; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<std::vector<Index>> member_lists;
    for (Index e = 0; e < edges; ++e) {
        for (Index i = 0; i < edge_size; ++i) {
            const std::size_t j = static_cast<std::size_t>(i) +
                                  static_cast<std::size_t>(stream.uniform_int(pool.size() - i));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        std::vector<Index> edge(pool.begin(), pool.begin() + edge_size);
        std::sort(edge.begin(), edge.end());
        member_lists.push_back(std::move(edge));
    }
    return Hypergraph::make(nodes, std::move(member_lists));
}

void BM_LineExpand(benchmark::State& state) {
    const Hypergraph hg = make_hypergraph(state.range(0), state.range(0) / 2, 4, 7);
    for (auto _ : state) benchmark::DoNotOptimize(line_expand(hg));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LineExpand)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_HyperNormOperator(benchmark::State& state) {
    const Hypergraph hg = make_hypergraph(state.range(0), state.range(0) / 2, 4, 7);
    for (auto _ : state) benchmark::DoNotOptimize(hyper_norm_operator(hg));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HyperNormOperator)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_SparseDenseProduct(benchmark::State& state) {
    const Hypergraph hg = make_hypergraph(state.range(0), state.range(0) / 2, 4, 7);
    const SparseMatrix op = hyper_norm_operator(hg);
    Matrix x(op.cols(), 32);
    RandomStream stream(9, 0);
    for (double& v : x.data()) v = stream.normal();
    for (auto _ : state) benchmark::DoNotOptimize(spmm(op, x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SparseDenseProduct)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_TrainingStep(benchmark::State& state) {
    SynthConfig cfg;
    cfg.num_nodes = state.range(0);
    cfg.num_edges = state.range(0) / 2;
    cfg.seed = 11;
    const Dataset ds = gen_planted_partition(cfg);
    const PipelineOperators ops = PipelineOperators::build(ds.hypergraph);
    RandomStream init(11, kStreamInit);
    ModelParams params = init_params({cfg.feature_dim, 64, cfg.num_classes},
                                     FusionStrategy::parse("attention"), init);
    std::vector<Index> mask(static_cast<std::size_t>(ds.num_nodes()));
    for (Index i = 0; i < ds.num_nodes(); ++i) mask[static_cast<std::size_t>(i)] = i;
    RandomStream hg_stream(11, kStreamHgDropout), le_stream(11, kStreamLeDropout);
    const DropoutSpec dropout{0.5, &hg_stream, &le_stream};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            compute_gradients(ops, ds.features, ds.labels, mask, params, 0.0005, dropout));
}
BENCHMARK(BM_TrainingStep)->Arg(600)->Arg(2400);

} // namespace

BENCHMARK_MAIN();
