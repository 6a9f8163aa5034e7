#include <benchmark/benchmark.h>

#include "troplift/divisor.hpp"

using namespace troplift;

namespace {

// Chain of g loops, the i-th loop made of two edges of lengths 2 + i and 3 + i,
// with the divisor placing d chips spread over the vertices.
struct Instance {
  SubdividedGraph sg;
  GraphDivisor d;
};

Instance chain_of_loops(long g, long d) {
  std::vector<std::string> names;
  std::vector<EdgeSpec> edges;
  std::vector<long> lengths;
  for (long i = 0; i <= g; ++i) names.push_back("u" + std::to_string(i));
  for (long i = 0; i < g; ++i) {
    edges.push_back({"a" + std::to_string(i), names[i], names[i + 1]});
    edges.push_back({"b" + std::to_string(i), names[i], names[i + 1]});
  }
  // Edges are stored in id order: all a's, then all b's.
  for (long i = 0; i < g; ++i) lengths.push_back(2 + i);
  for (long i = 0; i < g; ++i) lengths.push_back(3 + i);
  SubdividedGraph sg(MetricGraph(Multigraph(names, edges), ChainStructure(lengths)));
  GraphDivisor div(sg.vertex_count(), 0);
  for (long k = 0; k < d; ++k) ++div[static_cast<std::size_t>(k % (g + 1))];
  return {std::move(sg), std::move(div)};
}

void BM_rank_parallel(benchmark::State& state) {
  auto inst = chain_of_loops(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rank(inst.sg, inst.d, {24, true}));
}

void BM_rank_serial(benchmark::State& state) {
  auto inst = chain_of_loops(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rank(inst.sg, inst.d, {24, false}));
}

void BM_rank_reference(benchmark::State& state) {
  auto inst = chain_of_loops(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rank_reference(inst.sg, inst.d));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long g : {2, 3, 4}) b->Args({g, g + 1});
  b->Args({3, 6});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_rank_parallel)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_rank_serial)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_rank_reference)->Apply(sizes)->UseRealTime();

BENCHMARK_MAIN();
