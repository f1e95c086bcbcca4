// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "venuenet/linkage.hpp"
#include "venuenet/metrics.hpp"
#include "venuenet/network.hpp"
#include "venuenet/subgraphs.hpp"

using namespace venuenet;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

const Corpus& scale_corpus() {
  static const Corpus c = [] {
    gen::Rng rng(7);
    return parse_corpus(gen::scale_corpus_jsonl(rng, 20000, 200), CorpusFormat::CanonicalJsonl);
  }();
  return c;
}

const Graph& sparse_graph() {
  static const Graph g = [] {
    gen::Rng rng(11);
    return gen::random_graph(rng, 600, 0.02, true, true);
  }();
  return g;
}

void BM_Betweenness(benchmark::State& state) {
  const Graph& g = sparse_graph();
  for (auto _ : state)
    benchmark::DoNotOptimize(metrics::betweenness_centrality(g, {.weighted = true, .execution = mode(state)}));
}

void BM_PageRank(benchmark::State& state) {
  const Graph& g = sparse_graph();
  for (auto _ : state) benchmark::DoNotOptimize(metrics::pagerank(g, {.execution = mode(state)}));
}

void BM_KnowledgeNetwork(benchmark::State& state) {
  const CouplingMatrix m = build_coupling_matrix(scale_corpus());
  for (auto _ : state) benchmark::DoNotOptimize(build_knowledge_network(m, mode(state)));
}

void BM_Linkage(benchmark::State& state) {
  gen::Rng rng(4242);
  const auto fx = gen::linkage_fixture(rng, 2000);
  LinkageOptions opt;
  opt.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(link_corpora(fx.left, fx.right, opt));
}

void BM_ProfileVenues(benchmark::State& state) {
  const Corpus& c = scale_corpus();
  std::vector<std::string> venues;
  for (const auto& [key, info] : c.venues()) venues.push_back(key);
  for (auto _ : state)
    benchmark::DoNotOptimize(profile_venues(c, venues, {}, ClassificationScheme::standard(), mode(state)));
}

}  // namespace

BENCHMARK(BM_Betweenness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PageRank)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnowledgeNetwork)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Linkage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileVenues)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
