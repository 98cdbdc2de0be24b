#include <benchmark/benchmark.h>

#include <vector>

#include "benfordscan/benford.hpp"
#include "benfordscan/features.hpp"
#include "benfordscan/models.hpp"
#include "benfordscan/random.hpp"
#include "benfordscan/synth.hpp"
#include "benfordscan/txgraph.hpp"

using namespace benfordscan;

namespace {

std::vector<WeiAmount> random_amounts(std::size_t n) {
  Rng rng(1);
  std::vector<WeiAmount> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(WeiAmount::from_uint(1 + rng.below(1'000'000'000'000ULL)));
  return out;
}

SyntheticDataset dataset(std::size_t legit, std::size_t scam) {
  GeneratorConfig c;
  c.n_legit = legit;
  c.n_scam = scam;
  c.seed = 7;
  return generate(c);
}

}  // namespace

static void BM_DigitTally(benchmark::State& state) {
  const auto values = random_amounts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    DigitTally tally;
    for (const auto& v : values) tally.add(v);
    benchmark::DoNotOptimize(fit_tally(tally));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DigitTally)->Arg(1000)->Arg(100000);

static void BM_ExtractFeatures(benchmark::State& state) {
  const auto data = dataset(static_cast<std::size_t>(state.range(0)), 10);
  const auto graph = build_graph(data.records);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_dataset(graph, data.labels));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.labels.size()));
}
BENCHMARK(BM_ExtractFeatures)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_TrainGbdt(benchmark::State& state) {
  const auto data = dataset(200, 20);
  const auto examples = build_dataset(build_graph(data.records), data.labels);
  SplitSpec spec;
  spec.seed = 1;
  const auto parts = split(examples, spec);
  const auto columns = feature_columns();
  const auto train_set = design_matrix(parts.train, columns);
  const auto valid_set = design_matrix(parts.valid, columns);
  TrainConfig config;
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(ModelKind::gbdt, train_set, valid_set, config));
  }
}
BENCHMARK(BM_TrainGbdt)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
