#include <benchmark/benchmark.h>

#include "polarsim/engine.hpp"
#include "polarsim/metrics.hpp"
#include "polarsim/worldgen.hpp"

using namespace polarsim;

namespace {

WorldConfig bench_config(std::size_t users) {
  auto config = WorldConfig::from_json_text(R"({
    "user_count": 1000, "rng_seed": 9, "posting_rate": 0.1,
    "repost_prob": 0.45, "cross_topic_arcs_per_user": 2,
    "topics": {
      "a": {"fraction": 0.5, "regime": "broadcast", "hub_exponent": 2.1,
            "target_reciprocity": 0.0, "arcs_per_node": 1},
      "b": {"fraction": 0.5, "regime": "mutual", "target_reciprocity": 0.5,
            "arcs_per_node": 6}
    }
  })");
  config.user_count = users;
  return config;
}

World& warm_world() {
  static World world = [] {
    World w = generate_world(bench_config(2000));
    Engine engine(w);
    engine.step_until(168.0);
    return w;
  }();
  return world;
}

}  // namespace

static void BM_GenerateWorld(benchmark::State& state) {
  const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    World w = generate_world(config);
    benchmark::DoNotOptimize(w.graph.arc_count());
  }
}
BENCHMARK(BM_GenerateWorld)->Arg(1000)->Arg(5000);

static void BM_EngineWeek(benchmark::State& state) {
  World base = generate_world(bench_config(2000));
  for (auto _ : state) {
    World w = base;
    Engine engine(w);
    benchmark::DoNotOptimize(engine.step_until(168.0).size());
  }
}
BENCHMARK(BM_EngineWeek);

static void BM_ComposeTimeline(benchmark::State& state) {
  World& w = warm_world();
  std::vector<UserId> followings;
  for (UserId u = 0; u < static_cast<UserId>(state.range(0)); ++u)
    followings.push_back(u * 7 % w.users.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(compose_timeline(w, followings, 168.0));
}
BENCHMARK(BM_ComposeTimeline)->Arg(3)->Arg(60)->Arg(120);

static void BM_ReciprocalMetrics(benchmark::State& state) {
  World& w = warm_world();
  for (auto _ : state)
    benchmark::DoNotOptimize(reciprocal_metrics(w.graph).global_reciprocity);
}
BENCHMARK(BM_ReciprocalMetrics);

static void BM_DirectedClustering(benchmark::State& state) {
  World& w = warm_world();
  for (auto _ : state) benchmark::DoNotOptimize(directed_clustering(w.graph));
}
BENCHMARK(BM_DirectedClustering);

BENCHMARK_MAIN();
