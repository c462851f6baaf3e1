#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cdbroker/grv.hpp"
#include "cdbroker/ranking.hpp"
#include "cdbroker/selection.hpp"

namespace {

using namespace cdbroker;

AttributeSet flat_set(int m) {
  AttributeSet set;
  set.omega = 100.0;
  for (int j = 0; j < m; ++j) {
    set.specs.push_back(
        {"a" + std::to_string(j), Polarity::big_positive, 0.0, 100.0, 1.0});
  }
  return set;
}

GrvParams params_for(const AttributeSet& set, int window) {
  GrvParams p;
  p.attribute_count = static_cast<int>(set.size());
  p.measures_per_epoch = window;
  p.merit_scale = set.omega;
  return p;
}

void BM_grv_provider(benchmark::State& state) {
  const int window = static_cast<int>(state.range(0));
  const AttributeSet set = flat_set(9);
  const GrvParams p = params_for(set, window);
  EpochMeasures em;
  em.provider_id = "P1";
  for (int k = 0; k < window; ++k) {
    em.merit_sums.push_back(500.0 + static_cast<double>(k));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(grv_provider(em, p));
  }
}
BENCHMARK(BM_grv_provider)->Arg(5)->Arg(20)->Arg(80);

// The attribute-count sweep behind the rank-init scaling check; expected to
// grow roughly linearly with m.
void BM_initialize_ranks(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const AttributeSet set = flat_set(m);
  const GrvParams p = params_for(set, 5);
  std::vector<std::string> ids;
  for (int i = 0; i < 100; ++i) ids.push_back("P" + std::to_string(1000 + i));
  const std::vector<std::string> contents{"c1", "c2", "c3", "c4", "c5"};
  const QosVector probe(static_cast<std::size_t>(m), 42.0);
  const MeasureFn fn = [&](const std::string&, const std::string&) {
    return probe;
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(initialize_ranks(ids, contents, fn, set, p));
  }
}
BENCHMARK(BM_initialize_ranks)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_select_fair(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const AttributeSet set = flat_set(1);
  const GrvParams p = params_for(set, 5);
  Rng rng(7);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("P" + std::to_string(100000 + i));
  const MeasureFn fn = [&](const std::string&, const std::string&) {
    return QosVector{rng.uniform(40.0, 100.0)};
  };
  const RankTable table = initialize_ranks(ids, {"c1"}, fn, set, p);
  const UserClassTable classes = UserClassTable::from_grv_floors({30.0});
  SelectionState st;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_fair(30.0, table, classes, st, {}));
  }
}
BENCHMARK(BM_select_fair)->Arg(16)->Arg(128)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
