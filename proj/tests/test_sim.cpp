#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "cdbroker/sim.hpp"
#include "helpers.hpp"

using namespace cdbroker;
using namespace cdbroker::sim;
using testutil::code_of;
using testutil::temp_dir;

namespace {

// A scenario small enough to run in milliseconds but with several epochs.
ScenarioConfig small_scenario(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.attributes.omega = 100.0;
  cfg.attributes.specs = {{"merit", Polarity::big_positive, 0.0, 1.0, 1.0}};
  cfg.params.rerank_interval = 10.0;
  cfg.roster = SyntheticRosterSpec{12, 50.0, 70.0, 0.0, 0.0};
  cfg.workload.clients = 60;
  cfg.workload.arrival_min = 0.01;
  cfg.workload.arrival_max = 0.5;
  cfg.workload.user_grv = 45.0;
  cfg.contents = ContentSpec{.count = 6};
  cfg.class_floors = {45.0};
  cfg.algorithms = {Algorithm::naive, Algorithm::fair, Algorithm::round_robin,
                    Algorithm::random_pick};
  cfg.seed = seed;
  return cfg;
}

const AlgorithmRun& run_of(const RunReport& r, Algorithm a) {
  for (const AlgorithmRun& run : r.algorithms) {
    if (run.algorithm == a) return run;
  }
  REQUIRE(false);
  return r.algorithms.front();
}

}  // namespace

TEST_CASE("events drain by time, then by kind, then by insertion") {
  EventQueue q;
  q.push(2.0, EventKlass::measure, 10);
  q.push(1.0, EventKlass::rerank, 11);
  q.push(1.0, EventKlass::completion, 12);
  q.push(1.0, EventKlass::request, 13);
  q.push(1.0, EventKlass::measure, 14);
  q.push(1.0, EventKlass::measure, 15);
  q.push(0.5, EventKlass::request, 16);

  std::vector<long long> order;
  while (!q.empty()) order.push_back(q.pop().payload);
  // 0.5 first; at t=1 completion beats measures beats request beats rerank;
  // the two measures keep their insertion order; t=2 drains last.
  CHECK(order == std::vector<long long>{16, 12, 14, 15, 13, 11, 10});
}

TEST_CASE("a quiet provider model repeats its base vector") {
  AttributeSet set;
  set.omega = 100.0;
  set.specs = {{"up", Polarity::big_positive, 0.0, 100.0, 1.0},
               {"down", Polarity::small_positive, 0.0, 100.0, 1.0}};
  ProviderModel m{"p", {60.0, 30.0}, {0.0, 0.0}, {2.0, 2.0}, Rng(1), {}};

  CHECK(m.sample(set, 0) == QosVector{60.0, 30.0});
  CHECK(m.sample(set, 0) == QosVector{60.0, 30.0});

  // Load pushes each attribute toward its own worst end.
  CHECK(m.sample(set, 3) == QosVector{54.0, 36.0});

  // ... but never past the bounds.
  CHECK(m.sample(set, 100) == QosVector{0.0, 100.0});
}

TEST_CASE("provider drift is a seeded, reproducible walk") {
  AttributeSet set;
  set.omega = 100.0;
  set.specs = {{"q", Polarity::big_positive, 0.0, 100.0, 1.0}};

  ProviderModel a{"p", {50.0}, {1.5}, {0.0}, Rng(7), {}};
  ProviderModel b{"p", {50.0}, {1.5}, {0.0}, Rng(7), {}};
  bool moved = false;
  for (int i = 0; i < 20; ++i) {
    const QosVector va = a.sample(set, 0);
    CHECK(va == b.sample(set, 0));
    moved = moved || va[0] != 50.0;
  }
  CHECK(moved);
}

TEST_CASE("a run without clients still measures and publishes one epoch") {
  ScenarioConfig cfg = small_scenario(3);
  cfg.workload.clients = 0;
  const RunReport r = run_scenario(cfg);
  CHECK(r.epochs == 1);
  CHECK(r.request_events == 0);
  CHECK(r.measure_events == 12 * 5);
  CHECK(r.tables.size() == 2);  // initial table plus one rebuild
  REQUIRE(r.algorithms.size() == 4);
  for (const AlgorithmRun& run : r.algorithms) {
    CHECK(run.rows.empty());
    CHECK(run.mean_grv == 0.0);
    CHECK(run.reliability == 0.0);
    CHECK(run.final_jain == 0.0);
  }
}

TEST_CASE("a single qualified provider carries the whole run") {
  ScenarioConfig cfg = small_scenario(3);
  cfg.roster = SyntheticRosterSpec{1, 60.0, 60.0, 0.0, 0.0};
  const RunReport r = run_scenario(cfg);
  for (const AlgorithmRun& run : r.algorithms) {
    REQUIRE(run.rows.size() == 60);
    for (const TraceRow& row : run.rows) {
      CHECK(row.provider_id == "P1");
      CHECK(!row.fallback);
    }
    CHECK(run.distinct_providers == 1);
    CHECK(run.fallback_count == 0);
    CHECK(run.stdev_grv == 0.0);
    CHECK(run.final_jain == 1.0);
  }
}

TEST_CASE("the measurement and rebuild cadence follows the epoch length") {
  const RunReport r = run_scenario(small_scenario(5));
  CHECK(r.epochs >= 2);  // ~15s of arrivals over 10s epochs
  CHECK(static_cast<long long>(r.tables.size()) == r.epochs + 1);
  CHECK(r.measure_events == r.epochs * 12 * 5);
  CHECK(r.request_events == 60);
  for (std::size_t i = 0; i < r.tables.size(); ++i) {
    CHECK(r.tables[i].epoch == static_cast<long long>(i));
    CHECK(r.tables[i].created_at == doctest::Approx(10.0 * i));
    CHECK(r.tables[i].entries.size() == 12);
  }
}

TEST_CASE("algorithms replay one shared request stream in isolation") {
  const RunReport all = run_scenario(small_scenario(8));

  // Same arrivals and requirements in every per-algorithm trace.
  const AlgorithmRun& naive = run_of(all, Algorithm::naive);
  for (const AlgorithmRun& run : all.algorithms) {
    REQUIRE(run.rows.size() == naive.rows.size());
    for (std::size_t i = 0; i < run.rows.size(); ++i) {
      CHECK(run.rows[i].seq == naive.rows[i].seq);
      CHECK(run.rows[i].arrival == naive.rows[i].arrival);
      CHECK(run.rows[i].req_grv == naive.rows[i].req_grv);
    }
  }

  // Running one algorithm alone reproduces its side of the joint run.
  ScenarioConfig solo_cfg = small_scenario(8);
  solo_cfg.algorithms = {Algorithm::fair};
  const RunReport solo = run_scenario(solo_cfg);
  const AlgorithmRun& joint_fair = run_of(all, Algorithm::fair);
  const AlgorithmRun& solo_fair = run_of(solo, Algorithm::fair);
  REQUIRE(solo_fair.rows.size() == joint_fair.rows.size());
  for (std::size_t i = 0; i < solo_fair.rows.size(); ++i) {
    CHECK(solo_fair.rows[i].provider_id == joint_fair.rows[i].provider_id);
    CHECK(solo_fair.rows[i].provider_grv == joint_fair.rows[i].provider_grv);
    CHECK(solo_fair.rows[i].jain_after == joint_fair.rows[i].jain_after);
  }
  CHECK(summary_json(solo).find("\"fair\"") != std::string::npos);
}

TEST_CASE("identical configurations yield byte-identical summaries") {
  ScenarioConfig cfg = small_scenario(11);
  std::get<SyntheticRosterSpec>(cfg.roster).drift = 0.02;
  const RunReport a = run_scenario(cfg);
  const RunReport b = run_scenario(cfg);
  CHECK(summary_json(a) == summary_json(b));

  ScenarioConfig other = cfg;
  other.seed = 12;
  CHECK(summary_json(run_scenario(other)) != summary_json(a));
}

TEST_CASE("a roster below the requirement degrades every request") {
  ScenarioConfig cfg = small_scenario(4);
  cfg.roster = SyntheticRosterSpec{5, 10.0, 20.0, 0.0, 0.0};  // all below 45
  const RunReport r = run_scenario(cfg);
  for (const AlgorithmRun& run : r.algorithms) {
    REQUIRE(!run.rows.empty());
    CHECK(run.fallback_count == static_cast<long long>(run.rows.size()));
    CHECK(run.distinct_providers == 1);  // always the current best
    CHECK(run.final_jain == 0.0);        // nobody qualified at the end
    for (const TraceRow& row : run.rows) {
      CHECK(row.fallback);
      CHECK(!row.z_value.has_value());
      CHECK(row.jain_after == 1.0);  // nothing to recompute, carried forward
    }
  }
}

TEST_CASE("internal contents are served without provider selection") {
  ScenarioConfig cfg = small_scenario(6);
  cfg.contents = ContentSpec{};
  cfg.contents.items = {{"local-a", true, {}}, {"local-b", true, {}}};
  const RunReport r = run_scenario(cfg);
  CHECK(r.request_events == 60);
  CHECK(r.internal_hits == 60);
  for (const AlgorithmRun& run : r.algorithms) CHECK(run.rows.empty());
}

TEST_CASE("per-content exclusions hold across every algorithm") {
  ScenarioConfig cfg = small_scenario(9);
  cfg.contents = ContentSpec{};
  cfg.contents.items = {{"fenced", false, {"P01", "P02"}}};
  const RunReport r = run_scenario(cfg);
  for (const AlgorithmRun& run : r.algorithms) {
    REQUIRE(run.rows.size() == 60);
    CHECK(run.fallback_count == 0);  // ten qualified providers remain
    for (const TraceRow& row : run.rows) {
      CHECK(row.provider_id != "P01");
      CHECK(row.provider_id != "P02");
    }
  }
}

TEST_CASE("skewed popularity concentrates requests on the head content") {
  ScenarioConfig cfg = small_scenario(10);
  cfg.workload.clients = 200;
  cfg.workload.popularity = WorkloadSpec::Popularity::zipf;
  cfg.workload.zipf_exponent = 3.0;
  cfg.contents = ContentSpec{};
  cfg.contents.items = {{"head", true, {}},
                        {"tail-1", false, {}},
                        {"tail-2", false, {}},
                        {"tail-3", false, {}}};
  const RunReport r = run_scenario(cfg);
  // With exponent 3 the head item draws ~85% of requests.
  CHECK(r.internal_hits > 120);
  CHECK(r.internal_hits < 200);
  CHECK(summary_json(run_scenario(cfg)) == summary_json(r));
}

TEST_CASE("a dataset-backed roster drives the same pipeline") {
  const auto dir = temp_dir("sim-ds");
  {
    std::ofstream out(dir / "svc.csv");
    out << "Service Name,Response Time,Availability,Throughput,Successability,"
           "Reliability,Compliance,Best Practices,Latency,Documentation\n";
    for (int i = 1; i <= 6; ++i) {
      out << "svc" << i << ',' << 100 * i << ",85,10,90,70,80,75,40,60\n";
    }
  }
  ScenarioConfig cfg;
  cfg.attributes.omega = 100.0;
  cfg.attributes.specs = {
      {"Response Time", Polarity::small_positive, 0.0, 1000.0, 1.0}};
  cfg.params.rerank_interval = 10.0;
  cfg.roster = DatasetRosterSpec{(dir / "svc.csv").string(), "", 0.0, 0.0};
  cfg.workload.clients = 40;
  cfg.workload.arrival_min = 0.05;
  cfg.workload.arrival_max = 0.5;
  cfg.workload.qos_floor = QosVector{650.0};  // merit 35 -> low bar
  cfg.contents = ContentSpec{.count = 4};
  cfg.algorithms = {Algorithm::naive, Algorithm::fair};
  cfg.seed = 2;

  const RunReport r = run_scenario(cfg);
  CHECK(r.request_events == 40);
  CHECK(r.tables[0].entries.size() == 6);
  CHECK(r.tables[0].entries[0].id == "svc1");  // fastest response wins
  for (const AlgorithmRun& run : r.algorithms) {
    REQUIRE(!run.rows.empty());
    for (const TraceRow& row : run.rows) {
      CHECK(row.provider_id.substr(0, 3) == "svc");
    }
  }
  CHECK(summary_json(run_scenario(cfg)) == summary_json(r));
}

TEST_CASE("report files round-trip through the recomputation path") {
  const auto dir = temp_dir("sim-report");
  const RunReport r = run_scenario(small_scenario(13));
  write_report_files(r, dir.string());

  for (const char* name :
       {"trace_naive.csv", "trace_fair.csv", "trace_round_robin.csv",
        "trace_random.csv", "ranks.csv", "fairness.csv", "summary.json"}) {
    CHECK(std::filesystem::exists(dir / name));
  }

  const nlohmann::json full = nlohmann::json::parse(summary_json(r));
  const nlohmann::json redone =
      nlohmann::json::parse(summarize_report_dir(dir.string()));
  CHECK(full.at("grv_user") == redone.at("grv_user"));
  CHECK(full.at("algorithms") == redone.at("algorithms"));

  CHECK(code_of([&] { summarize_report_dir((dir / "empty").string()); }) ==
        Errc::not_found);
}
