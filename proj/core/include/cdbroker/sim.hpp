#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "cdbroker/content_index.hpp"
#include "cdbroker/ranking.hpp"
#include "cdbroker/rng.hpp"
#include "cdbroker/scenario.hpp"

namespace cdbroker::sim {

// Deterministic event queue ordered by (time, klass, insertion sequence).
// The klass encodes the fixed same-timestamp ordering: deliveries complete
// first, then measurements, then requests, and rank rebuilds last — so a
// request arriving exactly on an epoch boundary still sees the old table.
enum class EventKlass : int {
  completion = 0,
  measure = 1,
  request = 2,
  rerank = 3,
};

struct Event {
  double time = 0.0;
  EventKlass klass = EventKlass::measure;
  long long seq = 0;      // insertion order, breaks remaining ties
  long long payload = 0;  // provider index / request index
};

class EventQueue {
 public:
  void push(double time, EventKlass klass, long long payload);
  bool empty() const { return heap_.empty(); }
  Event pop();

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const;
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  long long next_seq_ = 0;
};

// Synthetic QoS source for one provider: a base vector plus an optional
// seeded random walk, degraded further by in-flight deliveries. Samples are
// deterministic given the seed and the sequence of calls.
struct ProviderModel {
  std::string id;
  QosVector base;
  QosVector drift_step;    // absolute per-sample walk step per attribute
  QosVector load_penalty;  // absolute degradation per in-flight delivery
  Rng noise{1};
  QosVector walk;

  // Raw QoS vector under `in_flight` concurrent deliveries; each value is
  // pushed toward its attribute's worst bound by the load penalty and
  // clamped into [lower, upper].
  QosVector sample(const AttributeSet& set, int in_flight);
};

struct TraceRow {
  long long seq = 0;  // request number, 1-based, shared across algorithms
  double arrival = 0.0;
  double req_grv = 0.0;
  std::string provider_id;
  double provider_grv = 0.0;
  bool fallback = false;
  std::optional<double> z_value;  // fair only
  double jain_after = 1.0;
};

struct AlgorithmRun {
  Algorithm algorithm = Algorithm::naive;
  std::vector<TraceRow> rows;
  long long fallback_count = 0;
  long long distinct_providers = 0;
  double mean_grv = 0.0;
  double stdev_grv = 0.0;
  double reliability = 0.0;
  double final_jain = 0.0;
};

struct RunReport {
  std::uint64_t seed = 0;
  long long epochs = 0;
  long long measure_events = 0;
  long long request_events = 0;
  long long internal_hits = 0;  // requests short-circuited by local content
  double grv_user = 0.0;
  std::vector<RankTable> tables;  // epoch 0 .. epochs
  std::vector<AlgorithmRun> algorithms;
};

// Runs the scenario to completion: builds the roster and epoch-0 ranking,
// fires heartbeat measurements and periodic reranks, and replays the same
// request stream through every configured algorithm with isolated state.
// Identical (config, seed) pairs produce identical reports.
RunReport run_scenario(const ScenarioConfig& cfg);

// Serializes a report into `out_dir`: trace_<algorithm>.csv per algorithm,
// ranks.csv (all epochs), fairness.csv, and summary.json.
void write_report_files(const RunReport& report, const std::string& out_dir);

std::string summary_json(const RunReport& report);

// Statistics block recomputed from previously written report files; used by
// the report CLI subcommand and for the lossless round-trip check.
std::string summarize_report_dir(const std::string& dir);

}  // namespace cdbroker::sim
