#include "cdbroker/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cdbroker/csv.hpp"
#include "cdbroker/dataset.hpp"
#include "cdbroker/format.hpp"
#include "cdbroker/selection.hpp"

namespace cdbroker::sim {

namespace fs = std::filesystem;

void EventQueue::push(double time, EventKlass klass, long long payload) {
  heap_.push(Event{time, klass, next_seq_++, payload});
}

Event EventQueue::pop() {
  Event ev = heap_.top();
  heap_.pop();
  return ev;
}

bool EventQueue::Later::operator()(const Event& a, const Event& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.klass != b.klass) {
    return static_cast<int>(a.klass) > static_cast<int>(b.klass);
  }
  return a.seq > b.seq;
}

QosVector ProviderModel::sample(const AttributeSet& set, int in_flight) {
  const std::size_t m = base.size();
  if (walk.size() != m) walk.assign(m, 0.0);
  QosVector out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const AttributeSpec& spec = set.specs[j];
    if (j < drift_step.size() && drift_step[j] != 0.0) {
      walk[j] += drift_step[j] * noise.uniform(-1.0, 1.0);
    }
    double v = base[j] + walk[j];
    const double load =
        (j < load_penalty.size() ? load_penalty[j] : 0.0) * in_flight;
    // Load pushes the value toward the attribute's worst end.
    v += spec.polarity == Polarity::small_positive ? load : -load;
    out[j] = std::clamp(v, spec.lower, spec.upper);
  }
  return out;
}

namespace {

// Seed-derivation stream tags. Each consumer of randomness gets its own
// stream so that, say, adding a provider does not shift the workload draws.
constexpr std::uint64_t kRosterStream = 1;
constexpr std::uint64_t kWorkloadStream = 2;
constexpr std::uint64_t kRandomAlgoStream = 3;
constexpr std::uint64_t kProviderStreamBase = 1000;

constexpr Algorithm kCanonicalOrder[] = {Algorithm::naive, Algorithm::fair,
                                         Algorithm::round_robin,
                                         Algorithm::random_pick};

std::string zero_pad(long long value, std::size_t width) {
  std::string s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

struct RequestDraw {
  double arrival = 0.0;
  std::size_t content = 0;
};

// Inverse-CDF sampler over content indices with p(i) proportional to
// 1 / (i+1)^s.
class ZipfPicker {
 public:
  ZipfPicker(std::size_t n, double s) {
    cumulative_.reserve(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += 1.0 / std::pow(static_cast<double>(i + 1), s);
      cumulative_.push_back(acc);
    }
    for (double& c : cumulative_) c /= acc;
  }

  std::size_t pick(double u01) const {
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u01);
    return std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative_.begin()),
        cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

double final_jain_stat(const RankTable& final_table, double grv_user,
                       const std::map<std::string, long long>& counts) {
  std::vector<double> alloc;
  bool any = false;
  for (const ProviderRecord& e : final_table.entries) {
    if (round6(e.grv) < grv_user) continue;
    const auto it = counts.find(e.id);
    const double n =
        it == counts.end() ? 0.0 : static_cast<double>(it->second);
    any = any || n > 0.0;
    alloc.push_back(n);
  }
  if (alloc.empty() || !any) return 0.0;
  return jain_index(alloc);
}

void finalize_stats(AlgorithmRun& run, const RankTable& final_table,
                    double grv_user) {
  std::vector<double> grvs;
  std::set<std::string> distinct;
  std::map<std::string, long long> counts;
  grvs.reserve(run.rows.size());
  for (const TraceRow& row : run.rows) {
    grvs.push_back(row.provider_grv);
    distinct.insert(row.provider_id);
    counts[row.provider_id] += 1;
    if (row.fallback) ++run.fallback_count;
  }
  run.distinct_providers = static_cast<long long>(distinct.size());
  const SeriesStats st = series_stats(grvs);
  run.mean_grv = st.mean;
  run.stdev_grv = st.stdev;
  run.reliability = grvs.empty() || !(grv_user > 0.0)
                        ? 0.0
                        : estimated_reliability(grvs, grv_user);
  run.final_jain = final_jain_stat(final_table, grv_user, counts);
}

std::string algorithms_json(const std::vector<const AlgorithmRun*>& runs) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const AlgorithmRun& r = *runs[i];
    os << (i ? ",\n" : "\n");
    os << "    \"" << algorithm_name(r.algorithm) << "\": {\n";
    os << "      \"requests\": " << r.rows.size() << ",\n";
    os << "      \"fallbacks\": " << r.fallback_count << ",\n";
    os << "      \"distinct_providers\": " << r.distinct_providers << ",\n";
    os << "      \"mean_grv\": " << fixed6(r.mean_grv) << ",\n";
    os << "      \"stdev_grv\": " << fixed6(r.stdev_grv) << ",\n";
    os << "      \"reliability\": " << fixed6(r.reliability) << ",\n";
    os << "      \"final_jain\": " << fixed6(r.final_jain) << "\n";
    os << "    }";
  }
  os << "\n  }";
  return os.str();
}

std::vector<const AlgorithmRun*> canonical_runs(
    const std::vector<AlgorithmRun>& runs) {
  std::vector<const AlgorithmRun*> out;
  for (Algorithm a : kCanonicalOrder) {
    for (const AlgorithmRun& r : runs) {
      if (r.algorithm == a) out.push_back(&r);
    }
  }
  return out;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& cfg_in) {
  ScenarioConfig cfg = cfg_in;
  cfg.params.attribute_count = static_cast<int>(cfg.attributes.size());
  cfg.params.merit_scale = cfg.attributes.omega;
  if (auto v = validate_scenario(cfg); !v) fail(v.code, v.detail);

  const AttributeSet& set = cfg.attributes;
  const GrvParams& p = cfg.params;

  // ---- provider roster -------------------------------------------------
  std::vector<ProviderModel> models;
  if (const auto* syn = std::get_if<SyntheticRosterSpec>(&cfg.roster)) {
    Rng roster_rng(derive_seed(cfg.seed, kRosterStream));
    const double weight_total = measure_weight_total(p);
    const std::size_t width = std::to_string(syn->size).size();
    for (int i = 1; i <= syn->size; ++i) {
      ProviderModel m;
      m.id = "P" + zero_pad(i, width);
      const double grv = roster_rng.uniform(syn->grv_min, syn->grv_max);
      // Merit fraction whose constant series reproduces the drawn GRV.
      const double u = grv * static_cast<double>(p.measures_per_epoch) /
                       (weight_total * set.omega);
      for (const AttributeSpec& spec : set.specs) {
        const double span = spec.upper - spec.lower;
        m.base.push_back(spec.polarity == Polarity::big_positive
                             ? spec.lower + u * span
                             : spec.upper - u * span);
        m.drift_step.push_back(syn->drift * span);
        m.load_penalty.push_back(syn->load_penalty * span);
      }
      models.push_back(std::move(m));
    }
  } else {
    const auto& ds = std::get<DatasetRosterSpec>(cfg.roster);
    const DatasetRoster roster = ingest_dataset(ds.path, ds.keyword);
    for (const DatasetProvider& dp : roster.providers) {
      ProviderModel m;
      m.id = dp.id;
      m.base = extract_attributes(dp, set);
      for (const AttributeSpec& spec : set.specs) {
        const double span = spec.upper - spec.lower;
        m.drift_step.push_back(ds.drift * span);
        m.load_penalty.push_back(ds.load_penalty * span);
      }
      models.push_back(std::move(m));
    }
  }
  std::sort(models.begin(), models.end(),
            [](const ProviderModel& a, const ProviderModel& b) {
              return a.id < b.id;
            });
  std::map<std::string, std::size_t> model_index;
  std::set<std::string> roster_ids;
  for (std::size_t i = 0; i < models.size(); ++i) {
    models[i].noise = Rng(derive_seed(cfg.seed, kProviderStreamBase + i));
    model_index[models[i].id] = i;
    roster_ids.insert(models[i].id);
  }

  // ---- content catalog ---------------------------------------------------
  ContentIndex index;
  std::vector<std::string> catalog;
  if (cfg.contents.count) {
    const std::size_t width = std::to_string(*cfg.contents.count).size();
    for (long long i = 1; i <= *cfg.contents.count; ++i) {
      catalog.push_back(index.upsert("content-" + zero_pad(i, width), false,
                                     {}, roster_ids));
    }
  } else if (cfg.contents.file) {
    std::ifstream in(*cfg.contents.file);
    if (!in) {
      fail(Errc::io_failure,
           "cannot open content index '" + *cfg.contents.file + "'");
    }
    index = ContentIndex::read_csv(in, roster_ids);
    for (const auto& [key, entry] : index) {
      (void)entry;
      catalog.push_back(key);
    }
  } else {
    for (const InlineContent& item : cfg.contents.items) {
      catalog.push_back(index.upsert(
          item.name, item.internal,
          std::set<std::string>(item.excluded.begin(), item.excluded.end()),
          roster_ids));
    }
  }
  if (catalog.empty()) fail(Errc::invalid_config, "content catalog is empty");

  // ---- request requirement ----------------------------------------------
  UserClassTable classes;
  if (!cfg.class_floors.empty()) {
    classes = UserClassTable::from_grv_floors(cfg.class_floors);
  }
  RequestSpec proto;
  proto.grv_floor = cfg.workload.user_grv;
  proto.user_class = cfg.workload.user_class;
  proto.qos_floor = cfg.workload.qos_floor;
  const double grv_user = request_grv(proto, classes, set, p);
  if (cfg.class_floors.empty()) {
    // Default to a single user class at the request level so fairness
    // bookkeeping has a well-formed class structure.
    classes = UserClassTable::from_grv_floors({grv_user});
  }

  RunReport report;
  report.seed = cfg.seed;
  report.grv_user = round6(grv_user);

  // ---- epoch-0 ranking ----------------------------------------------------
  std::vector<std::string> ids;
  for (const ProviderModel& m : models) ids.push_back(m.id);
  std::vector<std::string> bootstrap;
  for (int k = 1; k <= p.measures_per_epoch; ++k) {
    bootstrap.push_back("bootstrap-" + std::to_string(k));
  }
  const MeasureFn probe = [&](const std::string& id, const std::string&) {
    return models[model_index.at(id)].sample(set, 0);
  };
  report.tables.push_back(initialize_ranks(ids, bootstrap, probe, set, p, 0.0));

  // ---- request stream -----------------------------------------------------
  Rng wl(derive_seed(cfg.seed, kWorkloadStream));
  std::optional<ZipfPicker> zipf;
  if (cfg.workload.popularity == WorkloadSpec::Popularity::zipf) {
    zipf.emplace(catalog.size(), cfg.workload.zipf_exponent);
  }
  std::vector<RequestDraw> requests;
  requests.reserve(static_cast<std::size_t>(cfg.workload.clients));
  double t = 0.0;
  for (long long i = 0; i < cfg.workload.clients; ++i) {
    t += wl.uniform(cfg.workload.arrival_min, cfg.workload.arrival_max);
    const std::size_t content =
        zipf ? zipf->pick(wl.uniform01())
             : static_cast<std::size_t>(wl.bounded(catalog.size()));
    requests.push_back({t, content});
  }

  // ---- event schedule -------------------------------------------------
  const double t_end = requests.empty() ? 0.0 : requests.back().arrival;
  report.epochs = std::max<long long>(
      1, static_cast<long long>(std::ceil(t_end / p.rerank_interval)));

  EventQueue queue;
  for (long long e = 0; e < report.epochs; ++e) {
    const double epoch_start = static_cast<double>(e) * p.rerank_interval;
    for (int k = 1; k <= p.measures_per_epoch; ++k) {
      const double tm = epoch_start + k * p.measure_interval();
      for (std::size_t i = 0; i < models.size(); ++i) {
        queue.push(tm, EventKlass::measure, static_cast<long long>(i));
      }
    }
    queue.push(epoch_start + p.rerank_interval, EventKlass::rerank, e + 1);
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    queue.push(requests[i].arrival, EventKlass::request,
               static_cast<long long>(i));
  }

  // ---- per-algorithm state ------------------------------------------------
  struct AlgoCtx {
    Algorithm algo;
    SelectionState state;
    std::vector<TraceRow> rows;
  };
  std::vector<AlgoCtx> algos;
  for (Algorithm a : cfg.algorithms) {
    AlgoCtx ctx;
    ctx.algo = a;
    ctx.state.rng = Rng(derive_seed(cfg.seed, kRandomAlgoStream));
    algos.push_back(std::move(ctx));
  }

  // In-flight deliveries feed back into measured QoS only in
  // single-algorithm runs: with several algorithms replaying the same
  // stream, per-algorithm load states would make their rank tables diverge.
  const bool track_load = algos.size() == 1;
  std::vector<int> in_flight(models.size(), 0);
  std::vector<std::vector<double>> measured(models.size());

  while (!queue.empty()) {
    const Event ev = queue.pop();
    switch (ev.klass) {
      case EventKlass::completion: {
        in_flight[static_cast<std::size_t>(ev.payload)] -= 1;
        break;
      }
      case EventKlass::measure: {
        const auto i = static_cast<std::size_t>(ev.payload);
        const int load = track_load ? in_flight[i] : 0;
        measured[i].push_back(merit_sum(models[i].sample(set, load), set));
        ++report.measure_events;
        break;
      }
      case EventKlass::rerank: {
        std::vector<EpochMeasures> ms;
        ms.reserve(models.size());
        for (std::size_t i = 0; i < models.size(); ++i) {
          ms.push_back({models[i].id, measured[i]});
          measured[i].clear();
        }
        report.tables.push_back(rerank(ms, report.tables.back(), p, ev.time));
        for (AlgoCtx& ctx : algos) ctx.state.reset_epoch();
        break;
      }
      case EventKlass::request: {
        ++report.request_events;
        const RequestDraw& rq = requests[static_cast<std::size_t>(ev.payload)];
        const ContentEntry& entry = index.require(catalog[rq.content]);
        if (entry.internal) {
          ++report.internal_hits;  // served locally, no provider selection
          break;
        }
        const RankTable& table = report.tables.back();
        for (AlgoCtx& ctx : algos) {
          SelectionOutcome out;
          switch (ctx.algo) {
            case Algorithm::naive:
              out = select_naive(
                  qualified_candidates(table, grv_user,
                                       entry.excluded_providers),
                  grv_user, ctx.state, ev.time, p, table);
              break;
            case Algorithm::fair:
              out = select_fair(grv_user, table, classes, ctx.state,
                                entry.excluded_providers);
              break;
            case Algorithm::round_robin:
              out = select_round_robin(
                  qualified_candidates(table, grv_user,
                                       entry.excluded_providers),
                  ctx.state, table);
              break;
            case Algorithm::random_pick:
              out = select_random(
                  qualified_candidates(table, grv_user,
                                       entry.excluded_providers),
                  ctx.state, table);
              break;
          }
          TraceRow row;
          row.seq = ev.payload + 1;
          row.arrival = round6(rq.arrival);
          row.req_grv = report.grv_user;
          row.provider_id = out.provider_id;
          row.provider_grv = round6(out.provider_grv);
          row.fallback = out.fallback;
          if (out.z_value) row.z_value = round6(*out.z_value);
          row.jain_after = round6(out.jain_after);
          ctx.rows.push_back(std::move(row));

          if (track_load) {
            const std::size_t mi = model_index.at(out.provider_id);
            in_flight[mi] += 1;
            queue.push(ev.time + cfg.service_time, EventKlass::completion,
                       static_cast<long long>(mi));
          }
        }
        break;
      }
    }
  }

  for (AlgoCtx& ctx : algos) {
    AlgorithmRun run;
    run.algorithm = ctx.algo;
    run.rows = std::move(ctx.rows);
    finalize_stats(run, report.tables.back(), report.grv_user);
    report.algorithms.push_back(std::move(run));
  }
  return report;
}

namespace {

void write_trace_csv(std::ostream& os, const AlgorithmRun& run) {
  csv::write_row(os, {"request_seq", "arrival_time", "algorithm", "req_grv",
                      "selected_provider", "selected_grv", "fallback_flag",
                      "z_value", "jain_index_after"});
  for (const TraceRow& row : run.rows) {
    csv::write_row(
        os, {std::to_string(row.seq), fixed6(row.arrival),
             algorithm_name(run.algorithm), fixed6(row.req_grv),
             row.provider_id, fixed6(row.provider_grv),
             row.fallback ? "1" : "0",
             row.z_value ? fixed6(*row.z_value) : std::string(),
             fixed6(row.jain_after)});
  }
}

}  // namespace

std::string summary_json(const RunReport& report) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"seed\": " << report.seed << ",\n";
  os << "  \"epochs\": " << report.epochs << ",\n";
  os << "  \"measure_events\": " << report.measure_events << ",\n";
  os << "  \"request_events\": " << report.request_events << ",\n";
  os << "  \"internal_hits\": " << report.internal_hits << ",\n";
  os << "  \"grv_user\": " << fixed6(report.grv_user) << ",\n";
  os << "  \"algorithms\": " << algorithms_json(canonical_runs(report.algorithms))
     << "\n";
  os << "}\n";
  return os.str();
}

void write_report_files(const RunReport& report, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const auto open = [&](const std::string& name) {
    std::ofstream os(fs::path(out_dir) / name, std::ios::binary);
    if (!os) fail(Errc::io_failure, "cannot write " + name + " in " + out_dir);
    return os;
  };

  for (const AlgorithmRun& run : report.algorithms) {
    auto os = open(std::string("trace_") + algorithm_name(run.algorithm) +
                   ".csv");
    write_trace_csv(os, run);
  }
  {
    auto os = open("ranks.csv");
    for (std::size_t i = 0; i < report.tables.size(); ++i) {
      write_rank_csv(os, report.tables[i], i == 0);
    }
  }
  {
    auto os = open("fairness.csv");
    csv::write_row(os, {"request_seq", "algorithm", "jain_index"});
    for (const AlgorithmRun* run : canonical_runs(report.algorithms)) {
      for (const TraceRow& row : run->rows) {
        csv::write_row(os, {std::to_string(row.seq),
                            algorithm_name(run->algorithm),
                            fixed6(row.jain_after)});
      }
    }
  }
  {
    auto os = open("summary.json");
    os << summary_json(report);
  }
}

std::string summarize_report_dir(const std::string& dir) {
  std::vector<AlgorithmRun> runs;
  double grv_user = 0.0;
  bool have_grv_user = false;

  for (Algorithm a : kCanonicalOrder) {
    const fs::path path =
        fs::path(dir) / (std::string("trace_") + algorithm_name(a) + ".csv");
    std::ifstream in(path);
    if (!in) continue;
    const auto rows = csv::read_all(in);
    AlgorithmRun run;
    run.algorithm = a;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (i == 0 && !row.empty() && row[0] == "request_seq") continue;
      if (row.size() != 9) {
        fail(Errc::malformed_dataset,
             "trace row needs 9 fields in " + path.string());
      }
      TraceRow tr;
      tr.seq = std::stoll(row[0]);
      tr.arrival = std::strtod(row[1].c_str(), nullptr);
      tr.req_grv = std::strtod(row[3].c_str(), nullptr);
      tr.provider_id = row[4];
      tr.provider_grv = std::strtod(row[5].c_str(), nullptr);
      tr.fallback = row[6] == "1";
      if (!row[7].empty()) tr.z_value = std::strtod(row[7].c_str(), nullptr);
      tr.jain_after = std::strtod(row[8].c_str(), nullptr);
      if (!have_grv_user) {
        grv_user = tr.req_grv;
        have_grv_user = true;
      }
      run.rows.push_back(std::move(tr));
    }
    runs.push_back(std::move(run));
  }
  if (runs.empty()) {
    fail(Errc::not_found, "no trace_*.csv files under '" + dir + "'");
  }

  RankTable final_table;
  {
    std::ifstream in(fs::path(dir) / "ranks.csv");
    if (!in) fail(Errc::not_found, "missing ranks.csv under '" + dir + "'");
    auto tables = read_rank_csv(in);
    if (tables.empty()) {
      fail(Errc::malformed_dataset, "ranks.csv holds no tables");
    }
    final_table = std::move(tables.back());
  }

  for (AlgorithmRun& run : runs) {
    finalize_stats(run, final_table, grv_user);
  }

  std::ostringstream os;
  os << "{\n";
  os << "  \"grv_user\": " << fixed6(grv_user) << ",\n";
  os << "  \"algorithms\": " << algorithms_json(canonical_runs(runs)) << "\n";
  os << "}\n";
  return os.str();
}

}  // namespace cdbroker::sim
