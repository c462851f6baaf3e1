#include "cdbroker/commands.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "cdbroker/csv.hpp"
#include "cdbroker/dataset.hpp"
#include "cdbroker/format.hpp"
#include "cdbroker/grv.hpp"
#include "cdbroker/ranking.hpp"
#include "cdbroker/scenario.hpp"
#include "cdbroker/sim.hpp"

namespace cdbroker::cli {

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

int exit_code(const Error& e) {
  switch (e.code()) {
    case Errc::empty_attribute_set:
    case Errc::degenerate_bounds:
    case Errc::non_positive_weight:
    case Errc::weight_sum_violation:
    case Errc::non_positive_omega:
    case Errc::invalid_params:
    case Errc::invalid_config:
    case Errc::non_positive_user_grv:
    case Errc::unknown_class:
      return 2;
    case Errc::no_matches:
    case Errc::malformed_dataset:
    case Errc::not_found:
    case Errc::unknown_excluded_provider:
    case Errc::io_failure:
      return 3;
    default:
      return 4;
  }
}

int cmd_validate_config(const std::string& config_path, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    sim::ScenarioConfig cfg = sim::parse_config_file(config_path).to_scenario();
    cfg.params.attribute_count = static_cast<int>(cfg.attributes.size());
    cfg.params.merit_scale = cfg.attributes.omega;
    if (auto v = sim::validate_scenario(cfg); !v) fail(v.code, v.detail);
    out << "ok\n";
    return 0;
  });
}

int cmd_table3(const Table3Options& opts, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const WeightTable table =
        weight_table(opts.windows, opts.discount_scale, opts.discount_span);

    std::ostringstream body;
    std::vector<std::string> head{"k"};
    int max_k = 0;
    for (int window : table.window_sizes) {
      head.push_back("C=" + std::to_string(window));
      max_k = std::max(max_k, window);
    }
    csv::write_row(body, head);
    for (int k = 1; k <= max_k; ++k) {
      std::vector<std::string> row{std::to_string(k)};
      for (std::size_t c = 0; c < table.window_sizes.size(); ++c) {
        row.push_back(k <= table.window_sizes[c]
                          ? fixed6(table.weights[c][k - 1])
                          : std::string());
      }
      csv::write_row(body, row);
    }
    const auto stat_row = [&](const std::string& label,
                              const std::vector<double>& values) {
      std::vector<std::string> row{label};
      for (double v : values) row.push_back(fixed6(v));
      csv::write_row(body, row);
    };
    stat_row("Min", table.min_row);
    stat_row("Max", table.max_row);
    stat_row("Av. Diff", table.avg_diff_row);

    if (opts.out) {
      std::ofstream f(*opts.out, std::ios::binary);
      if (!f) fail(Errc::io_failure, "cannot write '" + *opts.out + "'");
      f << body.str();
      out << "wrote " << *opts.out << "\n";
    } else {
      out << body.str();
    }
    return 0;
  });
}

int cmd_rank_init(const RankInitOptions& opts, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const sim::ConfigFile file = sim::parse_config_file(opts.config);
    if (!file.attributes) {
      fail(Errc::invalid_config, "config is missing the attributes section");
    }
    const AttributeSet& set = *file.attributes;
    GrvParams params = file.grv.value_or(GrvParams{});
    params.attribute_count = static_cast<int>(set.size());
    params.merit_scale = set.omega;
    if (auto v = validate_attribute_set(set); !v) fail(v.code, v.detail);
    if (auto v = validate_params(params); !v) fail(v.code, v.detail);

    const DatasetRoster roster = ingest_dataset(opts.dataset, opts.keyword);
    std::vector<std::string> ids;
    std::map<std::string, QosVector> base;
    for (const DatasetProvider& p : roster.providers) {
      ids.push_back(p.id);
      base[p.id] = extract_attributes(p, set);
    }
    std::vector<std::string> samples;
    for (int k = 1; k <= params.measures_per_epoch; ++k) {
      samples.push_back("bootstrap-" + std::to_string(k));
    }

    const auto t0 = std::chrono::steady_clock::now();
    const RankTable table = initialize_ranks(
        ids, samples,
        [&](const std::string& id, const std::string&) { return base.at(id); },
        set, params, 0.0);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();

    std::ofstream f(opts.out, std::ios::binary);
    if (!f) fail(Errc::io_failure, "cannot write '" + opts.out + "'");
    write_rank_csv(f, table, true);

    out << "providers=" << table.entries.size()
        << " skipped_rows=" << roster.skipped_rows
        << " grv_compute_ms=" << fixed6(ms) << "\n";
    return 0;
  });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    sim::ScenarioConfig cfg = sim::parse_config_file(opts.config).to_scenario();
    if (opts.seed) cfg.seed = *opts.seed;
    // run_scenario validates and throws before anything is written, so a
    // bad config never leaves a partial report directory behind.
    const sim::RunReport report = sim::run_scenario(cfg);
    sim::write_report_files(report, opts.out);
    out << "out_dir=" << opts.out << " algorithms="
        << report.algorithms.size() << " requests=" << report.request_events
        << " epochs=" << report.epochs << "\n";
    return 0;
  });
}

int cmd_report(const std::string& report_dir, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    out << sim::summarize_report_dir(report_dir);
    return 0;
  });
}

}  // namespace cdbroker::cli
