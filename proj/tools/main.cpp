#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cdbroker/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"QoS-ranked content-delivery broker toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  std::string validate_config_path;
  auto* validate = app.add_subcommand(
      "validate-config", "Parse and semantically check a scenario config");
  validate->add_option("--config", validate_config_path, "scenario config")
      ->required();
  validate->callback([&] {
    rc = cdbroker::cli::cmd_validate_config(validate_config_path, std::cout,
                                            std::cerr);
  });

  cdbroker::cli::Table3Options t3;
  std::string t3_out;
  auto* table3 = app.add_subcommand(
      "table3",
      "Print the measurement-weight table for chosen measurement counts");
  table3
      ->add_option("--cbp", t3.windows,
                   "measurements per epoch, comma separated")
      ->delimiter(',');
  table3->add_option("--c", t3.discount_scale, "discount scale");
  table3->add_option("--xmax", t3.discount_span, "discount span");
  table3->add_option("--out", t3_out, "write the CSV here instead of stdout");
  table3->callback([&] {
    if (!t3_out.empty()) t3.out = t3_out;
    rc = cdbroker::cli::cmd_table3(t3, std::cout, std::cerr);
  });

  cdbroker::cli::RankInitOptions ri;
  auto* rank_init = app.add_subcommand(
      "rank-init", "Ingest a QoS dataset and write the epoch-0 rank table");
  rank_init->add_option("dataset", ri.dataset, "provider QoS dataset (CSV)")
      ->required();
  rank_init->add_option("--config", ri.config, "attribute/grv config")
      ->required();
  rank_init->add_option("--keyword", ri.keyword,
                        "keep only service names containing this substring");
  rank_init->add_option("--out", ri.out, "output rank CSV path");
  rank_init->callback(
      [&] { rc = cdbroker::cli::cmd_rank_init(ri, std::cout, std::cerr); });

  cdbroker::cli::SimulateOptions si;
  std::uint64_t seed_override = 0;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a scenario and write trace/rank/fairness/summary files");
  simulate->add_option("--config", si.config, "scenario config")->required();
  auto* seed_opt =
      simulate->add_option("--seed", seed_override, "override the config seed");
  simulate->add_option("--out", si.out, "report directory");
  simulate->callback([&] {
    if (seed_opt->count() > 0) si.seed = seed_override;
    rc = cdbroker::cli::cmd_simulate(si, std::cout, std::cerr);
  });

  std::string report_dir;
  auto* report = app.add_subcommand(
      "report", "Re-read a report directory and print the recomputed summary");
  report->add_option("dir", report_dir, "report directory")->required();
  report->callback(
      [&] { rc = cdbroker::cli::cmd_report(report_dir, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return rc;
}
