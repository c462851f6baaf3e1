#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cdbroker/errors.hpp"

// Subcommand entry points shared by the CLI binary and the tests. Each
// returns a process exit status: 0 success, 2 config error, 3 data error,
// 4 internal failure (usage errors are handled by the flag parser, 1).

namespace cdbroker::cli {

struct Table3Options {
  std::vector<int> windows{5, 10, 20};
  double discount_scale = 1.0;
  double discount_span = 2.0;
  std::optional<std::string> out;  // write CSV here instead of stdout
};

struct RankInitOptions {
  std::string dataset;
  std::string config;
  std::string keyword;  // empty = keep every row
  std::string out = "rank_init.csv";
};

struct SimulateOptions {
  std::string config;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  std::string out = "report";
};

int cmd_validate_config(const std::string& config_path, std::ostream& out,
                        std::ostream& err);
int cmd_table3(const Table3Options& opts, std::ostream& out,
               std::ostream& err);
int cmd_rank_init(const RankInitOptions& opts, std::ostream& out,
                  std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err);
int cmd_report(const std::string& report_dir, std::ostream& out,
               std::ostream& err);

int exit_code(const Error& e);

}  // namespace cdbroker::cli
