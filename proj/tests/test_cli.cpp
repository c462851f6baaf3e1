#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cdbroker/commands.hpp"
#include "cdbroker/ranking.hpp"
#include "helpers.hpp"

using namespace cdbroker;
using namespace cdbroker::cli;
using testutil::temp_dir;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write(const fs::path& p, const std::string& body) {
  std::ofstream(p, std::ios::binary) << body;
  return p;
}

fs::path repo_config(const char* name) {
  return fs::path(TEST_SOURCE_DIR) / "configs" / name;
}

fs::path sample_dataset(const fs::path& dir, int providers = 6) {
  std::ostringstream body;
  body << "Service Name,Response Time,Availability,Throughput,Successability,"
          "Reliability,Compliance,Best Practices,Latency,Documentation\n";
  for (int i = 1; i <= providers; ++i) {
    body << "svc" << i << ',' << 100 * i << ",85,10,90,70,80,75,40,60\n";
  }
  return write(dir / "svc.csv", body.str());
}

const char* kRankConfig = R"({
  "attributes": {"omega": 100, "specs": [
    {"name": "Response Time", "polarity": "small_positive",
     "lower": 0, "upper": 1000}
  ]}
})";

std::string simulate_config(int seed) {
  std::ostringstream os;
  os << R"({
    "attributes": {"omega": 100, "specs": [{"name": "merit", "upper": 1}]},
    "grv": {"t_rerank": 10},
    "roster": {"synthetic": {"size": 8, "grv_min": 48, "grv_max": 70}},
    "workload": {"clients": 40, "arrival_min": 0.05, "arrival_max": 0.5,
                 "user_grv": 45},
    "contents": {"count": 4},
    "algorithms": ["naive", "fair"],
    "seed": )"
     << seed << "\n}\n";
  return os.str();
}

}  // namespace

TEST_CASE("the weight table subcommand prints the reference grid") {
  std::ostringstream out, err;
  CHECK(cmd_table3(Table3Options{}, out, err) == 0);
  CHECK(err.str().empty());
  const std::string s = out.str();
  CHECK(s.find("k,C=5,C=10,C=20\n") == 0);
  CHECK(s.find("1,0.559353,0.542046,0.537728\n") != std::string::npos);
  CHECK(s.find("5,1.000000,0.679719,0.572357\n") != std::string::npos);
  CHECK(s.find("6,,0.739964,0.588258\n") != std::string::npos);  // past C=5
  CHECK(s.find("20,,,1.000000\n") != std::string::npos);
  CHECK(s.find("Min,0.559353,0.542046,0.537728\n") != std::string::npos);
  CHECK(s.find("Max,1.000000,1.000000,1.000000\n") != std::string::npos);
  CHECK(s.find("Av. Diff,0.088129,0.045795,0.023114\n") != std::string::npos);
}

TEST_CASE("the weight table subcommand writes a file when asked") {
  const auto dir = temp_dir("cli-table");
  Table3Options opts;
  opts.windows = {3};
  opts.out = (dir / "weights.csv").string();
  std::ostringstream out, err;
  CHECK(cmd_table3(opts, out, err) == 0);
  CHECK(out.str() == "wrote " + *opts.out + "\n");
  const std::string body = slurp(dir / "weights.csv");
  CHECK(body.find("k,C=3\n") == 0);
  CHECK(body.find("3,1.000000\n") != std::string::npos);

  Table3Options bad;
  bad.discount_scale = 0.0;
  std::ostringstream out2, err2;
  CHECK(cmd_table3(bad, out2, err2) == 2);
  CHECK(err2.str().find("error:") == 0);
}

TEST_CASE("config validation accepts the shipped configurations") {
  for (const char* name : {"replication.json", "qws.json", "smoke.json"}) {
    std::ostringstream out, err;
    INFO(name);
    CHECK(cmd_validate_config(repo_config(name).string(), out, err) == 0);
    CHECK(out.str() == "ok\n");
    CHECK(err.str().empty());
  }
}

TEST_CASE("config validation rejects broken input with exit code 2") {
  const auto dir = temp_dir("cli-validate");
  const auto bad_json = write(dir / "bad.json", "{not json");
  const auto bad_weight = write(dir / "weight.json", R"({
    "attributes": {"omega": 100,
                   "specs": [{"name": "merit", "upper": 1, "weight": 2}]},
    "roster": {"synthetic": {"size": 4}},
    "workload": {"user_grv": 50}
  })");

  std::ostringstream out, err;
  CHECK(cmd_validate_config(bad_json.string(), out, err) == 2);
  CHECK(err.str().find("error:") == 0);

  std::ostringstream out2, err2;
  CHECK(cmd_validate_config(bad_weight.string(), out2, err2) == 2);

  std::ostringstream out3, err3;
  CHECK(cmd_validate_config((dir / "missing.json").string(), out3, err3) == 2);
}

TEST_CASE("rank initialization writes a table from a dataset file") {
  const auto dir = temp_dir("cli-rank");
  sample_dataset(dir);
  const auto config = write(dir / "attrs.json", kRankConfig);

  RankInitOptions opts;
  opts.dataset = (dir / "svc.csv").string();
  opts.config = config.string();
  opts.out = (dir / "ranks.csv").string();

  std::ostringstream out, err;
  CHECK(cmd_rank_init(opts, out, err) == 0);
  CHECK(out.str().find("providers=6 skipped_rows=0 grv_compute_ms=") == 0);

  std::ifstream in(dir / "ranks.csv");
  const auto tables = read_rank_csv(in);
  REQUIRE(tables.size() == 1);
  REQUIRE(tables[0].entries.size() == 6);
  for (int i = 1; i <= 6; ++i) {
    CHECK(tables[0].find("svc" + std::to_string(i))->rank == i);
  }
}

TEST_CASE("rank initialization distinguishes data from config failures") {
  const auto dir = temp_dir("cli-rank-err");
  sample_dataset(dir);
  const auto config = write(dir / "attrs.json", kRankConfig);

  RankInitOptions no_match;
  no_match.dataset = (dir / "svc.csv").string();
  no_match.config = config.string();
  no_match.keyword = "zzz-no-such-service";
  no_match.out = (dir / "ranks.csv").string();
  std::ostringstream out, err;
  CHECK(cmd_rank_init(no_match, out, err) == 3);

  RankInitOptions no_attrs = no_match;
  no_attrs.keyword.clear();
  no_attrs.config = write(dir / "empty.json", "{}").string();
  std::ostringstream out2, err2;
  CHECK(cmd_rank_init(no_attrs, out2, err2) == 2);
  CHECK(err2.str().find("attributes") != std::string::npos);
}

TEST_CASE("simulation runs are reproducible file for file") {
  const auto dir = temp_dir("cli-sim");
  const auto config = write(dir / "scenario.json", simulate_config(1));

  SimulateOptions a;
  a.config = config.string();
  a.out = (dir / "run-a").string();
  std::ostringstream out, err;
  CHECK(cmd_simulate(a, out, err) == 0);
  CHECK(out.str().find("out_dir=" + a.out + " algorithms=2 requests=40") == 0);

  SimulateOptions b = a;
  b.out = (dir / "run-b").string();
  std::ostringstream out2, err2;
  CHECK(cmd_simulate(b, out2, err2) == 0);

  for (const char* name : {"trace_naive.csv", "trace_fair.csv", "ranks.csv",
                           "fairness.csv", "summary.json"}) {
    INFO(name);
    CHECK(slurp(fs::path(a.out) / name) == slurp(fs::path(b.out) / name));
  }
  CHECK(slurp(fs::path(a.out) / "trace_naive.csv")
            .find("request_seq,arrival_time,algorithm,req_grv,"
                  "selected_provider,selected_grv,fallback_flag,z_value,"
                  "jain_index_after\n") == 0);
}

TEST_CASE("a seed flag overrides the configured seed") {
  const auto dir = temp_dir("cli-seed");

  SimulateOptions override_run;
  override_run.config = write(dir / "seed1.json", simulate_config(1)).string();
  override_run.seed = 5;
  override_run.out = (dir / "run-override").string();
  std::ostringstream out, err;
  CHECK(cmd_simulate(override_run, out, err) == 0);

  SimulateOptions plain;
  plain.config = write(dir / "seed5.json", simulate_config(5)).string();
  plain.out = (dir / "run-plain").string();
  std::ostringstream out2, err2;
  CHECK(cmd_simulate(plain, out2, err2) == 0);

  CHECK(slurp(fs::path(override_run.out) / "summary.json") ==
        slurp(fs::path(plain.out) / "summary.json"));
  CHECK(slurp(fs::path(override_run.out) / "summary.json")
            .find("\"seed\": 5") != std::string::npos);
}

TEST_CASE("a bad simulation config leaves no partial output behind") {
  const auto dir = temp_dir("cli-sim-err");
  SimulateOptions opts;
  opts.config = (dir / "missing.json").string();
  opts.out = (dir / "never").string();
  std::ostringstream out, err;
  CHECK(cmd_simulate(opts, out, err) == 2);
  CHECK(!fs::exists(dir / "never"));
}

TEST_CASE("report recomputation agrees with the stored summary") {
  const auto dir = temp_dir("cli-report");
  SimulateOptions sim_opts;
  sim_opts.config = write(dir / "scenario.json", simulate_config(3)).string();
  sim_opts.out = (dir / "run").string();
  std::ostringstream sim_out, sim_err;
  REQUIRE(cmd_simulate(sim_opts, sim_out, sim_err) == 0);

  std::ostringstream out, err;
  CHECK(cmd_report(sim_opts.out, out, err) == 0);
  const auto recomputed = nlohmann::json::parse(out.str());
  const auto stored =
      nlohmann::json::parse(slurp(fs::path(sim_opts.out) / "summary.json"));
  CHECK(recomputed.at("grv_user") == stored.at("grv_user"));
  CHECK(recomputed.at("algorithms") == stored.at("algorithms"));

  std::ostringstream out2, err2;
  CHECK(cmd_report((dir / "nothing-here").string(), out2, err2) == 3);
}

TEST_CASE("failure categories map onto stable exit codes") {
  CHECK(exit_code(Error(Errc::invalid_config, "")) == 2);
  CHECK(exit_code(Error(Errc::weight_sum_violation, "")) == 2);
  CHECK(exit_code(Error(Errc::invalid_params, "")) == 2);
  CHECK(exit_code(Error(Errc::no_matches, "")) == 3);
  CHECK(exit_code(Error(Errc::io_failure, "")) == 3);
  CHECK(exit_code(Error(Errc::not_found, "")) == 3);
  CHECK(exit_code(Error(Errc::malformed_dataset, "")) == 3);
  CHECK(exit_code(Error(Errc::internal, "")) == 4);
  CHECK(exit_code(Error(Errc::empty_roster, "")) == 4);
}
