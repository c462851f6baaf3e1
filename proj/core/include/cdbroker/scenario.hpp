#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cdbroker/grv.hpp"
#include "cdbroker/qos.hpp"
#include "cdbroker/selection.hpp"

namespace cdbroker::sim {

// Request workload: one client stream with inter-arrival gaps drawn
// uniformly from [arrival_min, arrival_max]. The QoS requirement (exactly
// one of user_grv / user_class / qos_floor) applies to every client.
struct WorkloadSpec {
  long long clients = 1000;
  double arrival_min = 0.01;
  double arrival_max = 1.0;
  std::optional<double> user_grv;
  std::optional<int> user_class;
  std::optional<QosVector> qos_floor;

  enum class Popularity { uniform, zipf };
  Popularity popularity = Popularity::uniform;
  double zipf_exponent = 1.0;
};

// Synthetic roster: `size` providers seeded so their initial GRVs are
// uniform on [grv_min, grv_max]. drift/load_penalty are fractions of each
// attribute's span (per sample / per in-flight delivery).
struct SyntheticRosterSpec {
  int size = 100;
  double grv_min = 39.81;
  double grv_max = 74.04;
  double drift = 0.0;
  double load_penalty = 0.0;
};

// Roster taken from a provider dataset file filtered by keyword.
struct DatasetRosterSpec {
  std::string path;
  std::string keyword;
  double drift = 0.0;
  double load_penalty = 0.0;
};

struct InlineContent {
  std::string name;
  bool internal = false;
  std::vector<std::string> excluded;
};

// Content catalog: synthesized ("content-001"...), loaded from an index
// CSV, or listed inline. Exactly one source.
struct ContentSpec {
  std::optional<long long> count;
  std::optional<std::string> file;
  std::vector<InlineContent> items;
};

struct ScenarioConfig {
  AttributeSet attributes;
  GrvParams params;  // attribute_count/merit_scale derived from attributes
  std::variant<SyntheticRosterSpec, DatasetRosterSpec> roster;
  WorkloadSpec workload;
  ContentSpec contents;
  // Per-class GRV floors (ascending privilege); defaults to a single class
  // at the workload requirement when empty.
  std::vector<double> class_floors;
  std::vector<Algorithm> algorithms;
  std::uint64_t seed = 1;
  double service_time = 0.25;  // delivery duration, seconds
};

ValidationResult validate_scenario(const ScenarioConfig& cfg);

// A parsed config file; sections are optional so that commands needing only
// part of a scenario (attribute validation, rank initialization) can share
// one format.
struct ConfigFile {
  std::optional<AttributeSet> attributes;
  std::optional<GrvParams> grv;
  std::optional<std::variant<SyntheticRosterSpec, DatasetRosterSpec>> roster;
  std::optional<WorkloadSpec> workload;
  std::optional<ContentSpec> contents;
  std::optional<std::vector<double>> class_floors;
  std::optional<std::vector<Algorithm>> algorithms;
  std::optional<std::uint64_t> seed;
  std::optional<double> service_time;

  // Assembles a full scenario, applying defaults for optional sections;
  // throws invalid_config naming whatever required section is missing.
  ScenarioConfig to_scenario() const;
};

ConfigFile parse_config_text(const std::string& json_text);
ConfigFile parse_config_file(const std::string& path);

// The shipped benchmark scenario: 100 synthetic providers with GRVs uniform
// on [39.81, 74.04], 1000 clients at a fixed requirement of 50, all four
// algorithms side by side.
ScenarioConfig replication_scenario(std::uint64_t seed);

}  // namespace cdbroker::sim
