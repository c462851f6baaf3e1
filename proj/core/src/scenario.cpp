#include "cdbroker/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cdbroker::sim {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& what) {
  fail(Errc::invalid_config, what);
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad_config(where + " must be a number");
  return j.get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return as_number(obj.at(key), key);
}

AttributeSet parse_attributes(const json& j) {
  if (!j.is_object()) bad_config("'attributes' must be an object");
  AttributeSet set;
  set.omega = number_or(j, "omega", 1.0);
  if (!j.contains("specs") || !j.at("specs").is_array()) {
    bad_config("'attributes' needs a 'specs' array");
  }
  for (const json& s : j.at("specs")) {
    if (!s.is_object() || !s.contains("name")) {
      bad_config("each attribute spec needs at least a 'name'");
    }
    AttributeSpec a;
    a.name = s.at("name").get<std::string>();
    const std::string pol =
        s.contains("polarity") ? s.at("polarity").get<std::string>()
                               : "big_positive";
    if (pol == "big_positive") {
      a.polarity = Polarity::big_positive;
    } else if (pol == "small_positive") {
      a.polarity = Polarity::small_positive;
    } else {
      bad_config("attribute '" + a.name + "': unknown polarity '" + pol +
                 "' (use big_positive or small_positive)");
    }
    a.lower = number_or(s, "lower", 0.0);
    a.upper = number_or(s, "upper", 1.0);
    a.weight = number_or(s, "weight", 1.0);
    set.specs.push_back(std::move(a));
  }
  return set;
}

GrvParams parse_grv(const json& j) {
  if (!j.is_object()) bad_config("'grv' must be an object");
  GrvParams p;
  if (j.contains("measures_per_epoch")) {
    p.measures_per_epoch = static_cast<int>(
        as_number(j.at("measures_per_epoch"), "measures_per_epoch"));
  }
  p.discount_scale = number_or(j, "c", p.discount_scale);
  p.discount_span = number_or(j, "x_max", p.discount_span);
  p.rerank_interval = number_or(j, "t_rerank", p.rerank_interval);
  p.resilience_window = number_or(j, "t_res", p.resilience_window);
  return p;
}

std::variant<SyntheticRosterSpec, DatasetRosterSpec> parse_roster(
    const json& j) {
  if (!j.is_object()) bad_config("'roster' must be an object");
  if (j.contains("synthetic") == j.contains("dataset")) {
    bad_config("'roster' needs exactly one of 'synthetic' or 'dataset'");
  }
  if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    SyntheticRosterSpec spec;
    spec.size = static_cast<int>(number_or(s, "size", spec.size));
    spec.grv_min = number_or(s, "grv_min", spec.grv_min);
    spec.grv_max = number_or(s, "grv_max", spec.grv_max);
    spec.drift = number_or(s, "drift", spec.drift);
    spec.load_penalty = number_or(s, "load_penalty", spec.load_penalty);
    return spec;
  }
  const json& d = j.at("dataset");
  DatasetRosterSpec spec;
  if (!d.contains("path")) bad_config("'roster.dataset' needs a 'path'");
  spec.path = d.at("path").get<std::string>();
  if (d.contains("keyword")) spec.keyword = d.at("keyword").get<std::string>();
  spec.drift = number_or(d, "drift", spec.drift);
  spec.load_penalty = number_or(d, "load_penalty", spec.load_penalty);
  return spec;
}

WorkloadSpec parse_workload(const json& j) {
  if (!j.is_object()) bad_config("'workload' must be an object");
  WorkloadSpec w;
  w.clients = static_cast<long long>(
      number_or(j, "clients", static_cast<double>(w.clients)));
  w.arrival_min = number_or(j, "arrival_min", w.arrival_min);
  w.arrival_max = number_or(j, "arrival_max", w.arrival_max);
  if (j.contains("user_grv")) w.user_grv = as_number(j.at("user_grv"), "user_grv");
  if (j.contains("user_class")) {
    w.user_class = static_cast<int>(as_number(j.at("user_class"), "user_class"));
  }
  if (j.contains("qos_floor")) {
    if (!j.at("qos_floor").is_array()) bad_config("'qos_floor' must be an array");
    QosVector q;
    for (const json& v : j.at("qos_floor")) q.push_back(as_number(v, "qos_floor"));
    w.qos_floor = std::move(q);
  }
  if (j.contains("popularity")) {
    const std::string pop = j.at("popularity").get<std::string>();
    if (pop == "uniform") {
      w.popularity = WorkloadSpec::Popularity::uniform;
    } else if (pop == "zipf") {
      w.popularity = WorkloadSpec::Popularity::zipf;
    } else {
      bad_config("unknown popularity '" + pop + "' (use uniform or zipf)");
    }
  }
  w.zipf_exponent = number_or(j, "zipf_exponent", w.zipf_exponent);
  return w;
}

ContentSpec parse_contents(const json& j) {
  if (!j.is_object()) bad_config("'contents' must be an object");
  ContentSpec c;
  int sources = 0;
  if (j.contains("count")) {
    c.count = static_cast<long long>(as_number(j.at("count"), "count"));
    ++sources;
  }
  if (j.contains("file")) {
    c.file = j.at("file").get<std::string>();
    ++sources;
  }
  if (j.contains("items")) {
    if (!j.at("items").is_array()) bad_config("'contents.items' must be an array");
    for (const json& it : j.at("items")) {
      InlineContent ic;
      if (!it.contains("name")) bad_config("content item needs a 'name'");
      ic.name = it.at("name").get<std::string>();
      if (it.contains("internal")) ic.internal = it.at("internal").get<bool>();
      if (it.contains("excluded")) {
        for (const json& e : it.at("excluded")) {
          ic.excluded.push_back(e.get<std::string>());
        }
      }
      c.items.push_back(std::move(ic));
    }
    ++sources;
  }
  if (sources != 1) {
    bad_config("'contents' needs exactly one of 'count', 'file', or 'items'");
  }
  return c;
}

std::vector<Algorithm> parse_algorithms(const json& j) {
  if (!j.is_array() || j.empty()) {
    bad_config("'algorithms' must be a non-empty array");
  }
  std::vector<Algorithm> out;
  for (const json& a : j) {
    const std::string name = a.get<std::string>();
    const auto algo = algorithm_from_name(name);
    if (!algo) bad_config("unknown algorithm '" + name + "'");
    for (Algorithm seen : out) {
      if (seen == *algo) bad_config("algorithm '" + name + "' listed twice");
    }
    out.push_back(*algo);
  }
  return out;
}

}  // namespace

ConfigFile parse_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    bad_config(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) bad_config("config root must be a JSON object");

  static const char* known[] = {"attributes", "grv",  "roster",
                                "workload",   "contents", "classes",
                                "algorithms", "seed", "service_time"};
  for (const auto& [key, value] : root.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) bad_config("unknown config section '" + key + "'");
  }

  ConfigFile cfg;
  if (root.contains("attributes")) {
    cfg.attributes = parse_attributes(root.at("attributes"));
  }
  if (root.contains("grv")) cfg.grv = parse_grv(root.at("grv"));
  if (root.contains("roster")) cfg.roster = parse_roster(root.at("roster"));
  if (root.contains("workload")) {
    cfg.workload = parse_workload(root.at("workload"));
  }
  if (root.contains("contents")) {
    cfg.contents = parse_contents(root.at("contents"));
  }
  if (root.contains("classes")) {
    const json& c = root.at("classes");
    if (!c.is_object() || !c.contains("grv_floors") ||
        !c.at("grv_floors").is_array()) {
      bad_config("'classes' needs a 'grv_floors' array");
    }
    std::vector<double> floors;
    for (const json& f : c.at("grv_floors")) {
      floors.push_back(as_number(f, "grv_floors"));
    }
    cfg.class_floors = std::move(floors);
  }
  if (root.contains("algorithms")) {
    cfg.algorithms = parse_algorithms(root.at("algorithms"));
  }
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_integer() &&
        !root.at("seed").is_number_unsigned()) {
      bad_config("'seed' must be an integer");
    }
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }
  if (root.contains("service_time")) {
    cfg.service_time = as_number(root.at("service_time"), "service_time");
  }
  return cfg;
}

ConfigFile parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ScenarioConfig ConfigFile::to_scenario() const {
  std::string missing;
  for (const char* need :
       {attributes ? nullptr : "attributes", roster ? nullptr : "roster",
        workload ? nullptr : "workload"}) {
    if (need) missing += missing.empty() ? need : std::string(", ") + need;
  }
  if (!missing.empty()) {
    fail(Errc::invalid_config, "config lacks required sections: " + missing);
  }
  ScenarioConfig cfg;
  cfg.attributes = *attributes;
  cfg.params = grv.value_or(GrvParams{});
  cfg.params.attribute_count = static_cast<int>(cfg.attributes.size());
  cfg.params.merit_scale = cfg.attributes.omega;
  cfg.roster = *roster;
  cfg.workload = *workload;
  cfg.contents = contents.value_or(ContentSpec{.count = 64});
  cfg.class_floors = class_floors.value_or(std::vector<double>{});
  cfg.algorithms = algorithms.value_or(
      std::vector<Algorithm>{Algorithm::naive, Algorithm::fair,
                             Algorithm::round_robin, Algorithm::random_pick});
  cfg.seed = seed.value_or(1);
  cfg.service_time = service_time.value_or(0.25);
  return cfg;
}

ValidationResult validate_scenario(const ScenarioConfig& cfg) {
  if (auto v = validate_attribute_set(cfg.attributes); !v) return v;

  GrvParams p = cfg.params;
  p.attribute_count = static_cast<int>(cfg.attributes.size());
  p.merit_scale = cfg.attributes.omega;
  if (auto v = validate_params(p); !v) return v;

  const WorkloadSpec& w = cfg.workload;
  if (w.clients < 0) {
    return ValidationResult::bad(Errc::invalid_config,
                                 "workload clients must be >= 0");
  }
  if (!(w.arrival_min > 0.0) || !(w.arrival_max >= w.arrival_min)) {
    return ValidationResult::bad(
        Errc::invalid_config,
        "arrival gap bounds need 0 < arrival_min <= arrival_max");
  }
  const int requirements = (w.user_grv ? 1 : 0) + (w.user_class ? 1 : 0) +
                           (w.qos_floor ? 1 : 0);
  if (requirements != 1) {
    return ValidationResult::bad(Errc::invalid_config,
                                 "workload needs exactly one of user_grv, "
                                 "user_class, or qos_floor");
  }
  if (w.user_class &&
      (cfg.class_floors.empty() ||
       *w.user_class < 1 ||
       *w.user_class > static_cast<int>(cfg.class_floors.size()))) {
    return ValidationResult::bad(
        Errc::invalid_config,
        "workload user_class must index into classes.grv_floors");
  }
  if (w.qos_floor && w.qos_floor->size() != cfg.attributes.size()) {
    return ValidationResult::bad(
        Errc::invalid_config,
        "workload qos_floor length must match the attribute count");
  }
  if (w.popularity == WorkloadSpec::Popularity::zipf &&
      !(w.zipf_exponent > 0.0)) {
    return ValidationResult::bad(Errc::invalid_config,
                                 "zipf_exponent must be positive");
  }

  for (std::size_t i = 1; i < cfg.class_floors.size(); ++i) {
    if (cfg.class_floors[i] < cfg.class_floors[i - 1]) {
      return ValidationResult::bad(
          Errc::invalid_config, "classes.grv_floors must be nondecreasing");
    }
  }

  if (const auto* syn = std::get_if<SyntheticRosterSpec>(&cfg.roster)) {
    if (syn->size < 1) {
      return ValidationResult::bad(Errc::invalid_config,
                                   "synthetic roster size must be >= 1");
    }
    if (!(syn->grv_min >= 0.0) || !(syn->grv_max >= syn->grv_min)) {
      return ValidationResult::bad(
          Errc::invalid_config, "need 0 <= grv_min <= grv_max for the roster");
    }
    if (syn->grv_max > grv_bounds(p).upper * (1.0 + 1e-12)) {
      return ValidationResult::bad(
          Errc::invalid_config,
          "roster grv_max exceeds the attainable bound " +
              std::to_string(grv_bounds(p).upper) +
              "; raise attributes.omega");
    }
    if (syn->drift < 0.0 || syn->load_penalty < 0.0) {
      return ValidationResult::bad(Errc::invalid_config,
                                   "drift and load_penalty must be >= 0");
    }
  } else {
    const auto& ds = std::get<DatasetRosterSpec>(cfg.roster);
    if (ds.path.empty()) {
      return ValidationResult::bad(Errc::invalid_config,
                                   "dataset roster needs a path");
    }
    if (ds.drift < 0.0 || ds.load_penalty < 0.0) {
      return ValidationResult::bad(Errc::invalid_config,
                                   "drift and load_penalty must be >= 0");
    }
  }

  const ContentSpec& c = cfg.contents;
  const int sources =
      (c.count ? 1 : 0) + (c.file ? 1 : 0) + (c.items.empty() ? 0 : 1);
  if (sources != 1) {
    return ValidationResult::bad(
        Errc::invalid_config,
        "contents needs exactly one of count, file, or items");
  }
  if (c.count && *c.count < 1) {
    return ValidationResult::bad(Errc::invalid_config,
                                 "contents.count must be >= 1");
  }

  if (cfg.algorithms.empty()) {
    return ValidationResult::bad(Errc::invalid_config,
                                 "at least one algorithm is required");
  }
  if (!(cfg.service_time > 0.0)) {
    return ValidationResult::bad(Errc::invalid_config,
                                 "service_time must be positive");
  }
  return ValidationResult::good();
}

ScenarioConfig replication_scenario(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.attributes.omega = 100.0;
  cfg.attributes.specs = {
      {"merit", Polarity::big_positive, 0.0, 1.0, 1.0}};
  cfg.params.attribute_count = 1;
  cfg.params.merit_scale = 100.0;
  cfg.params.measures_per_epoch = 5;
  cfg.params.discount_scale = 1.0;
  cfg.params.discount_span = 2.0;
  // Epoch length tuned so one epoch holds slightly more requests than there
  // are qualified providers: the fairness algorithm then covers the whole
  // qualified pool each epoch with a bias toward its upper end, which is
  // what separates it from plain round-robin in this workload.
  cfg.params.rerank_interval = 45.0;
  cfg.params.resilience_window = 0.5;
  cfg.roster = SyntheticRosterSpec{100, 39.81, 74.04, 0.0, 0.0};
  cfg.workload.clients = 1000;
  cfg.workload.arrival_min = 0.01;
  cfg.workload.arrival_max = 1.0;
  cfg.workload.user_grv = 50.0;
  cfg.contents = ContentSpec{.count = 64};
  cfg.class_floors = {50.0};
  cfg.algorithms = {Algorithm::naive, Algorithm::fair, Algorithm::round_robin,
                    Algorithm::random_pick};
  cfg.seed = seed;
  cfg.service_time = 0.25;
  return cfg;
}

}  // namespace cdbroker::sim
