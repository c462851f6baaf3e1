#include "cdbroker/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "cdbroker/csv.hpp"
#include "cdbroker/errors.hpp"

namespace cdbroker {

const std::array<DatasetAttribute, 9>& dataset_attributes() {
  static const std::array<DatasetAttribute, 9> attrs = {{
      {"response_time", Polarity::small_positive},
      {"availability", Polarity::big_positive},
      {"throughput", Polarity::big_positive},
      {"successability", Polarity::big_positive},
      {"reliability", Polarity::big_positive},
      {"compliance", Polarity::big_positive},
      {"best_practices", Polarity::big_positive},
      {"latency", Polarity::small_positive},
      {"documentation", Polarity::big_positive},
  }};
  return attrs;
}

std::string canonical_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ') ++end;
  return *end == '\0';
}

}  // namespace

DatasetRoster ingest_dataset(const std::string& path,
                             const std::string& keyword) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_failure, "cannot open dataset '" + path + "'");
  const auto rows = csv::read_all(in);
  if (rows.empty()) fail(Errc::malformed_dataset, "dataset has no header row");

  // Resolve required columns from the header.
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    column.emplace(canonical_name(rows[0][i]), i);
  }
  const auto name_col = column.find("servicename");
  if (name_col == column.end()) {
    fail(Errc::malformed_dataset, "dataset lacks a service-name column");
  }
  std::vector<std::size_t> attr_cols;
  for (const DatasetAttribute& a : dataset_attributes()) {
    const auto it = column.find(canonical_name(a.name));
    if (it == column.end()) {
      fail(Errc::malformed_dataset,
           std::string("dataset lacks column '") + a.name + "'");
    }
    attr_cols.push_back(it->second);
  }

  const std::string needle = lowercase(keyword);
  DatasetRoster roster;
  std::set<std::string> taken;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) {
      ++roster.skipped_rows;
      continue;
    }
    const std::string& service = row[name_col->second];
    if (!needle.empty() &&
        lowercase(service).find(needle) == std::string::npos) {
      continue;
    }
    DatasetProvider p;
    bool ok = !service.empty();
    for (std::size_t j = 0; ok && j < attr_cols.size(); ++j) {
      double v;
      ok = parse_number(row[attr_cols[j]], v);
      if (ok) p.values[canonical_name(dataset_attributes()[j].name)] = v;
    }
    if (!ok) {
      ++roster.skipped_rows;
      continue;
    }
    // Duplicate service names stay in the roster under a suffixed id.
    p.id = service;
    for (int n = 2; taken.count(p.id); ++n) {
      p.id = service + "_" + std::to_string(n);
    }
    taken.insert(p.id);
    roster.providers.push_back(std::move(p));
  }
  if (roster.providers.empty()) {
    fail(Errc::no_matches,
         "no dataset rows match keyword '" + keyword + "'");
  }
  return roster;
}

QosVector extract_attributes(const DatasetProvider& provider,
                             const AttributeSet& set) {
  QosVector out;
  out.reserve(set.specs.size());
  for (const AttributeSpec& spec : set.specs) {
    const auto it = provider.values.find(canonical_name(spec.name));
    if (it == provider.values.end()) {
      fail(Errc::invalid_config,
           "attribute '" + spec.name + "' is not a dataset column");
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace cdbroker
