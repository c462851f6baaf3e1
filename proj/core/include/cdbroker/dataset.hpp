#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cdbroker/qos.hpp"

namespace cdbroker {

// The nine web-service QoS attributes a provider dataset must carry, with
// their measurement direction. Header matching is tolerant of case, spaces,
// and punctuation ("Best Practices" == "best_practices").
struct DatasetAttribute {
  const char* name;
  Polarity polarity;
};

const std::array<DatasetAttribute, 9>& dataset_attributes();

struct DatasetProvider {
  std::string id;  // service name, deduplicated
  // keyed by canonical_name() of the attribute
  std::map<std::string, double> values;
};

struct DatasetRoster {
  std::vector<DatasetProvider> providers;
  long long skipped_rows = 0;  // malformed rows are skipped, not fatal
};

// Loads a provider dataset: a CSV with at least the nine attribute columns
// plus a service-name column, filtered by a case-insensitive substring match
// of `keyword` against the service name. Duplicate service names get a
// numeric suffix. Throws no_matches when the filter leaves nothing.
DatasetRoster ingest_dataset(const std::string& path,
                             const std::string& keyword);

// Values of `provider` for the attributes of `set`, in set order; attribute
// names must resolve to dataset columns.
QosVector extract_attributes(const DatasetProvider& provider,
                             const AttributeSet& set);

// Canonical form used for header/name matching: lowercase alphanumerics.
std::string canonical_name(std::string_view s);

}  // namespace cdbroker
