#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "cdbroker/errors.hpp"

namespace cdbroker {

// SHA-256 of the content name, lowercase hex. Stable across platforms and
// runs, so index files can be exchanged between deployments.
std::string content_key(std::string_view name);

struct ContentEntry {
  std::string key;
  std::string name;
  // Content served from local storage; such requests never reach provider
  // selection.
  bool internal = false;
  // Providers barred from serving this content (licensing and the like).
  std::set<std::string> excluded_providers;
};

class ContentIndex {
 public:
  // Inserts or replaces the entry for `name`; every excluded provider must
  // be part of `roster`. Returns the content key.
  std::string upsert(const std::string& name, bool internal,
                     std::set<std::string> excluded,
                     const std::set<std::string>& roster);

  const ContentEntry* lookup(std::string_view key) const;   // nullptr if absent
  const ContentEntry& require(std::string_view key) const;  // throws not_found

  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  // CSV columns: key, name, internal (0/1), excluded_providers
  // (semicolon-separated). Rows are ordered by key.
  void write_csv(std::ostream& os) const;
  static ContentIndex read_csv(std::istream& is,
                               const std::set<std::string>& roster);

 private:
  std::map<std::string, ContentEntry> entries_;
};

}  // namespace cdbroker
