#include "cdbroker/content_index.hpp"

#include <openssl/evp.h>

#include <istream>
#include <ostream>

#include "cdbroker/csv.hpp"

namespace cdbroker {

std::string content_key(std::string_view name) {
  if (name.empty()) fail(Errc::empty_name, "content name must be non-empty");
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(name.data(), name.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    fail(Errc::internal, "SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string ContentIndex::upsert(const std::string& name, bool internal,
                                 std::set<std::string> excluded,
                                 const std::set<std::string>& roster) {
  for (const std::string& id : excluded) {
    if (!roster.count(id)) {
      fail(Errc::unknown_excluded_provider,
           "excluded provider '" + id + "' is not in the roster");
    }
  }
  std::string key = content_key(name);
  entries_[key] = ContentEntry{key, name, internal, std::move(excluded)};
  return key;
}

const ContentEntry* ContentIndex::lookup(std::string_view key) const {
  auto it = entries_.find(std::string(key));
  return it == entries_.end() ? nullptr : &it->second;
}

const ContentEntry& ContentIndex::require(std::string_view key) const {
  const ContentEntry* e = lookup(key);
  if (!e) fail(Errc::not_found, "no content with key " + std::string(key));
  return *e;
}

void ContentIndex::write_csv(std::ostream& os) const {
  csv::write_row(os, {"key", "name", "internal", "excluded_providers"});
  for (const auto& [key, e] : entries_) {
    std::string excluded;
    for (const std::string& id : e.excluded_providers) {
      if (!excluded.empty()) excluded += ';';
      excluded += id;
    }
    csv::write_row(os, {key, e.name, e.internal ? "1" : "0", excluded});
  }
}

ContentIndex ContentIndex::read_csv(std::istream& is,
                                    const std::set<std::string>& roster) {
  ContentIndex index;
  const auto rows = csv::read_all(is);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (i == 0 && !row.empty() && row[0] == "key") continue;  // header
    if (row.size() != 4) {
      fail(Errc::malformed_dataset, "content index row needs 4 fields");
    }
    if (row[2] != "0" && row[2] != "1") {
      fail(Errc::malformed_dataset,
           "internal flag must be 0 or 1, got '" + row[2] + "'");
    }
    std::set<std::string> excluded;
    std::string cur;
    for (char c : row[3]) {
      if (c == ';') {
        if (!cur.empty()) excluded.insert(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) excluded.insert(cur);
    index.upsert(row[1], row[2] == "1", std::move(excluded), roster);
  }
  return index;
}

}  // namespace cdbroker
