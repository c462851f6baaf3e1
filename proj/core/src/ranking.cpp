#include "cdbroker/ranking.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "cdbroker/csv.hpp"
#include "cdbroker/format.hpp"

namespace cdbroker {

namespace {

bool rank_order(const ProviderRecord& a, const ProviderRecord& b) {
  if (a.grv != b.grv) return a.grv > b.grv;
  return a.id < b.id;
}

void sort_and_number(RankTable& t) {
  std::sort(t.entries.begin(), t.entries.end(), rank_order);
  int r = 1;
  for (ProviderRecord& e : t.entries) e.rank = r++;
}

}  // namespace

const ProviderRecord* RankTable::find(std::string_view id) const {
  for (const ProviderRecord& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

RankTable initialize_ranks(const std::vector<std::string>& provider_ids,
                           const std::vector<std::string>& sample_contents,
                           const MeasureFn& measure, const AttributeSet& set,
                           const GrvParams& p, double now) {
  if (provider_ids.empty()) {
    fail(Errc::empty_provider_list, "cannot rank an empty provider roster");
  }
  std::set<std::string> seen;
  for (const std::string& id : provider_ids) {
    if (!seen.insert(id).second) {
      fail(Errc::duplicate_provider, "provider '" + id + "' listed twice");
    }
  }

  RankTable t;
  t.epoch = 0;
  t.created_at = now;
  t.entries.reserve(provider_ids.size());
  for (const std::string& id : provider_ids) {
    std::vector<double> series;
    series.reserve(sample_contents.size());
    try {
      for (const std::string& content : sample_contents) {
        series.push_back(merit_sum(measure(id, content), set));
      }
    } catch (...) {
      // Measurement failure: score the provider at the bottom rather than
      // aborting the whole table build.
      series.clear();
    }
    EpochMeasures em{id, pad_series(std::move(series), p.measures_per_epoch)};
    t.entries.push_back({id, "gw:" + id, grv_provider(em, p), 0, 0});
  }
  sort_and_number(t);
  return t;
}

RankTable rerank(const std::vector<EpochMeasures>& measures,
                 const RankTable& prev, const GrvParams& p, double now) {
  std::map<std::string, const EpochMeasures*> by_id;
  for (const EpochMeasures& em : measures) by_id[em.provider_id] = &em;

  RankTable t;
  t.epoch = prev.epoch + 1;
  t.created_at = now;
  t.entries.reserve(prev.entries.size());
  for (const ProviderRecord& old : prev.entries) {
    std::vector<double> series;
    if (auto it = by_id.find(old.id); it != by_id.end()) {
      series = it->second->merit_sums;
    }
    EpochMeasures em{old.id, pad_series(std::move(series), p.measures_per_epoch)};
    t.entries.push_back({old.id, old.gateway, grv_provider(em, p), 0, 0});
  }
  sort_and_number(t);
  return t;
}

RankTable join(const RankTable& table, const std::string& id,
               const EpochMeasures& bootstrap, const GrvParams& p) {
  if (table.find(id)) {
    fail(Errc::duplicate_provider, "provider '" + id + "' already ranked");
  }
  RankTable t = table;
  EpochMeasures em{id, pad_series(bootstrap.merit_sums, p.measures_per_epoch)};
  t.entries.push_back({id, "gw:" + id, grv_provider(em, p), 0, 0});
  sort_and_number(t);
  return t;
}

RankTable leave(const RankTable& table, const std::string& id) {
  if (!table.find(id)) {
    fail(Errc::unknown_provider, "provider '" + id + "' not in table");
  }
  RankTable t = table;
  std::erase_if(t.entries,
                [&](const ProviderRecord& e) { return e.id == id; });
  sort_and_number(t);
  return t;
}

void write_rank_csv(std::ostream& os, const RankTable& table,
                    bool with_header) {
  if (with_header) {
    csv::write_row(os, {"epoch", "provider_id", "grv", "rank", "prov_count"});
  }
  for (const ProviderRecord& e : table.entries) {
    csv::write_row(os, {std::to_string(table.epoch), e.id, fixed6(e.grv),
                        std::to_string(e.rank), std::to_string(e.prov_count)});
  }
}

std::vector<RankTable> read_rank_csv(std::istream& is) {
  const auto rows = csv::read_all(is);
  std::vector<RankTable> tables;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (i == 0 && !row.empty() && row[0] == "epoch") continue;  // header
    if (row.size() != 5) {
      fail(Errc::malformed_dataset, "rank CSV row needs 5 fields");
    }
    const long long epoch = std::stoll(row[0]);
    if (tables.empty() || tables.back().epoch != epoch) {
      tables.push_back(RankTable{epoch, 0.0, {}});
    }
    tables.back().entries.push_back({row[1], "gw:" + row[1],
                                     std::strtod(row[2].c_str(), nullptr),
                                     std::stoi(row[3]), std::stoll(row[4])});
  }
  return tables;
}

}  // namespace cdbroker
