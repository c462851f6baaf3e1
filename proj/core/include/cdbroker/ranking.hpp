#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cdbroker/grv.hpp"
#include "cdbroker/qos.hpp"

namespace cdbroker {

struct ProviderRecord {
  std::string id;
  std::string gateway;  // opaque routing token, not interpreted here
  double grv = 0.0;
  int rank = 0;               // 1 = best
  long long prov_count = 0;   // contents provisioned this epoch
};

// Snapshot of the provider ranking for one epoch. Entries are ordered by
// descending GRV, ties broken by ascending id, and ranks run 1..N in that
// order.
struct RankTable {
  long long epoch = 0;
  double created_at = 0.0;
  std::vector<ProviderRecord> entries;

  const ProviderRecord* find(std::string_view id) const;
};

// Probes one provider with one sample content and returns the raw QoS
// vector observed. May throw; a provider whose measurement throws is scored
// with an all-zero series (worst GRV) instead of aborting the build.
using MeasureFn =
    std::function<QosVector(const std::string& provider_id,
                            const std::string& content_key)>;

// Builds the epoch-0 table: every provider is probed once per sample
// content, the merit-sum series is fitted to the epoch window, and providers
// are ranked by the resulting GRV.
RankTable initialize_ranks(const std::vector<std::string>& provider_ids,
                           const std::vector<std::string>& sample_contents,
                           const MeasureFn& measure, const AttributeSet& set,
                           const GrvParams& p, double now = 0.0);

// Publishes the next epoch from fresh measurements. Providers absent from
// `measures` (or with partial series) are fitted via pad_series; every
// prov_count restarts at zero. Measures for providers not in `prev` are
// ignored.
RankTable rerank(const std::vector<EpochMeasures>& measures,
                 const RankTable& prev, const GrvParams& p, double now);

// Inserts a newcomer using its bootstrap measurements; the epoch is
// unchanged and existing GRVs are not recomputed.
RankTable join(const RankTable& table, const std::string& id,
               const EpochMeasures& bootstrap, const GrvParams& p);

// Removes a provider; remaining ranks stay contiguous.
RankTable leave(const RankTable& table, const std::string& id);

// CSV with columns: epoch, provider_id, grv, rank, prov_count. Several
// epochs may be appended to one stream; read_rank_csv splits them again.
void write_rank_csv(std::ostream& os, const RankTable& table,
                    bool with_header);
std::vector<RankTable> read_rank_csv(std::istream& is);

}  // namespace cdbroker
