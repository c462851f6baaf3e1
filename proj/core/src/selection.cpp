#include "cdbroker/selection.hpp"

#include <algorithm>
#include <cmath>

#include "cdbroker/format.hpp"

namespace cdbroker {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::naive: return "naive";
    case Algorithm::fair: return "fair";
    case Algorithm::round_robin: return "round_robin";
    case Algorithm::random_pick: return "random";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  if (name == "naive") return Algorithm::naive;
  if (name == "fair") return Algorithm::fair;
  if (name == "round_robin") return Algorithm::round_robin;
  if (name == "random") return Algorithm::random_pick;
  return std::nullopt;
}

UserClassTable UserClassTable::from_qos_floors(
    const std::vector<QosVector>& class_floors, const AttributeSet& set,
    const GrvParams& p) {
  std::vector<double> floors;
  floors.reserve(class_floors.size());
  for (const QosVector& q : class_floors) {
    floors.push_back(grv_request(merit_sum(q, set), p));
  }
  return from_grv_floors(std::move(floors));
}

UserClassTable UserClassTable::from_grv_floors(std::vector<double> floors) {
  for (std::size_t i = 1; i < floors.size(); ++i) {
    if (floors[i] < floors[i - 1]) {
      fail(Errc::invalid_config,
           "class GRV floors must be nondecreasing with class index");
    }
  }
  UserClassTable t;
  t.floors_ = std::move(floors);
  return t;
}

double UserClassTable::min_grv(int user_class) const {
  if (user_class < 1 || user_class > class_count()) {
    fail(Errc::unknown_class,
         "class " + std::to_string(user_class) + " outside [1, " +
             std::to_string(class_count()) + "]");
  }
  return floors_[static_cast<std::size_t>(user_class - 1)];
}

double request_grv(const RequestSpec& req, const UserClassTable& classes,
                   const AttributeSet& set, const GrvParams& p) {
  if (req.grv_floor) {
    if (*req.grv_floor < 0.0) {
      fail(Errc::invalid_params, "request GRV floor must be >= 0");
    }
    return *req.grv_floor;
  }
  if (req.user_class) return classes.min_grv(*req.user_class);
  if (req.qos_floor) return grv_request(merit_sum(*req.qos_floor, set), p);
  fail(Errc::invalid_config, "request carries no QoS requirement");
}

std::vector<ProviderRecord> qualified_candidates(
    const RankTable& table, double req_grv,
    const std::set<std::string>& excluded) {
  std::vector<ProviderRecord> out;
  for (const ProviderRecord& e : table.entries) {
    if (e.grv >= req_grv && !excluded.count(e.id)) out.push_back(e);
  }
  return out;
}

namespace {

std::vector<std::string> ids_of(const std::vector<ProviderRecord>& recs) {
  std::vector<std::string> ids;
  ids.reserve(recs.size());
  for (const ProviderRecord& r : recs) ids.push_back(r.id);
  return ids;
}

// Shared tail of every algorithm: count the provisioned content and refresh
// the fairness index over the qualified pool's run-level counts. When the
// pool is empty (fallback) the index cannot be recomputed and the previous
// value is carried forward.
double record_selection(SelectionState& state, const std::string& chosen,
                        const std::vector<ProviderRecord>& qualified) {
  state.epoch_counts[chosen] += 1;
  state.total_counts[chosen] += 1;
  double jain;
  if (qualified.empty()) {
    jain = state.fairness_history.empty() ? 1.0
                                          : state.fairness_history.back();
  } else {
    std::vector<double> alloc;
    alloc.reserve(qualified.size());
    for (const ProviderRecord& r : qualified) {
      auto it = state.total_counts.find(r.id);
      alloc.push_back(it == state.total_counts.end()
                          ? 0.0
                          : static_cast<double>(it->second));
    }
    jain = jain_index(alloc);
  }
  state.fairness_history.push_back(jain);
  return jain;
}

SelectionOutcome fallback_outcome(const RankTable& table,
                                  SelectionState& state) {
  const ProviderRecord& top = table.entries.front();
  SelectionOutcome out{top.id, top.grv, true, std::nullopt, 1.0};
  out.jain_after = record_selection(state, top.id, {});
  return out;
}

}  // namespace

SelectionOutcome select_naive(const std::vector<ProviderRecord>& candidates,
                              double req_grv, SelectionState& state,
                              double now, const GrvParams& p,
                              const RankTable& table) {
  if (table.entries.empty()) {
    fail(Errc::empty_roster, "selection needs a non-empty rank table");
  }
  auto ids = ids_of(candidates);
  if (ids != state.last_candidates) {
    state.cursor = -1;  // candidate list changed: restart the rotation
    state.last_candidates = std::move(ids);
  }
  if (candidates.empty()) {
    state.t_last = now;
    return fallback_outcome(table, state);
  }

  std::size_t idx = 0;
  if (!(now - state.t_last > p.resilience_window)) {
    // Burst: move to the next candidate; wrap to the best one when the
    // rotation leaves the list or hits a candidate below the requirement.
    const std::size_t j = static_cast<std::size_t>(state.cursor + 1);
    if (j < candidates.size() && candidates[j].grv >= req_grv) idx = j;
  }
  state.cursor = static_cast<int>(idx);
  state.t_last = now;

  SelectionOutcome out{candidates[idx].id, candidates[idx].grv, false,
                       std::nullopt, 1.0};
  out.jain_after = record_selection(state, out.provider_id, candidates);
  return out;
}

std::map<int, std::vector<std::string>> class_candidates(
    const RankTable& table, const UserClassTable& classes, double req_grv,
    const std::set<std::string>& excluded) {
  std::map<int, std::vector<std::string>> by_class;
  for (int j = 1; j <= classes.class_count(); ++j) {
    const double floor = classes.min_grv(j);
    if (floor < req_grv) continue;  // below the request's own level
    std::vector<std::string> members;
    for (const ProviderRecord& e : table.entries) {
      if (e.grv >= floor && !excluded.count(e.id)) members.push_back(e.id);
    }
    by_class.emplace(j, std::move(members));
  }
  return by_class;
}

double selection_probability(
    const std::string& provider_id,
    const std::map<int, std::vector<std::string>>& by_class, double req_grv,
    const RankTable& table) {
  const ProviderRecord* rec = table.find(provider_id);
  if (!rec) fail(Errc::unknown_provider, "provider '" + provider_id + "'");
  if (rec->grv < req_grv) {
    fail(Errc::unqualified_provider,
         "provider '" + provider_id + "' does not meet the requirement");
  }
  long long qualified = 0;
  for (const ProviderRecord& e : table.entries) {
    if (e.grv >= req_grv) ++qualified;
  }
  double numerator = 0.0;
  for (const auto& [cls, members] : by_class) {
    if (members.empty()) continue;  // empty class array contributes nothing
    if (std::find(members.begin(), members.end(), provider_id) !=
        members.end()) {
      numerator += 1.0 / static_cast<double>(members.size());
    }
  }
  return numerator / static_cast<double>(qualified);
}

double allocation_share(const std::string& provider_id, double probability,
                        const std::map<std::string, long long>& epoch_counts) {
  long long total = 0;
  for (const auto& [id, n] : epoch_counts) total += n;
  if (total == 0) return 0.0;
  const auto it = epoch_counts.find(provider_id);
  const long long own = it == epoch_counts.end() ? 0 : it->second;
  return probability * static_cast<double>(own) / static_cast<double>(total);
}

SelectionOutcome select_fair(double req_grv, const RankTable& table,
                             const UserClassTable& classes,
                             SelectionState& state,
                             const std::set<std::string>& excluded) {
  if (table.entries.empty()) {
    fail(Errc::empty_roster, "selection needs a non-empty rank table");
  }
  const auto qualified = qualified_candidates(table, req_grv, excluded);
  if (qualified.empty()) return fallback_outcome(table, state);

  const auto by_class = class_candidates(table, classes, req_grv, excluded);
  // Qualified candidates arrive ordered by descending GRV then ascending id,
  // so keeping the first strictly-smaller share realizes the tie-breaks.
  const ProviderRecord* best = nullptr;
  double best_z = 0.0;
  for (const ProviderRecord& r : qualified) {
    const double pr = selection_probability(r.id, by_class, req_grv, table);
    const double z = allocation_share(r.id, pr, state.epoch_counts);
    if (!best || z < best_z) {
      best = &r;
      best_z = z;
    }
  }

  SelectionOutcome out{best->id, best->grv, false, best_z, 1.0};
  out.jain_after = record_selection(state, best->id, qualified);
  return out;
}

SelectionOutcome select_round_robin(
    const std::vector<ProviderRecord>& candidates, SelectionState& state,
    const RankTable& table) {
  if (table.entries.empty()) {
    fail(Errc::empty_roster, "selection needs a non-empty rank table");
  }
  if (candidates.empty()) {
    state.rr_cursor = 0;
    return fallback_outcome(table, state);
  }
  if (state.rr_cursor >= static_cast<int>(candidates.size())) {
    state.rr_cursor = 0;  // list shrank below the cursor (or wrapped)
  }
  const ProviderRecord& pick =
      candidates[static_cast<std::size_t>(state.rr_cursor)];
  ++state.rr_cursor;
  SelectionOutcome out{pick.id, pick.grv, false, std::nullopt, 1.0};
  out.jain_after = record_selection(state, pick.id, candidates);
  return out;
}

SelectionOutcome select_random(const std::vector<ProviderRecord>& candidates,
                               SelectionState& state, const RankTable& table) {
  if (table.entries.empty()) {
    fail(Errc::empty_roster, "selection needs a non-empty rank table");
  }
  if (candidates.empty()) return fallback_outcome(table, state);
  const ProviderRecord& pick =
      candidates[state.rng.bounded(candidates.size())];
  SelectionOutcome out{pick.id, pick.grv, false, std::nullopt, 1.0};
  out.jain_after = record_selection(state, pick.id, candidates);
  return out;
}

double jain_index(const std::vector<double>& allocations) {
  if (allocations.empty()) fail(Errc::empty_list, "no allocations");
  double sum = 0.0, sq = 0.0;
  for (double x : allocations) {
    if (x < 0.0) fail(Errc::invalid_params, "allocations must be >= 0");
    sum += x;
    sq += x * x;
  }
  if (sq == 0.0) fail(Errc::all_zero, "all allocations are zero");
  return sum * sum / (static_cast<double>(allocations.size()) * sq);
}

double estimated_reliability(const std::vector<double>& selected_grvs,
                             double grv_user) {
  if (selected_grvs.empty()) fail(Errc::empty_list, "no selections");
  if (!(grv_user > 0.0)) {
    fail(Errc::non_positive_user_grv, "user GRV must be positive");
  }
  const SeriesStats st = series_stats(selected_grvs);
  return 100.0 * (st.mean - grv_user) * st.stdev / grv_user;
}

}  // namespace cdbroker
