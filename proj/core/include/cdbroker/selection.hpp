#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdbroker/grv.hpp"
#include "cdbroker/qos.hpp"
#include "cdbroker/ranking.hpp"
#include "cdbroker/rng.hpp"

namespace cdbroker {

enum class Algorithm { naive, fair, round_robin, random_pick };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

// A client request for one content. The QoS requirement is expressed as
// exactly one of: an explicit per-attribute floor vector, a user-class index
// (1-based), or a precomputed rank-value floor.
struct RequestSpec {
  std::string content_key;
  std::optional<QosVector> qos_floor;
  std::optional<int> user_class;
  std::optional<double> grv_floor;
  double arrival_time = 0.0;
};

// Minimum rank values per user class, nondecreasing with class index
// (class K is the most demanding).
class UserClassTable {
 public:
  UserClassTable() = default;

  static UserClassTable from_qos_floors(
      const std::vector<QosVector>& class_floors, const AttributeSet& set,
      const GrvParams& p);
  static UserClassTable from_grv_floors(std::vector<double> floors);

  int class_count() const { return static_cast<int>(floors_.size()); }
  double min_grv(int user_class) const;  // 1-based, throws unknown_class
  const std::vector<double>& floors() const { return floors_; }

 private:
  std::vector<double> floors_;
};

// Mutable per-algorithm bookkeeping carried across requests. Each selection
// algorithm run in parallel over the same request stream owns one of these;
// nothing here is shared between algorithms.
struct SelectionState {
  // naive: arrival time of the previous request and index (into the current
  // candidate list) of the previous pick; the rotation restarts when the
  // candidate list changes.
  double t_last = -std::numeric_limits<double>::infinity();
  int cursor = -1;
  std::vector<std::string> last_candidates;

  // round robin
  int rr_cursor = 0;

  // random
  Rng rng{1};

  // provisioned-content counts: per epoch (drives fair allocation shares)
  // and over the whole run (drives the fairness index).
  std::map<std::string, long long> epoch_counts;
  std::map<std::string, long long> total_counts;
  std::vector<double> fairness_history;

  void reset_epoch() { epoch_counts.clear(); }
};

struct SelectionOutcome {
  std::string provider_id;
  double provider_grv = 0.0;
  // Set when no candidate qualified: the client is notified and the current
  // rank-1 provider serves as a best-effort stand-in.
  bool fallback = false;
  std::optional<double> z_value;  // fair only
  double jain_after = 1.0;        // fairness index after this selection
};

// Rank-value requirement of a request: explicit floor > user class > QoS
// vector, whichever is present.
double request_grv(const RequestSpec& req, const UserClassTable& classes,
                   const AttributeSet& set, const GrvParams& p);

// Providers meeting the requirement and not excluded, in table order
// (descending GRV, ties by ascending id).
std::vector<ProviderRecord> qualified_candidates(
    const RankTable& table, double req_grv,
    const std::set<std::string>& excluded);

// Burst-aware selection: a request arriving more than resilience_window
// after the previous one takes the best candidate; requests inside the
// window rotate to the next candidate, wrapping to the best when the
// rotation runs off the list (or the next candidate no longer qualifies).
SelectionOutcome select_naive(const std::vector<ProviderRecord>& candidates,
                              double req_grv, SelectionState& state,
                              double now, const GrvParams& p,
                              const RankTable& table);

// Candidate arrays per user class for every class at least as demanding as
// the request: class j is present iff min_grv(j) >= req_grv, and holds the
// non-excluded providers whose GRV meets that class's floor.
std::map<int, std::vector<std::string>> class_candidates(
    const RankTable& table, const UserClassTable& classes, double req_grv,
    const std::set<std::string>& excluded);

// Probability score of a qualified provider: sum over the classes whose
// candidate array contains it of 1/|array|, divided by the number of
// qualified providers in the table. Throws unqualified_provider when the
// provider's GRV is below req_grv.
double selection_probability(
    const std::string& provider_id,
    const std::map<int, std::vector<std::string>>& by_class, double req_grv,
    const RankTable& table);

// Allocation share z = probability * own_count / total_count over the
// current epoch's counts; zero when nothing has been provisioned yet.
double allocation_share(const std::string& provider_id, double probability,
                        const std::map<std::string, long long>& epoch_counts);

// Fairness-driven selection: picks the qualified provider with the smallest
// allocation share (ties: higher GRV, then lower id).
SelectionOutcome select_fair(double req_grv, const RankTable& table,
                             const UserClassTable& classes,
                             SelectionState& state,
                             const std::set<std::string>& excluded);

// Baselines: cycle through the qualified list / pick uniformly at random.
SelectionOutcome select_round_robin(
    const std::vector<ProviderRecord>& candidates, SelectionState& state,
    const RankTable& table);
SelectionOutcome select_random(const std::vector<ProviderRecord>& candidates,
                               SelectionState& state, const RankTable& table);

// Jain fairness index (sum x)^2 / (n * sum x^2) in (0, 1]; requires a
// non-empty, non-negative, not-all-zero allocation vector.
double jain_index(const std::vector<double>& allocations);

// Percentage reliability estimate of a selection series against the user's
// requirement: 100 * (mean - grv_user) * stdev / grv_user, sample stdev.
double estimated_reliability(const std::vector<double>& selected_grvs,
                             double grv_user);

}  // namespace cdbroker
