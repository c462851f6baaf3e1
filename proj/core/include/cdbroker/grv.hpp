#pragma once

#include <string>
#include <vector>

#include "cdbroker/errors.hpp"

namespace cdbroker {

// Parameters of the global rank value (GRV) computation. A provider's GRV
// aggregates the last `measures_per_epoch` merit sums, weighting each
// measurement slot so that fresher measurements count for more.
struct GrvParams {
  int attribute_count = 1;    // QoS attributes per measurement (m)
  int measures_per_epoch = 5; // retained measurement slots per epoch

  // The per-slot weight is 1 / (1 + M_k) where M_k is a Gaussian-shaped
  // staleness discount: discount_scale controls its magnitude (0 < scale
  // <= 1], discount_span the end of the sampled region of the curve (> 0).
  double discount_scale = 1.0;
  double discount_span = 2.0;

  // Upper bound of one normalized attribute; mirrors AttributeSet::omega.
  double merit_scale = 1.0;

  double rerank_interval = 10.0;   // seconds between rank-table rebuilds
  double resilience_window = 0.5;  // burst window used by naive selection

  double measure_interval() const {
    return rerank_interval / measures_per_epoch;
  }
};

ValidationResult validate_params(const GrvParams& p);

// One provider's merit sums for an epoch, oldest first; slot k (1-based)
// holds the k-th measurement, so the last slot is the freshest.
struct EpochMeasures {
  std::string provider_id;
  std::vector<double> merit_sums;
};

// Staleness discount M_k for slot k in [1, measures_per_epoch]. Decreases
// strictly in k and is exactly 0 for the freshest slot.
double irrelevance_factor(int k, const GrvParams& p);

// Per-slot weight 1 / (1 + M_k), in [0.5, 1]; exactly 1 for the freshest
// slot and strictly increasing in k.
double measure_weight(int k, const GrvParams& p);

// Sum of measure_weight over all slots.
double measure_weight_total(const GrvParams& p);

// Weighted epoch aggregate: sum_k weight(k) * merit_sums[k-1], divided by
// attribute_count * measures_per_epoch. Requires exactly measures_per_epoch
// entries (see pad_series for shorter/longer histories).
double grv_provider(const EpochMeasures& em, const GrvParams& p);

// Rank value a request with the given merit sum would need; equals
// grv_provider for a constant series at that merit sum.
double grv_request(double merit_sum, const GrvParams& p);

struct GrvBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Attainable GRV range: [0, merit_scale * weight_total / measures_per_epoch].
// The upper end stays below merit_scale whenever more than one slot exists.
GrvBounds grv_bounds(const GrvParams& p);

// Fits a measurement history to `target` slots: excess oldest entries are
// dropped, short histories are left-padded by repeating the earliest
// measure, and an empty history becomes all zeros (worst case).
std::vector<double> pad_series(std::vector<double> series, int target);

// Per-slot weights for several window sizes side by side, plus min/max and
// the average per-step difference (max - min) / window. This is what the
// `table3` CLI subcommand prints.
struct WeightTable {
  std::vector<int> window_sizes;
  std::vector<std::vector<double>> weights;  // [column][k-1]
  std::vector<double> min_row, max_row, avg_diff_row;
};

WeightTable weight_table(const std::vector<int>& window_sizes, double scale,
                         double span);

}  // namespace cdbroker
