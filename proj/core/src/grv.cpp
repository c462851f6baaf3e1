#include "cdbroker/grv.hpp"

#include <algorithm>
#include <cmath>

namespace cdbroker {

ValidationResult validate_params(const GrvParams& p) {
  if (p.attribute_count < 1) {
    return ValidationResult::bad(Errc::invalid_params,
                                 "attribute_count must be >= 1");
  }
  if (p.measures_per_epoch < 1) {
    return ValidationResult::bad(Errc::invalid_params,
                                 "measures_per_epoch must be >= 1");
  }
  if (!(p.discount_scale > 0.0) || p.discount_scale > 1.0) {
    return ValidationResult::bad(Errc::invalid_params,
                                 "discount_scale must be in (0, 1]");
  }
  if (!(p.discount_span > 0.0)) {
    return ValidationResult::bad(Errc::invalid_params,
                                 "discount_span must be positive");
  }
  if (!(p.merit_scale > 0.0)) {
    return ValidationResult::bad(Errc::invalid_params,
                                 "merit_scale must be positive");
  }
  if (!(p.rerank_interval > 0.0)) {
    return ValidationResult::bad(Errc::invalid_params,
                                 "rerank_interval must be positive");
  }
  if (!(p.resilience_window > 0.0)) {
    return ValidationResult::bad(Errc::invalid_params,
                                 "resilience_window must be positive");
  }
  return ValidationResult::good();
}

namespace {

// Gaussian tail sampled at slot k. Computed through one shared expression so
// that slot == window yields an exact zero discount (identical operands on
// both sides of the subtraction).
double tail(double k, const GrvParams& p) {
  const double num = k * k * p.discount_span * p.discount_span;
  const double den = 2.0 * static_cast<double>(p.measures_per_epoch) *
                     static_cast<double>(p.measures_per_epoch);
  return std::exp(-num / den);
}

}  // namespace

double irrelevance_factor(int k, const GrvParams& p) {
  if (k < 1 || k > p.measures_per_epoch) {
    fail(Errc::index_out_of_epoch,
         "slot " + std::to_string(k) + " outside [1, " +
             std::to_string(p.measures_per_epoch) + "]");
  }
  return p.discount_scale *
         (tail(static_cast<double>(k), p) -
          tail(static_cast<double>(p.measures_per_epoch), p));
}

double measure_weight(int k, const GrvParams& p) {
  return 1.0 / (1.0 + irrelevance_factor(k, p));
}

double measure_weight_total(const GrvParams& p) {
  double acc = 0.0;
  for (int k = 1; k <= p.measures_per_epoch; ++k) acc += measure_weight(k, p);
  return acc;
}

double grv_provider(const EpochMeasures& em, const GrvParams& p) {
  if (static_cast<int>(em.merit_sums.size()) != p.measures_per_epoch) {
    fail(Errc::series_length_mismatch,
         "provider '" + em.provider_id + "' has " +
             std::to_string(em.merit_sums.size()) + " measures, expected " +
             std::to_string(p.measures_per_epoch));
  }
  double acc = 0.0;
  for (int k = 1; k <= p.measures_per_epoch; ++k) {
    acc += measure_weight(k, p) * em.merit_sums[k - 1];
  }
  return acc / (static_cast<double>(p.attribute_count) *
                static_cast<double>(p.measures_per_epoch));
}

double grv_request(double merit_sum, const GrvParams& p) {
  const double max_sum =
      static_cast<double>(p.attribute_count) * p.merit_scale;
  // Allow a sliver of floating-point headroom: merit sums assembled from
  // normalized attributes can overshoot the exact bound by a few ulps.
  const double slack = max_sum * 1e-12 + 1e-12;
  if (merit_sum < -slack || merit_sum > max_sum + slack) {
    fail(Errc::out_of_range_sum,
         "merit sum " + std::to_string(merit_sum) + " outside [0, " +
             std::to_string(max_sum) + "]");
  }
  const double clamped = std::clamp(merit_sum, 0.0, max_sum);
  return clamped * measure_weight_total(p) /
         (static_cast<double>(p.attribute_count) *
          static_cast<double>(p.measures_per_epoch));
}

GrvBounds grv_bounds(const GrvParams& p) {
  return {0.0, p.merit_scale * measure_weight_total(p) /
                   static_cast<double>(p.measures_per_epoch)};
}

std::vector<double> pad_series(std::vector<double> series, int target) {
  if (target < 1) fail(Errc::invalid_params, "pad target must be >= 1");
  const std::size_t want = static_cast<std::size_t>(target);
  if (series.size() > want) {
    series.erase(series.begin(),
                 series.begin() + static_cast<std::ptrdiff_t>(series.size() - want));
    return series;
  }
  if (series.empty()) return std::vector<double>(want, 0.0);
  std::vector<double> out(want - series.size(), series.front());
  out.insert(out.end(), series.begin(), series.end());
  return out;
}

WeightTable weight_table(const std::vector<int>& window_sizes, double scale,
                         double span) {
  if (window_sizes.empty()) {
    fail(Errc::invalid_params, "need at least one window size");
  }
  WeightTable t;
  t.window_sizes = window_sizes;
  for (int window : window_sizes) {
    GrvParams p;
    p.measures_per_epoch = window;
    p.discount_scale = scale;
    p.discount_span = span;
    if (auto v = validate_params(p); !v) fail(v.code, v.detail);
    std::vector<double> col;
    col.reserve(static_cast<std::size_t>(window));
    for (int k = 1; k <= window; ++k) col.push_back(measure_weight(k, p));
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    t.min_row.push_back(*mn);
    t.max_row.push_back(*mx);
    t.avg_diff_row.push_back((*mx - *mn) / static_cast<double>(window));
    t.weights.push_back(std::move(col));
  }
  return t;
}

}  // namespace cdbroker
