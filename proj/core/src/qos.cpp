#include "cdbroker/qos.hpp"

#include <algorithm>
#include <cmath>

namespace cdbroker {

ValidationResult validate_attribute_set(const AttributeSet& set) {
  if (set.specs.empty()) {
    return ValidationResult::bad(Errc::empty_attribute_set,
                                 "attribute set needs at least one attribute");
  }
  for (std::size_t i = 0; i < set.specs.size(); ++i) {
    const AttributeSpec& a = set.specs[i];
    if (!(a.upper > a.lower)) {
      return ValidationResult::bad(
          Errc::degenerate_bounds,
          "attribute '" + a.name + "' has upper <= lower");
    }
    if (!(a.weight > 0.0)) {
      return ValidationResult::bad(
          Errc::non_positive_weight,
          "attribute '" + a.name + "' has non-positive weight");
    }
  }
  if (!(set.omega > 0.0)) {
    return ValidationResult::bad(Errc::non_positive_omega,
                                 "omega must be positive");
  }
  double sum = 0.0;
  for (const AttributeSpec& a : set.specs) sum += a.weight;
  if (std::abs(sum - static_cast<double>(set.specs.size())) >
      kWeightSumTolerance) {
    return ValidationResult::bad(
        Errc::weight_sum_violation,
        "weights must sum to the attribute count (" +
            std::to_string(set.specs.size()) + "), got " +
            std::to_string(sum));
  }
  return ValidationResult::good();
}

double normalize(double value, const AttributeSpec& spec, double omega) {
  if (!(spec.upper > spec.lower)) {
    fail(Errc::degenerate_bounds,
         "attribute '" + spec.name + "' has upper <= lower");
  }
  const double v = std::clamp(value, spec.lower, spec.upper);
  const double toward_upper =
      omega * ((v - spec.lower) / (spec.upper - spec.lower));
  // small_positive is computed as the exact complement so the pair always
  // sums to omega.
  return spec.polarity == Polarity::big_positive ? toward_upper
                                                 : omega - toward_upper;
}

QosVector normalize_vector(const QosVector& raw, const AttributeSet& set) {
  if (raw.size() != set.specs.size()) {
    fail(Errc::length_mismatch,
         "QoS vector has " + std::to_string(raw.size()) +
             " values, attribute set has " + std::to_string(set.specs.size()));
  }
  QosVector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = normalize(raw[i], set.specs[i], set.omega);
  }
  return out;
}

double weighted_sum(const QosVector& normalized, const AttributeSet& set) {
  if (normalized.size() != set.specs.size()) {
    fail(Errc::length_mismatch,
         "normalized vector has " + std::to_string(normalized.size()) +
             " values, attribute set has " + std::to_string(set.specs.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    acc += set.specs[i].weight * normalized[i];
  }
  return acc;
}

double merit_sum(const QosVector& raw, const AttributeSet& set) {
  return weighted_sum(normalize_vector(raw, set), set);
}

}  // namespace cdbroker
