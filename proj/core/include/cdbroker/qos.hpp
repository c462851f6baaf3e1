#pragma once

#include <string>
#include <vector>

#include "cdbroker/errors.hpp"

namespace cdbroker {

// Whether larger raw values of an attribute are better (throughput,
// availability, ...) or worse (response time, latency, ...).
enum class Polarity { big_positive, small_positive };

struct AttributeSpec {
  std::string name;
  Polarity polarity = Polarity::big_positive;
  double lower = 0.0;   // worst-case raw bound
  double upper = 1.0;   // best-case raw bound (must exceed lower)
  double weight = 1.0;  // relative importance, > 0
};

// Raw or normalized per-attribute values, index-aligned with
// AttributeSet::specs.
using QosVector = std::vector<double>;

struct AttributeSet {
  std::vector<AttributeSpec> specs;
  // Scaling factor: one normalized attribute lies in [0, omega] regardless
  // of polarity, which puts every attribute on a common merit scale.
  double omega = 1.0;

  std::size_t size() const { return specs.size(); }
};

// Weights must sum to the attribute count within this tolerance.
inline constexpr double kWeightSumTolerance = 1e-9;

// Checks invariants and reports the first violated one: non-empty set,
// upper > lower and weight > 0 per attribute, omega > 0, weights summing to
// the attribute count.
ValidationResult validate_attribute_set(const AttributeSet& set);

// Maps a raw attribute value onto [0, omega]: values are clamped into
// [lower, upper] first, then scaled so that the preferred extreme maps to
// omega and the other extreme to 0. The two polarities are exact
// complements: big(v) + small(v) == omega.
double normalize(double value, const AttributeSpec& spec, double omega);

QosVector normalize_vector(const QosVector& raw, const AttributeSet& set);

// Weighted sum of an already-normalized vector; lies in
// [0, size * omega] for validated sets.
double weighted_sum(const QosVector& normalized, const AttributeSet& set);

// normalize_vector + weighted_sum in one step; the per-measurement merit
// figure everything downstream is built on.
double merit_sum(const QosVector& raw, const AttributeSet& set);

}  // namespace cdbroker
