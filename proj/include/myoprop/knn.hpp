#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "myoprop/signal.hpp"

namespace myo {

enum class WeightScheme { uniform, inverse, inverse_squared };

std::string to_string(WeightScheme w);
WeightScheme weight_scheme_from_string(const std::string& name);

enum class MetricKind { minkowski, euclidean, mahalanobis };

// Metric as the user names it, before any data-dependent resolution.
// Mahalanobis needs a covariance estimated from training points; see
// DistanceMetric::resolve.
struct MetricSpec {
  MetricKind kind = MetricKind::euclidean;
  double p = 2.0;  // minkowski order, >= 1

  static MetricSpec parse(const std::string& text);  // "euclidean" | "minkowski:p" | "mahalanobis"
  std::string str() const;
};

using Mat8 = std::array<std::array<double, kChannels>, kChannels>;

// A fully resolved, callable distance. Mahalanobis instances precompute the
// inverse covariance once; evaluation is a plain quadratic form.
class DistanceMetric {
 public:
  static DistanceMetric minkowski(double p);  // p >= 1, config_error otherwise
  static DistanceMetric euclidean();
  // Requires a symmetric positive-definite covariance; throws numeric_error
  // if the Cholesky factorization fails.
  static DistanceMetric mahalanobis(const Mat8& covariance);

  // Resolve a spec against training points. Mahalanobis uses the pooled
  // covariance of the points with a 1e-6 * trace/8 diagonal ridge.
  static DistanceMetric resolve(const MetricSpec& spec,
                                std::span<const Vec8> points);

  double operator()(const Vec8& a, const Vec8& b) const;

  const MetricSpec& spec() const { return spec_; }
  // Set only for mahalanobis: the (regularized) covariance that was factored.
  const std::optional<Mat8>& covariance() const { return covariance_; }

 private:
  DistanceMetric() = default;
  MetricSpec spec_;
  std::optional<Mat8> covariance_;
  std::shared_ptr<const Mat8> inverse_;  // shared so copies stay cheap
};

// Sample covariance (divisor n-1) of the points plus the diagonal ridge
// 1e-6 * trace/8 that keeps small datasets invertible.
Mat8 pooled_covariance(std::span<const Vec8> points);

struct KnnConfig {
  int k = 1;
  DistanceMetric metric = DistanceMetric::euclidean();
  WeightScheme weighting = WeightScheme::inverse_squared;
};

// Normalized non-rest training exemplars. Rest never appears here; it is
// handled upstream by the magnitude threshold.
struct TrainingSet {
  std::vector<Vec8> points;  // unit-mean directions
  std::vector<Gesture> labels;

  std::size_t size() const { return points.size(); }
  void validate() const;  // throws data_error
};

struct Neighbor {
  std::size_t index;
  double distance;
};

double distance(const Vec8& a, const Vec8& b, const DistanceMetric& metric);

// The k nearest training points by (distance, index), ascending. Linear scan
// over all points; no acceleration structure.
std::vector<Neighbor> neighbors(const Vec8& query, const TrainingSet& train,
                                int k, const DistanceMetric& metric);

// Distance-to-weight map. inverse and inverse_squared floor the distance at
// 1e-12 so the result is always finite.
double weight(double d, WeightScheme scheme);

// Weighted majority vote. Exact matches (distance < 1e-12) short-circuit to
// a plain majority among themselves, nearest first. Otherwise the class with
// the largest summed weight wins; ties go to the class of the nearest
// neighbor among the tied classes.
Gesture vote(std::span<const std::pair<Gesture, double>> neighbor_labels,
             WeightScheme scheme);

// Prediction steps on an already-normalized sample: nearest neighbors,
// distance weighting, majority vote. The query must have magnitude > 0.
Gesture classify(const NormalizedFrame& query, const TrainingSet& train,
                 const KnnConfig& config);

}  // namespace myo
