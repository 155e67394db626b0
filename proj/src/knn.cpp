#include "myoprop/knn.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "myoprop/errors.hpp"

namespace myo {

namespace {

constexpr double kExactMatchDistance = 1e-12;
constexpr double kWeightFloor = 1e-12;

Eigen::Matrix<double, kChannels, kChannels> to_eigen(const Mat8& m) {
  Eigen::Matrix<double, kChannels, kChannels> out;
  for (int i = 0; i < kChannels; ++i)
    for (int j = 0; j < kChannels; ++j) out(i, j) = m[i][j];
  return out;
}

}  // namespace

std::string to_string(WeightScheme w) {
  switch (w) {
    case WeightScheme::uniform: return "uniform";
    case WeightScheme::inverse: return "inv";
    case WeightScheme::inverse_squared: return "inv-sq";
  }
  throw config_error("unknown weight scheme value");
}

WeightScheme weight_scheme_from_string(const std::string& name) {
  if (name == "uniform") return WeightScheme::uniform;
  if (name == "inv" || name == "inverse") return WeightScheme::inverse;
  if (name == "inv-sq" || name == "inverse_squared")
    return WeightScheme::inverse_squared;
  throw config_error("unknown weighting: " + name);
}

MetricSpec MetricSpec::parse(const std::string& text) {
  MetricSpec spec;
  if (text == "euclidean") {
    spec.kind = MetricKind::euclidean;
    return spec;
  }
  if (text == "mahalanobis") {
    spec.kind = MetricKind::mahalanobis;
    return spec;
  }
  if (text.rfind("minkowski:", 0) == 0) {
    spec.kind = MetricKind::minkowski;
    try {
      spec.p = std::stod(text.substr(10));
    } catch (const std::exception&) {
      throw config_error("bad minkowski order in: " + text);
    }
    if (!(spec.p >= 1.0)) throw config_error("minkowski order must be >= 1");
    return spec;
  }
  throw config_error("unknown metric: " + text +
                     " (expected euclidean|minkowski:p|mahalanobis)");
}

std::string MetricSpec::str() const {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::mahalanobis: return "mahalanobis";
    case MetricKind::minkowski: {
      std::string s = "minkowski:";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", p);
      return s + buf;
    }
  }
  throw config_error("unknown metric kind");
}

DistanceMetric DistanceMetric::minkowski(double p) {
  if (!(p >= 1.0)) throw config_error("minkowski order must be >= 1");
  DistanceMetric m;
  m.spec_.kind = MetricKind::minkowski;
  m.spec_.p = p;
  return m;
}

DistanceMetric DistanceMetric::euclidean() {
  DistanceMetric m;
  m.spec_.kind = MetricKind::euclidean;
  return m;
}

DistanceMetric DistanceMetric::mahalanobis(const Mat8& covariance) {
  for (int i = 0; i < kChannels; ++i) {
    for (int j = 0; j < kChannels; ++j) {
      if (!std::isfinite(covariance[i][j])) {
        throw numeric_error("mahalanobis covariance has non-finite entries");
      }
      if (std::fabs(covariance[i][j] - covariance[j][i]) >
          1e-9 * (1.0 + std::fabs(covariance[i][j]))) {
        throw numeric_error("mahalanobis covariance is not symmetric");
      }
    }
  }
  const auto cov = to_eigen(covariance);
  Eigen::LLT<Eigen::Matrix<double, kChannels, kChannels>> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw numeric_error("mahalanobis covariance is singular or not positive definite");
  }
  Eigen::Matrix<double, kChannels, kChannels> inv =
      llt.solve(Eigen::Matrix<double, kChannels, kChannels>::Identity());

  DistanceMetric m;
  m.spec_.kind = MetricKind::mahalanobis;
  m.covariance_ = covariance;
  auto stored = std::make_shared<Mat8>();
  for (int i = 0; i < kChannels; ++i)
    for (int j = 0; j < kChannels; ++j) (*stored)[i][j] = inv(i, j);
  m.inverse_ = std::move(stored);
  return m;
}

DistanceMetric DistanceMetric::resolve(const MetricSpec& spec,
                                       std::span<const Vec8> points) {
  switch (spec.kind) {
    case MetricKind::euclidean: return euclidean();
    case MetricKind::minkowski: return minkowski(spec.p);
    case MetricKind::mahalanobis: return mahalanobis(pooled_covariance(points));
  }
  throw config_error("unknown metric kind");
}

Mat8 pooled_covariance(std::span<const Vec8> points) {
  const std::size_t n = points.size();
  if (n == 0) throw data_error("covariance of an empty point set");
  Vec8 mean{};
  for (const auto& p : points)
    for (int c = 0; c < kChannels; ++c) mean[c] += p[c];
  for (int c = 0; c < kChannels; ++c) mean[c] /= static_cast<double>(n);

  Mat8 cov{};
  for (const auto& p : points) {
    for (int i = 0; i < kChannels; ++i) {
      for (int j = 0; j < kChannels; ++j) {
        cov[i][j] += (p[i] - mean[i]) * (p[j] - mean[j]);
      }
    }
  }
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  double trace = 0.0;
  for (int i = 0; i < kChannels; ++i) {
    for (int j = 0; j < kChannels; ++j) cov[i][j] /= denom;
    trace += cov[i][i];
  }
  const double ridge = 1e-6 * trace / kChannels;
  for (int i = 0; i < kChannels; ++i) cov[i][i] += ridge;
  return cov;
}

double DistanceMetric::operator()(const Vec8& a, const Vec8& b) const {
  switch (spec_.kind) {
    case MetricKind::euclidean: {
      double sum = 0.0;
      for (int c = 0; c < kChannels; ++c) {
        const double d = a[c] - b[c];
        sum += d * d;
      }
      return std::sqrt(sum);
    }
    case MetricKind::minkowski: {
      double sum = 0.0;
      for (int c = 0; c < kChannels; ++c) {
        sum += std::pow(std::fabs(a[c] - b[c]), spec_.p);
      }
      return std::pow(sum, 1.0 / spec_.p);
    }
    case MetricKind::mahalanobis: {
      if (!inverse_) throw config_error("mahalanobis metric is unresolved");
      Vec8 d;
      for (int c = 0; c < kChannels; ++c) d[c] = a[c] - b[c];
      double sum = 0.0;
      for (int i = 0; i < kChannels; ++i) {
        double row = 0.0;
        for (int j = 0; j < kChannels; ++j) row += (*inverse_)[i][j] * d[j];
        sum += d[i] * row;
      }
      return std::sqrt(std::max(sum, 0.0));
    }
  }
  throw config_error("unknown metric kind");
}

double distance(const Vec8& a, const Vec8& b, const DistanceMetric& metric) {
  return metric(a, b);
}

void TrainingSet::validate() const {
  if (points.empty()) throw data_error("training set is empty");
  if (points.size() != labels.size()) {
    throw data_error("training set points/labels length mismatch");
  }
  for (Gesture g : labels) {
    if (g == Gesture::rest) {
      throw data_error("training set must not contain rest labels");
    }
  }
}

std::vector<Neighbor> neighbors(const Vec8& query, const TrainingSet& train,
                                int k, const DistanceMetric& metric) {
  const std::size_t n = train.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw config_error("k = " + std::to_string(k) +
                       " out of range for training size " + std::to_string(n));
  }
  std::vector<Neighbor> all(n);
  for (std::size_t i = 0; i < n; ++i) {
    all[i] = Neighbor{i, metric(query, train.points[i])};
  }
  auto by_distance_then_index = [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
  };
  std::partial_sort(all.begin(), all.begin() + k, all.end(),
                    by_distance_then_index);
  all.resize(k);
  return all;
}

double weight(double d, WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::uniform: return 1.0;
    case WeightScheme::inverse: return 1.0 / std::max(d, kWeightFloor);
    case WeightScheme::inverse_squared: {
      const double f = std::max(d, kWeightFloor);
      return 1.0 / (f * f);
    }
  }
  throw config_error("unknown weight scheme");
}

Gesture vote(std::span<const std::pair<Gesture, double>> neighbor_labels,
             WeightScheme scheme) {
  if (neighbor_labels.empty()) {
    throw config_error("vote over an empty neighbor list");
  }

  // An identical training sample is definitive: exact matches out-vote any
  // accumulation of 1/d^2 weights from further points.
  bool any_exact = false;
  for (const auto& [label, d] : neighbor_labels) {
    if (d < kExactMatchDistance) {
      any_exact = true;
      break;
    }
  }

  struct Tally {
    double score = 0.0;
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
  };
  std::map<Gesture, Tally> tallies;
  for (std::size_t rank = 0; rank < neighbor_labels.size(); ++rank) {
    const auto& [label, d] = neighbor_labels[rank];
    if (any_exact && d >= kExactMatchDistance) continue;
    auto& t = tallies[label];
    t.score += any_exact ? 1.0 : weight(d, scheme);
    t.best_rank = std::min(t.best_rank, rank);
  }

  auto best = tallies.begin();
  for (auto it = std::next(tallies.begin()); it != tallies.end(); ++it) {
    if (it->second.score > best->second.score ||
        (it->second.score == best->second.score &&
         it->second.best_rank < best->second.best_rank)) {
      best = it;
    }
  }
  return best->first;
}

Gesture classify(const NormalizedFrame& query, const TrainingSet& train,
                 const KnnConfig& config) {
  if (query.magnitude <= 0.0) {
    throw config_error("classify requires a query with positive magnitude");
  }
  const auto near = neighbors(query.direction, train, config.k, config.metric);
  std::vector<std::pair<Gesture, double>> labeled(near.size());
  for (std::size_t i = 0; i < near.size(); ++i) {
    labeled[i] = {train.labels[near[i].index], near[i].distance};
  }
  return vote(labeled, config.weighting);
}

}  // namespace myo
