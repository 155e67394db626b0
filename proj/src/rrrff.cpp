#include "myoprop/rrrff.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "myoprop/errors.hpp"
#include "myoprop/rng.hpp"

namespace myo {

RffMap sample_rff(int dim, double gamma, std::uint64_t seed) {
  if (dim < 1) throw config_error("feature dimension must be >= 1");
  if (!(gamma > 0.0)) throw config_error("kernel bandwidth gamma must be positive");
  RffMap map;
  map.dim = dim;
  map.gamma = gamma;
  map.seed = seed;
  map.omega.resize(dim);
  map.beta.resize(dim);
  Rng rng(seed);
  const double sigma = std::sqrt(2.0 * gamma);
  for (int j = 0; j < dim; ++j) {
    for (int c = 0; c < kChannels; ++c) map.omega[j][c] = sigma * rng.normal();
    map.beta[j] = 2.0 * 3.14159265358979323846 * rng.uniform();
  }
  return map;
}

std::vector<double> rff_features(const Vec8& x, const RffMap& map) {
  std::vector<double> z(map.dim);
  const double scale = std::sqrt(2.0 / map.dim);
  for (int j = 0; j < map.dim; ++j) {
    double dot = map.beta[j];
    for (int c = 0; c < kChannels; ++c) dot += map.omega[j][c] * x[c];
    z[j] = scale * std::cos(dot);
  }
  return z;
}

double gaussian_kernel(const Vec8& x, const Vec8& y, double gamma) {
  double sq = 0.0;
  for (int c = 0; c < kChannels; ++c) {
    const double d = x[c] - y[c];
    sq += d * d;
  }
  return std::exp(-gamma * sq);
}

double median_heuristic_gamma(std::span<const Frame> frames,
                              std::uint64_t seed) {
  const std::size_t n = frames.size();
  if (n < 2) throw data_error("median heuristic needs at least 2 frames");
  const std::size_t all_pairs = n * (n - 1) / 2;
  std::vector<double> dists;
  auto euclid = [&](std::size_t i, std::size_t j) {
    double sq = 0.0;
    for (int c = 0; c < kChannels; ++c) {
      const double d = frames[i].channels[c] - frames[j].channels[c];
      sq += d * d;
    }
    return std::sqrt(sq);
  };
  if (all_pairs <= 1000) {
    dists.reserve(all_pairs);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) dists.push_back(euclid(i, j));
    }
  } else {
    Rng rng(seed ^ 0x6D65646961ull);
    dists.reserve(1000);
    for (int s = 0; s < 1000; ++s) {
      const auto i = static_cast<std::size_t>(rng.below(n));
      std::size_t j;
      do {
        j = static_cast<std::size_t>(rng.below(n));
      } while (j == i);
      dists.push_back(euclid(i, j));
    }
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t m = dists.size();
  const double median = (m % 2 == 1)
                            ? dists[m / 2]
                            : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
  if (!(median > 0.0)) {
    throw data_error("median pairwise distance is zero; data is degenerate");
  }
  return 1.0 / (2.0 * median * median);
}

RrRffModel fit_rrrff(const LabeledDataset& data, const RrRffParams& params) {
  data.validate();
  if (!(params.lambda > 0.0)) throw config_error("lambda must be positive");
  if (!(params.rho > 0.0 && params.rho < 1.0)) {
    throw config_error("rho must lie in (0,1)");
  }
  const LabeledDataset smoothed = smooth_dataset(data, params.smooth_window);
  const std::size_t n = smoothed.size();
  if (n == 0) throw data_error("empty training data");

  // Regression consumes amplitude: the smoothed rectified frames go in as-is.
  std::set<Gesture> present;
  for (Gesture g : smoothed.labels) {
    if (g != Gesture::rest) present.insert(g);
  }
  if (present.empty()) throw data_error("training data has no non-rest class");

  RrRffModel model;
  model.lambda = params.lambda;
  model.rho = params.rho;
  model.smooth_window = params.smooth_window;
  model.gesture_order.assign(present.begin(), present.end());
  model.gamma_from_median = !params.gamma.has_value();
  const double gamma = params.gamma.has_value()
                           ? *params.gamma
                           : median_heuristic_gamma(smoothed.frames, params.seed);
  if (!(gamma > 0.0)) throw config_error("gamma must be positive");
  model.map = sample_rff(params.dim, gamma, params.seed);

  const int D = params.dim;
  const auto G = static_cast<int>(model.gesture_order.size());
  Eigen::MatrixXd Z(n, D);
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, G);
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = rff_features(smoothed.frames[i].channels, model.map);
    for (int j = 0; j < D; ++j) Z(i, j) = z[j];
    if (smoothed.labels[i] != Gesture::rest) {
      const auto col = static_cast<int>(
          std::find(model.gesture_order.begin(), model.gesture_order.end(),
                    smoothed.labels[i]) -
          model.gesture_order.begin());
      Y(i, col) = smoothed.levels[i];
    }
  }
  if (Z.cwiseAbs().maxCoeff() == 0.0) {
    throw data_error("all feature values are zero; cannot fit");
  }

  const Eigen::MatrixXd A =
      Z.transpose() * Z + params.lambda * Eigen::MatrixXd::Identity(D, D);
  const Eigen::MatrixXd rhs = Z.transpose() * Y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success) {
    throw numeric_error("ridge normal equations are not factorizable");
  }
  Eigen::MatrixXd W = ldlt.solve(rhs);
  // Iterative refinement pushes the normal-equation residual to rounding
  // level even in the near-singular interpolation regime.
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 5; ++iter) {
    const Eigen::MatrixXd R = rhs - A * W;
    residual = R.cwiseAbs().maxCoeff();
    if (residual <= 1e-12) break;
    W += ldlt.solve(R);
  }
  residual = (rhs - A * W).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-8)) {
    throw numeric_error("ridge solve residual " + std::to_string(residual) +
                        " exceeds 1e-8");
  }
  model.normal_eq_residual = residual;

  model.weights.assign(D, std::vector<double>(G));
  for (int j = 0; j < D; ++j) {
    for (int g = 0; g < G; ++g) model.weights[j][g] = W(j, g);
  }
  return model;
}

Prediction predict_rrrff(const Frame& frame, const RrRffModel& model) {
  const auto z = rff_features(frame.channels, model.map);
  const auto G = static_cast<int>(model.gesture_order.size());
  std::vector<double> activations(G, 0.0);
  for (int j = 0; j < model.map.dim; ++j) {
    for (int g = 0; g < G; ++g) activations[g] += model.weights[j][g] * z[j];
  }
  int best = 0;
  for (int g = 1; g < G; ++g) {
    if (activations[g] > activations[best]) best = g;  // ties keep the earlier gesture
  }
  if (activations[best] < model.rho) return {Gesture::rest, 0.0};
  return {model.gesture_order[best],
          std::clamp(activations[best], 0.0, 1.0)};
}

std::vector<Prediction> predict_stream_rrrff(std::span<const Frame> stream,
                                             const RrRffModel& model) {
  const auto smoothed = smooth(stream, model.smooth_window);
  std::vector<Prediction> out(smoothed.size());
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    out[i] = predict_rrrff(smoothed[i], model);
  }
  return out;
}

}  // namespace myo
