#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "myoprop/proportional.hpp"
#include "myoprop/signal.hpp"

namespace myo {

// Random Fourier feature map for the Gaussian kernel exp(-gamma * ||x-y||^2):
// frequencies drawn N(0, 2*gamma*I), phases uniform on [0, 2*pi).
struct RffMap {
  std::vector<Vec8> omega;   // D rows of frequencies
  std::vector<double> beta;  // D phases
  int dim = 0;               // D
  double gamma = 0.0;
  std::uint64_t seed = 0;
};

RffMap sample_rff(int dim, double gamma, std::uint64_t seed);

// z_j = sqrt(2/D) * cos(omega_j . x + beta_j); |z_j| <= sqrt(2/D).
std::vector<double> rff_features(const Vec8& x, const RffMap& map);

double gaussian_kernel(const Vec8& x, const Vec8& y, double gamma);

struct RrRffParams {
  int dim = 300;
  std::optional<double> gamma;  // nullopt: median heuristic on pairwise distances
  double lambda = 1.0;
  double rho = 0.15;  // rest threshold on the max activation
  std::uint64_t seed = 42;
  int smooth_window = 5;
};

struct RrRffModel {
  RffMap map;
  std::vector<std::vector<double>> weights;  // D x G
  double lambda = 1.0;
  double rho = 0.15;
  std::vector<Gesture> gesture_order;  // columns of `weights`
  int smooth_window = 5;
  bool gamma_from_median = false;
  double normal_eq_residual = 0.0;  // inf-norm of (Z'Z + lambda*I)W - Z'Y
};

// gamma = 1 / (2 * median^2) of pairwise Euclidean distances, estimated on at
// most 1000 pairs subsampled with the given seed. Zero median is a data_error.
double median_heuristic_gamma(std::span<const Frame> frames,
                              std::uint64_t seed);

// Ridge regression on random Fourier features of the smoothed, unnormalized
// frames. Targets carry the stimulus level in the column of the frame's
// gesture and zeros elsewhere; rest rows are all-zero. The normal equations
// are solved with a Cholesky factorization plus iterative refinement and the
// residual is checked against 1e-8.
RrRffModel fit_rrrff(const LabeledDataset& data, const RrRffParams& params = {});

// a = W' z(frame); rest when max(a) < rho, otherwise the argmax gesture with
// proportion clamp(max(a), 0, 1).
Prediction predict_rrrff(const Frame& frame, const RrRffModel& model);

std::vector<Prediction> predict_stream_rrrff(std::span<const Frame> stream,
                                             const RrRffModel& model);

}  // namespace myo
