#pragma once

#include <utility>
#include <vector>

#include "myoprop/knn.hpp"
#include "myoprop/signal.hpp"

namespace myo {

struct CvRow {
  int k;
  MetricSpec metric;
  WeightScheme weighting;
  double accuracy;  // in [0,1]
};

struct CvReport {
  std::vector<CvRow> rows;
  CvRow chosen;  // a row of `rows` attaining maximal accuracy
};

struct BlockRange {
  std::size_t begin;  // inclusive
  std::size_t end;    // exclusive
};

// One range per distinct block id, in order of appearance. Datasets without
// ids fall back to 5 contiguous near-equal blocks (needs >= 5 frames).
// Non-contiguous duplicate ids and fewer than 2 resulting blocks are errors.
std::vector<BlockRange> make_blocks(const LabeledDataset& data);

// Leave-one-block-out accuracy of the pure classifier over the normalized
// non-rest frames. Mahalanobis covariance is re-pooled from each fold's
// training points.
double cv_accuracy(const LabeledDataset& data, int k, const MetricSpec& metric,
                   WeightScheme weighting);

// Odd values 1, 3, 5, ... capped at ceil(0.10 * n_train) and at the largest
// k every fold can serve.
std::vector<int> default_k_grid(const LabeledDataset& data);

// Best k from the candidates (ties to the smallest k), plus the full table.
std::pair<int, CvReport> select_k(const LabeledDataset& data,
                                  std::span<const int> k_candidates,
                                  const MetricSpec& metric,
                                  WeightScheme weighting);

// Exhaustive grid over k x metric x weighting. Ties resolve toward the
// earliest grid entry with the smallest k.
CvReport grid_search(const LabeledDataset& data, std::span<const int> ks,
                     std::span<const MetricSpec> metrics,
                     std::span<const WeightScheme> weightings);

}  // namespace myo
