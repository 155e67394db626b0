#include "myoprop/model_selection.hpp"

#include <algorithm>
#include <cmath>

#include "myoprop/errors.hpp"

namespace myo {

std::vector<BlockRange> make_blocks(const LabeledDataset& data) {
  data.validate();
  std::vector<BlockRange> blocks;
  if (data.blocks.empty()) {
    // Fallback: 5 contiguous, near-equal blocks.
    const std::size_t n = data.size();
    if (n < 5) {
      throw data_error("need block ids or at least 5 frames for the fallback split");
    }
    const std::size_t base = n / 5, extra = n % 5;
    std::size_t start = 0;
    for (std::size_t b = 0; b < 5; ++b) {
      const std::size_t len = base + (b < extra ? 1 : 0);
      blocks.push_back({start, start + len});
      start += len;
    }
    return blocks;
  }
  std::size_t start = 0;
  for (std::size_t i = 1; i <= data.size(); ++i) {
    if (i == data.size() || data.blocks[i] != data.blocks[start]) {
      blocks.push_back({start, i});
      start = i;
    }
  }
  if (blocks.size() < 2) {
    throw data_error("cross-validation needs at least 2 blocks, got " +
                     std::to_string(blocks.size()));
  }
  return blocks;
}

namespace {

struct FoldData {
  // Normalized non-rest frames per block.
  std::vector<std::vector<Vec8>> directions;
  std::vector<std::vector<Gesture>> labels;
  std::size_t total = 0;
};

FoldData split_folds(const LabeledDataset& data) {
  const auto blocks = make_blocks(data);
  FoldData folds;
  folds.directions.resize(blocks.size());
  folds.labels.resize(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = blocks[b].begin; i < blocks[b].end; ++i) {
      if (data.labels[i] == Gesture::rest) continue;
      const auto nf = normalize(data.frames[i]);
      if (nf.magnitude <= 0.0) continue;  // zero-magnitude frames carry no direction
      folds.directions[b].push_back(nf.direction);
      folds.labels[b].push_back(data.labels[i]);
      ++folds.total;
    }
  }
  return folds;
}

}  // namespace

double cv_accuracy(const LabeledDataset& data, int k, const MetricSpec& metric,
                   WeightScheme weighting) {
  const auto folds = split_folds(data);
  const std::size_t n_blocks = folds.directions.size();
  if (folds.total == 0) throw data_error("no non-rest frames to cross-validate");

  std::size_t correct = 0, tested = 0;
  for (std::size_t held = 0; held < n_blocks; ++held) {
    if (folds.directions[held].empty()) continue;
    TrainingSet train;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      if (b == held) continue;
      train.points.insert(train.points.end(), folds.directions[b].begin(),
                          folds.directions[b].end());
      train.labels.insert(train.labels.end(), folds.labels[b].begin(),
                          folds.labels[b].end());
    }
    if (static_cast<std::size_t>(k) > train.size()) {
      throw config_error("k = " + std::to_string(k) +
                         " exceeds the training size of fold " +
                         std::to_string(held) + " (" +
                         std::to_string(train.size()) + ")");
    }
    KnnConfig config{k, DistanceMetric::resolve(metric, train.points), weighting};
    for (std::size_t i = 0; i < folds.directions[held].size(); ++i) {
      NormalizedFrame query{folds.directions[held][i], 1.0};
      if (classify(query, train, config) == folds.labels[held][i]) ++correct;
      ++tested;
    }
  }
  if (tested == 0) throw data_error("no test frames in any fold");
  return static_cast<double>(correct) / static_cast<double>(tested);
}

std::vector<int> default_k_grid(const LabeledDataset& data) {
  const auto folds = split_folds(data);
  std::size_t min_train = folds.total;
  for (std::size_t held = 0; held < folds.directions.size(); ++held) {
    if (folds.directions[held].empty()) continue;
    min_train = std::min(min_train, folds.total - folds.directions[held].size());
  }
  const int cap_frac = static_cast<int>(
      std::ceil(0.10 * static_cast<double>(folds.total)));
  const int cap = std::max(1, std::min<int>(cap_frac, static_cast<int>(min_train)));
  std::vector<int> grid;
  for (int k = 1; k <= cap; k += 2) grid.push_back(k);
  return grid;
}

std::pair<int, CvReport> select_k(const LabeledDataset& data,
                                  std::span<const int> k_candidates,
                                  const MetricSpec& metric,
                                  WeightScheme weighting) {
  if (k_candidates.empty()) throw config_error("empty k candidate set");
  CvReport report;
  for (int k : k_candidates) {
    report.rows.push_back({k, metric, weighting,
                           cv_accuracy(data, k, metric, weighting)});
  }
  const CvRow* best = &report.rows.front();
  for (const auto& row : report.rows) {
    if (row.accuracy > best->accuracy ||
        (row.accuracy == best->accuracy && row.k < best->k)) {
      best = &row;
    }
  }
  report.chosen = *best;
  return {best->k, report};
}

CvReport grid_search(const LabeledDataset& data, std::span<const int> ks,
                     std::span<const MetricSpec> metrics,
                     std::span<const WeightScheme> weightings) {
  if (ks.empty() || metrics.empty() || weightings.empty()) {
    throw config_error("empty cross-validation grid");
  }
  CvReport report;
  for (const auto& metric : metrics) {
    for (const auto weighting : weightings) {
      for (int k : ks) {
        report.rows.push_back({k, metric, weighting,
                               cv_accuracy(data, k, metric, weighting)});
      }
    }
  }
  const CvRow* best = &report.rows.front();
  for (const auto& row : report.rows) {
    if (row.accuracy > best->accuracy ||
        (row.accuracy == best->accuracy && row.k < best->k)) {
      best = &row;
    }
  }
  report.chosen = *best;
  return report;
}

}  // namespace myo
