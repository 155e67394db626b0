#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "myoprop/errors.hpp"
#include "myoprop/model_selection.hpp"
#include "myoprop/rng.hpp"

using namespace myo;

namespace {

Frame frame_near(const Vec8& center, Rng& rng, double jitter) {
  Frame f;
  for (int c = 0; c < kChannels; ++c) {
    f.channels[c] = std::fabs(center[c] + jitter * (rng.uniform() - 0.5));
  }
  return f;
}

Vec8 cluster_center(int which) {
  Vec8 v{};
  for (int c = 0; c < kChannels; ++c) v[c] = 0.2;
  v[which % kChannels] = 3.0;
  return v;
}

// Two well-separated clusters split over `n_blocks` blocks.
LabeledDataset separable_dataset(int per_class, int n_blocks, Rng& rng,
                                 double jitter = 0.05) {
  LabeledDataset data;
  const int per_block = 2 * per_class / n_blocks;
  int made = 0;
  for (int b = 0; b < n_blocks; ++b) {
    for (int i = 0; i < per_block; ++i) {
      const bool first = made % 2 == 0;
      data.frames.push_back(
          frame_near(cluster_center(first ? 0 : 4), rng, jitter));
      data.labels.push_back(first ? Gesture::power : Gesture::point);
      data.levels.push_back(1.0);
      data.blocks.push_back(b);
      ++made;
    }
  }
  return data;
}

}  // namespace

TEST_CASE("make_blocks groups contiguous ids") {
  LabeledDataset data;
  data.frames.resize(6);
  data.labels.assign(6, Gesture::power);
  data.levels.assign(6, 1.0);
  data.blocks = {0, 0, 1, 1, 2, 2};
  const auto blocks = make_blocks(data);
  REQUIRE(blocks.size() == 3);
  for (std::size_t b = 0; b < 3; ++b) {
    CHECK(blocks[b].begin == 2 * b);
    CHECK(blocks[b].end == 2 * b + 2);
  }
}

TEST_CASE("make_blocks falls back to 5 equal blocks") {
  LabeledDataset data;
  data.frames.resize(10);
  data.labels.assign(10, Gesture::power);
  data.levels.assign(10, 1.0);
  const auto blocks = make_blocks(data);
  REQUIRE(blocks.size() == 5);
  for (const auto& b : blocks) CHECK(b.end - b.begin == 2);

  LabeledDataset tiny;
  tiny.frames.resize(4);
  tiny.labels.assign(4, Gesture::power);
  tiny.levels.assign(4, 1.0);
  CHECK_THROWS_AS(make_blocks(tiny), data_error);
}

TEST_CASE("make_blocks rejects degenerate structures") {
  LabeledDataset data;
  data.frames.resize(4);
  data.labels.assign(4, Gesture::power);
  data.levels.assign(4, 1.0);
  data.blocks = {0, 1, 0, 1};  // non-contiguous duplicates
  CHECK_THROWS_AS(make_blocks(data), data_error);

  data.blocks = {7, 7, 7, 7};  // a single block cannot be cross-validated
  CHECK_THROWS_AS(make_blocks(data), data_error);
}

TEST_CASE("cv_accuracy is perfect on separable clusters") {
  Rng rng(31);
  const auto data = separable_dataset(8, 2, rng);
  CHECK(cv_accuracy(data, 1, MetricSpec{}, WeightScheme::inverse_squared) ==
        1.0);
}

TEST_CASE("cv_accuracy is chance-level on shuffled labels") {
  Rng rng(32);
  LabeledDataset data;
  const std::vector<Gesture> alphabet = {Gesture::power, Gesture::point,
                                         Gesture::flex, Gesture::ext};
  // Direction structure carries no label information at all.
  for (int i = 0; i < 200; ++i) {
    Frame f;
    for (int c = 0; c < kChannels; ++c) f.channels[c] = 0.5 + rng.uniform();
    data.frames.push_back(f);
    data.labels.push_back(alphabet[rng.below(4)]);
    data.levels.push_back(1.0);
    data.blocks.push_back(i / 50);
  }
  const double acc =
      cv_accuracy(data, 1, MetricSpec{}, WeightScheme::inverse_squared);
  CHECK(acc > 0.25 - 0.12);
  CHECK(acc < 0.25 + 0.12);
}

TEST_CASE("cv_accuracy equals an independently coded fold loop") {
  Rng rng(33);
  LabeledDataset data;
  const std::vector<Gesture> alphabet = {Gesture::power, Gesture::point,
                                         Gesture::flex};
  for (int i = 0; i < 12; ++i) {
    Frame f;
    for (int c = 0; c < kChannels; ++c) f.channels[c] = 0.1 + rng.uniform();
    data.frames.push_back(f);
    data.labels.push_back(alphabet[rng.below(3)]);
    data.levels.push_back(1.0);
    data.blocks.push_back(i / 4);
  }

  for (int k : {1, 2, 3}) {
    // Hand-rolled leave-one-block-out loop.
    int correct = 0, tested = 0;
    for (int held = 0; held < 3; ++held) {
      TrainingSet train;
      for (int i = 0; i < 12; ++i) {
        if (i / 4 == held) continue;
        train.points.push_back(normalize(data.frames[i]).direction);
        train.labels.push_back(data.labels[i]);
      }
      const KnnConfig config{k, DistanceMetric::euclidean(),
                             WeightScheme::inverse_squared};
      for (int i = 0; i < 12; ++i) {
        if (i / 4 != held) continue;
        const auto nf = normalize(data.frames[i]);
        if (classify(nf, train, config) == data.labels[i]) ++correct;
        ++tested;
      }
    }
    const double expected = static_cast<double>(correct) / tested;
    CHECK(cv_accuracy(data, k, MetricSpec{}, WeightScheme::inverse_squared) ==
          expected);
  }
}

TEST_CASE("cv_accuracy rejects oversized k") {
  Rng rng(34);
  const auto data = separable_dataset(4, 2, rng);
  // Each fold trains on 4 frames.
  CHECK_THROWS_AS(
      cv_accuracy(data, 5, MetricSpec{}, WeightScheme::inverse_squared),
      config_error);
}

TEST_CASE("select_k breaks ties toward the smallest k") {
  Rng rng(35);
  const auto data = separable_dataset(10, 2, rng);
  const std::vector<int> candidates = {1, 3, 5};
  const auto [k, report] =
      select_k(data, candidates, MetricSpec{}, WeightScheme::inverse_squared);
  CHECK(k == 1);
  CHECK(report.chosen.accuracy == 1.0);
  REQUIRE(report.rows.size() == 3);
  for (const auto& row : report.rows) CHECK(row.accuracy == 1.0);
}

TEST_CASE("select_k equals an exhaustive oracle on overlapping data") {
  Rng rng(36);
  LabeledDataset data;
  // Two heavily overlapping clouds so the best k is data-dependent.
  for (int i = 0; i < 80; ++i) {
    const bool first = i % 2 == 0;
    data.frames.push_back(frame_near(cluster_center(first ? 0 : 1), rng, 2.5));
    data.labels.push_back(first ? Gesture::power : Gesture::point);
    data.levels.push_back(1.0);
    data.blocks.push_back(i / 20);
  }
  const std::vector<int> candidates = {1, 3, 5, 7};
  const auto [k, report] =
      select_k(data, candidates, MetricSpec{}, WeightScheme::inverse_squared);

  double best_acc = -1.0;
  int best_k = 0;
  for (int kc : candidates) {
    const double acc =
        cv_accuracy(data, kc, MetricSpec{}, WeightScheme::inverse_squared);
    if (acc > best_acc) {
      best_acc = acc;
      best_k = kc;
    }
  }
  CHECK(k == best_k);
  CHECK(report.chosen.accuracy == best_acc);
}

TEST_CASE("default_k_grid is odd and capped at 10 percent") {
  Rng rng(37);
  const auto data = separable_dataset(40, 4, rng);  // 80 non-rest frames
  const auto grid = default_k_grid(data);
  REQUIRE(!grid.empty());
  CHECK(grid.front() == 1);
  for (int k : grid) CHECK(k % 2 == 1);
  CHECK(grid.back() <= 8);  // ceil(0.1 * 80)
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] == grid[i - 1] + 2);
}

TEST_CASE("accuracy is invariant under label renaming") {
  Rng rng(38);
  LabeledDataset data;
  for (int i = 0; i < 40; ++i) {
    const bool first = i % 2 == 0;
    data.frames.push_back(frame_near(cluster_center(first ? 0 : 2), rng, 1.5));
    data.labels.push_back(first ? Gesture::power : Gesture::point);
    data.levels.push_back(1.0);
    data.blocks.push_back(i / 10);
  }
  LabeledDataset renamed = data;
  for (auto& g : renamed.labels) {
    g = g == Gesture::power ? Gesture::sup : Gesture::pro;
  }
  const double a = cv_accuracy(data, 3, MetricSpec{}, WeightScheme::uniform);
  const double b = cv_accuracy(renamed, 3, MetricSpec{}, WeightScheme::uniform);
  CHECK(a == b);
}

TEST_CASE("duplicating every frame keeps separable k=1 accuracy at 1") {
  Rng rng(39);
  const auto data = separable_dataset(8, 2, rng);
  LabeledDataset doubled;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int copy = 0; copy < 2; ++copy) {
      doubled.frames.push_back(data.frames[i]);
      doubled.labels.push_back(data.labels[i]);
      doubled.levels.push_back(data.levels[i]);
      doubled.blocks.push_back(data.blocks[i]);
    }
  }
  CHECK(cv_accuracy(data, 1, MetricSpec{}, WeightScheme::inverse_squared) == 1.0);
  CHECK(cv_accuracy(doubled, 1, MetricSpec{}, WeightScheme::inverse_squared) ==
        1.0);
}

TEST_CASE("rest frames are excluded from cross-validation") {
  Rng rng(40);
  auto data = separable_dataset(8, 2, rng);
  // Interleave rest frames; they must not affect the classifier accuracy.
  LabeledDataset with_rest;
  for (std::size_t i = 0; i < data.size(); ++i) {
    with_rest.frames.push_back(data.frames[i]);
    with_rest.labels.push_back(data.labels[i]);
    with_rest.levels.push_back(1.0);
    with_rest.blocks.push_back(data.blocks[i]);
    Frame rest;
    for (int c = 0; c < kChannels; ++c) rest.channels[c] = 0.01;
    with_rest.frames.push_back(rest);
    with_rest.labels.push_back(Gesture::rest);
    with_rest.levels.push_back(0.0);
    with_rest.blocks.push_back(data.blocks[i]);
  }
  CHECK(cv_accuracy(with_rest, 1, MetricSpec{}, WeightScheme::inverse_squared) ==
        1.0);
}
