#pragma once

#include <map>
#include <optional>
#include <vector>

#include "myoprop/knn.hpp"
#include "myoprop/model_selection.hpp"
#include "myoprop/signal.hpp"

namespace myo {

// Rest is anything at or below t = g * t0, where t0 is the mean magnitude of
// the rest frames seen during training.
struct RestThreshold {
  double t0 = 0.0;
  double g = 2.5;
  double t = 0.0;  // g * t0
};

// Linear map from magnitude to proportional intent: m0 = t / d anchors 0,
// the per-class training magnitude mean Mc anchors 1.
struct ProportionalMap {
  double d = 5.0;
  double m0 = 0.0;  // t / d
  std::map<Gesture, double> class_means;

  // Classes whose Mc <= m0 collapse to constant full intent.
  std::vector<Gesture> degenerate_classes() const;
};

struct Prediction {
  Gesture label = Gesture::rest;
  double proportion = 0.0;  // in [0,1]; always 0 for rest
};

struct KnnModel {
  TrainingSet train;
  KnnConfig config;
  RestThreshold rest;
  ProportionalMap prop;
  int smooth_window = 5;
  // Present when k was chosen by block-wise cross-validation.
  std::optional<CvReport> cv;
};

RestThreshold fit_rest_threshold(std::span<const double> rest_magnitudes,
                                 double g);

// True iff m does not exceed the threshold (boundary counts as rest).
bool is_rest(double m, const RestThreshold& rest);

// Mean training magnitude per non-rest class, all stimulus levels pooled.
std::map<Gesture, double> fit_class_means(const LabeledDataset& data);

// clamp((m - m0) / (Mc - m0), 0, 1); degenerate classes (Mc <= m0) give 1.
double proportional_value(double m, Gesture label, const ProportionalMap& prop);

struct TrainParams {
  double g = 2.5;
  double d = 5.0;
  std::optional<int> k;  // nullopt selects k by block-wise CV
  MetricSpec metric;     // euclidean by default
  WeightScheme weighting = WeightScheme::inverse_squared;
  int smooth_window = 5;
};

// Full training pipeline: smooth per block, fit the rest threshold from rest
// frames, fit class magnitude means, normalize the non-rest frames into the
// training set, and resolve k (fixed or via CV).
KnnModel train(const LabeledDataset& data, const TrainParams& params = {});

// Rest thresholding, normalization, classification, proportional scaling.
// The frame is used as-is; streams should go through predict_stream so the
// model's smoothing window is applied.
Prediction predict(const Frame& frame, const KnnModel& model);

// Smooths the stream with the model's window, then predicts frame by frame.
std::vector<Prediction> predict_stream(std::span<const Frame> stream,
                                       const KnnModel& model);

}  // namespace myo
