#include "myoprop/proportional.hpp"

#include <algorithm>
#include <cmath>

#include "myoprop/errors.hpp"

namespace myo {

RestThreshold fit_rest_threshold(std::span<const double> rest_magnitudes,
                                 double g) {
  if (rest_magnitudes.empty()) {
    throw data_error("no rest magnitudes to fit the threshold from");
  }
  if (!(g > 0.0)) throw config_error("rest gain g must be positive");
  double sum = 0.0;
  for (double m : rest_magnitudes) sum += m;
  RestThreshold rest;
  rest.t0 = sum / static_cast<double>(rest_magnitudes.size());
  rest.g = g;
  rest.t = g * rest.t0;
  return rest;
}

bool is_rest(double m, const RestThreshold& rest) {
  // Activity requires strictly exceeding the threshold.
  return m <= rest.t;
}

std::map<Gesture, double> fit_class_means(const LabeledDataset& data) {
  std::map<Gesture, double> sums;
  std::map<Gesture, std::size_t> counts;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == Gesture::rest) continue;
    sums[data.labels[i]] += magnitude(data.frames[i]);
    counts[data.labels[i]] += 1;
  }
  if (sums.empty()) throw data_error("no non-rest frames to fit class means");
  std::map<Gesture, double> means;
  for (const auto& [label, sum] : sums) {
    means[label] = sum / static_cast<double>(counts[label]);
  }
  return means;
}

std::vector<Gesture> ProportionalMap::degenerate_classes() const {
  std::vector<Gesture> out;
  for (const auto& [label, mc] : class_means) {
    if (mc <= m0) out.push_back(label);
  }
  return out;
}

double proportional_value(double m, Gesture label, const ProportionalMap& prop) {
  if (label == Gesture::rest) {
    throw config_error("proportional_value is undefined for rest");
  }
  const auto it = prop.class_means.find(label);
  if (it == prop.class_means.end()) {
    throw config_error("no class magnitude mean for label " + to_string(label));
  }
  const double mc = it->second;
  if (mc <= prop.m0) return 1.0;  // degenerate class: constant full intent
  return std::clamp((m - prop.m0) / (mc - prop.m0), 0.0, 1.0);
}

KnnModel train(const LabeledDataset& data, const TrainParams& params) {
  data.validate();
  if (!(params.d >= 1.0)) throw config_error("divisor d must be >= 1");
  const LabeledDataset smoothed = smooth_dataset(data, params.smooth_window);

  // The baseline comes from the raw rest magnitudes: smoothing windows that
  // straddle a gesture release would bleed gesture energy into the rest
  // samples and inflate t0.
  std::vector<double> rest_magnitudes;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == Gesture::rest) {
      rest_magnitudes.push_back(magnitude(data.frames[i]));
    }
  }
  if (rest_magnitudes.empty()) {
    throw data_error("training data contains no rest frames");
  }

  KnnModel model;
  model.smooth_window = params.smooth_window;
  model.rest = fit_rest_threshold(rest_magnitudes, params.g);
  model.prop.d = params.d;
  model.prop.m0 = model.rest.t / params.d;
  model.prop.class_means = fit_class_means(smoothed);

  // The rest gesture never enters the neighbor space; zero-magnitude frames
  // carry no direction and are skipped as well.
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    if (smoothed.labels[i] == Gesture::rest) continue;
    const auto nf = normalize(smoothed.frames[i]);
    if (nf.magnitude <= 0.0) continue;
    model.train.points.push_back(nf.direction);
    model.train.labels.push_back(smoothed.labels[i]);
  }
  model.train.validate();

  int k = 1;
  if (params.k.has_value()) {
    k = *params.k;
    if (k < 1 || static_cast<std::size_t>(k) > model.train.size()) {
      throw config_error("k = " + std::to_string(k) +
                         " out of range for training size " +
                         std::to_string(model.train.size()));
    }
  } else {
    const auto grid = default_k_grid(smoothed);
    auto [best_k, report] =
        select_k(smoothed, grid, params.metric, params.weighting);
    k = best_k;
    model.cv = std::move(report);
  }
  model.config.k = k;
  model.config.metric = DistanceMetric::resolve(params.metric, model.train.points);
  model.config.weighting = params.weighting;
  return model;
}

Prediction predict(const Frame& frame, const KnnModel& model) {
  const double m = magnitude(frame);
  if (m == 0.0 || is_rest(m, model.rest)) return {Gesture::rest, 0.0};
  const Gesture label = classify(normalize(frame), model.train, model.config);
  return {label, proportional_value(m, label, model.prop)};
}

std::vector<Prediction> predict_stream(std::span<const Frame> stream,
                                       const KnnModel& model) {
  const auto smoothed = smooth(stream, model.smooth_window);
  std::vector<Prediction> out(smoothed.size());
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    out[i] = predict(smoothed[i], model);
  }
  return out;
}

}  // namespace myo
