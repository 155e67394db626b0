#include "myoprop/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "myoprop/errors.hpp"
#include "myoprop/rng.hpp"

namespace myo {

TrialOutcome run_trial(const StreamPredictor& predictor, const Trial& trial,
                       double tolerance, double dwell_s, double timeout_s) {
  if (!(tolerance > 0.0)) throw config_error("tolerance must be positive");
  if (!(dwell_s > 0.0)) throw config_error("dwell must be positive");
  if (!(timeout_s >= dwell_s)) throw config_error("timeout must cover the dwell");
  if (trial.stream.empty()) throw data_error("trial has an empty stream");
  if (trial.target == Gesture::rest) throw config_error("trial target cannot be rest");
  if (!(trial.frame_rate_hz > 0.0)) throw config_error("frame rate must be positive");

  TrialOutcome outcome;
  outcome.trace = predictor(trial.stream);
  if (outcome.trace.size() != trial.stream.size()) {
    throw config_error("predictor returned a trace of the wrong length");
  }

  const auto dwell_frames = static_cast<std::size_t>(
      std::ceil(dwell_s * trial.frame_rate_hz));
  std::size_t run = 0;
  for (std::size_t i = 0; i < outcome.trace.size(); ++i) {
    const auto& p = outcome.trace[i];
    const bool in_band = p.label == trial.target &&
                         std::fabs(p.proportion - trial.level) <= tolerance;
    run = in_band ? run + 1 : 0;
    if (run >= dwell_frames) {
      const double end_time =
          static_cast<double>(i + 1) / trial.frame_rate_hz;
      if (end_time <= timeout_s) {
        outcome.success = true;
        outcome.time_to_success_s = end_time;
      }
      break;  // later frames cannot produce an earlier run
    }
  }
  return outcome;
}

double success_rate(std::span<const TrialOutcome> outcomes) {
  if (outcomes.empty()) throw data_error("no trial outcomes to aggregate");
  std::size_t wins = 0;
  for (const auto& o : outcomes) wins += o.success ? 1 : 0;
  return static_cast<double>(wins) / static_cast<double>(outcomes.size());
}

SrReport make_sr_report(const std::string& algorithm,
                        std::span<const Trial> trials,
                        std::span<const TrialOutcome> outcomes) {
  if (trials.size() != outcomes.size()) {
    throw data_error("trial/outcome count mismatch");
  }
  SrReport report;
  report.algorithm = algorithm;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    report.trials_per_level[trials[i].level] += 1;
    report.successes_per_level[trials[i].level] += outcomes[i].success ? 1 : 0;
    report.total_trials += 1;
    report.total_successes += outcomes[i].success ? 1 : 0;
  }
  for (const auto& [level, n] : report.trials_per_level) {
    report.per_level[level] =
        static_cast<double>(report.successes_per_level[level]) / n;
  }
  report.overall = report.total_trials == 0
                       ? 0.0
                       : static_cast<double>(report.total_successes) /
                             report.total_trials;
  return report;
}

std::vector<Trial> trials_from_dataset(const LabeledDataset& data,
                                       double frame_rate_hz) {
  data.validate();
  if (data.blocks.empty()) {
    throw data_error("trial files need block ids (one block per trial)");
  }
  std::vector<Trial> trials;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= data.size(); ++i) {
    if (i == data.size() || data.blocks[i] != data.blocks[start]) {
      Trial trial;
      trial.target = data.labels[start];
      trial.level = data.levels[start];
      trial.frame_rate_hz = frame_rate_hz;
      if (trial.target == Gesture::rest) {
        throw data_error("trial block " + std::to_string(data.blocks[start]) +
                         " is labeled rest");
      }
      for (std::size_t f = start; f < i; ++f) {
        if (data.labels[f] != trial.target || data.levels[f] != trial.level) {
          throw data_error("trial block " + std::to_string(data.blocks[start]) +
                           " mixes targets or levels");
        }
        trial.stream.push_back(data.frames[f]);
      }
      trials.push_back(std::move(trial));
      start = i;
    }
  }
  return trials;
}

CompareResult compare(const LabeledDataset& train_data,
                      std::span<const Trial> trials,
                      const TrainParams& knn_params,
                      const RrRffParams& rrrff_params,
                      const ProtocolParams& protocol) {
  const KnnModel knn_model = train(train_data, knn_params);
  const RrRffModel rrrff_model = fit_rrrff(train_data, rrrff_params);

  const StreamPredictor knn_predictor = [&](std::span<const Frame> stream) {
    return predict_stream(stream, knn_model);
  };
  const StreamPredictor rrrff_predictor = [&](std::span<const Frame> stream) {
    return predict_stream_rrrff(stream, rrrff_model);
  };

  // Execution order is shuffled by the recorded seed; results are keyed by
  // trial id so reports stay deterministic.
  std::vector<std::size_t> order(trials.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(protocol.seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }

  std::vector<TrialOutcome> knn_outcomes(trials.size());
  std::vector<TrialOutcome> rrrff_outcomes(trials.size());
  for (std::size_t idx : order) {
    knn_outcomes[idx] = run_trial(knn_predictor, trials[idx],
                                  protocol.tolerance, protocol.dwell_s,
                                  protocol.timeout_s);
    rrrff_outcomes[idx] = run_trial(rrrff_predictor, trials[idx],
                                    protocol.tolerance, protocol.dwell_s,
                                    protocol.timeout_s);
  }

  CompareResult result;
  result.knn = make_sr_report("knn", trials, knn_outcomes);
  result.rrrff = make_sr_report("rrrff", trials, rrrff_outcomes);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    result.records.push_back({"knn", trials[i].level, static_cast<int>(i),
                              knn_outcomes[i].success,
                              knn_outcomes[i].time_to_success_s});
  }
  for (std::size_t i = 0; i < trials.size(); ++i) {
    result.records.push_back({"rrrff", trials[i].level, static_cast<int>(i),
                              rrrff_outcomes[i].success,
                              rrrff_outcomes[i].time_to_success_s});
  }
  return result;
}

}  // namespace myo
