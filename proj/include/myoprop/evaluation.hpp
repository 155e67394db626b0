#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "myoprop/proportional.hpp"
#include "myoprop/rrrff.hpp"
#include "myoprop/signal.hpp"

namespace myo {

// One goal-directed attempt: hold `target` at exertion `level`.
struct Trial {
  Gesture target = Gesture::power;  // never rest
  double level = 1.0;               // in (0,1]
  std::vector<Frame> stream;
  double frame_rate_hz = 50.0;
};

struct TrialOutcome {
  bool success = false;
  std::optional<double> time_to_success_s;  // set iff success
  std::vector<Prediction> trace;            // one entry per stream frame
};

struct SrReport {
  std::string algorithm;
  std::map<double, double> per_level;  // level -> success rate
  std::map<double, int> trials_per_level;
  std::map<double, int> successes_per_level;
  double overall = 0.0;
  int total_trials = 0;
  int total_successes = 0;
};

// Maps a whole trial stream to one prediction per frame (the model applies
// its own smoothing inside).
using StreamPredictor =
    std::function<std::vector<Prediction>(std::span<const Frame>)>;

struct ProtocolParams {
  double tolerance = 0.15;  // |proportion - level| band
  double dwell_s = 0.5;     // required consecutive in-band hold
  double timeout_s = 10.0;  // runs must finish by this time
  std::uint64_t seed = 1;   // trial execution order
};

// Success iff some run of ceil(dwell_s * rate) consecutive frames with
// label == target and |proportion - level| <= tolerance ends at or before
// timeout_s. time_to_success is the end time of the first such run.
TrialOutcome run_trial(const StreamPredictor& predictor, const Trial& trial,
                       double tolerance, double dwell_s, double timeout_s);

double success_rate(std::span<const TrialOutcome> outcomes);

SrReport make_sr_report(const std::string& algorithm,
                        std::span<const Trial> trials,
                        std::span<const TrialOutcome> outcomes);

struct TrialRecord {
  std::string algorithm;
  double level;
  int trial_id;
  bool success;
  std::optional<double> time_to_success_s;
};

struct CompareResult {
  SrReport knn;
  SrReport rrrff;
  std::vector<TrialRecord> records;  // both algorithms, trial-id order
};

// Trains both pipelines on the same data, replays the identical trials
// through each (execution order shuffled by protocol.seed, aggregation by
// trial id) and reports per-level success rates side by side.
CompareResult compare(const LabeledDataset& train_data,
                      std::span<const Trial> trials,
                      const TrainParams& knn_params,
                      const RrRffParams& rrrff_params,
                      const ProtocolParams& protocol);

// Splits a block-structured recording into trials: each block is one trial
// whose target/level are the block's constant label and level.
std::vector<Trial> trials_from_dataset(const LabeledDataset& data,
                                       double frame_rate_hz);

}  // namespace myo
