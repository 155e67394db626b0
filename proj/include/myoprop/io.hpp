#pragma once

#include <string>
#include <variant>
#include <vector>

#include "myoprop/evaluation.hpp"
#include "myoprop/model_selection.hpp"
#include "myoprop/proportional.hpp"
#include "myoprop/rrrff.hpp"
#include "myoprop/signal.hpp"
#include "myoprop/synth.hpp"

namespace myo {

inline constexpr const char* kRecordingHeader =
    "time_s,ch1,ch2,ch3,ch4,ch5,ch6,ch7,ch8,label,level,block";

// Shortest 17-significant-digit form that round-trips the exact double.
std::string format_double(double v);

// Write-temp-then-rename so readers never observe partial files.
void atomic_write(const std::string& path, const std::string& content);

void write_recording(const std::string& path, const LabeledDataset& data);

// Strict parse: the header must match kRecordingHeader byte for byte, every
// row needs 12 fields, a known label, a level in [0,1] and a non-negative
// integer block. Errors name the offending line.
LabeledDataset read_recording(const std::string& path);

// Session scripts: header `label,intensity,duration_s` or
// `label,intensity,duration_s,block`.
SessionScript read_script(const std::string& path);

// Synth configuration as JSON; absent fields keep their defaults.
SynthConfig read_synth_config(const std::string& path);

// One real per line (blank lines ignored); used by the anova subcommand.
std::vector<double> read_group(const std::string& path);

using AnyModel = std::variant<KnnModel, RrRffModel>;

void save_model(const std::string& path, const KnnModel& model);
void save_model(const std::string& path, const RrRffModel& model);
AnyModel load_model(const std::string& path);

std::string model_algorithm(const AnyModel& model);
std::vector<Prediction> predict_stream_any(std::span<const Frame> stream,
                                           const AnyModel& model);

// Report writers. Every report starts with a `# config: {...}` comment line
// embedding the complete effective configuration of the run.
void write_cv_report(const std::string& path, const CvReport& report,
                     const std::string& config_json);
void write_sr_report(const std::string& path, const SrReport& report,
                     const std::string& config_json);
void write_trial_records(const std::string& path,
                         std::span<const TrialRecord> records,
                         const std::string& config_json);
void write_predictions(const std::string& path, const LabeledDataset& data,
                       std::span<const Prediction> predictions,
                       const std::string& config_json);

}  // namespace myo
