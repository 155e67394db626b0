// myoprop: proportional kNN intent detection from 8-channel EMG recordings.
//
// Subcommands: synth, train, crossval, predict, eval, compare, anova.
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numeric error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "myoprop/errors.hpp"
#include "myoprop/evaluation.hpp"
#include "myoprop/io.hpp"
#include "myoprop/model_selection.hpp"
#include "myoprop/proportional.hpp"
#include "myoprop/rrrff.hpp"
#include "myoprop/stats.hpp"
#include "myoprop/synth.hpp"

namespace {

using nlohmann::json;

std::uint64_t default_seed() {
  // MYOPROP_SEED overrides the documented default; no OS entropy anywhere.
  if (const char* env = std::getenv("MYOPROP_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

json synth_config_json(const myo::SynthConfig& config) {
  json protos = json::array();
  const auto& list =
      config.prototypes.empty() ? myo::default_prototypes() : config.prototypes;
  for (const auto& p : list) {
    protos.push_back({{"label", myo::to_string(p.label)}, {"pattern", p.pattern}});
  }
  return {{"rest_level", config.rest_level},
          {"full_scale", config.full_scale},
          {"noise_rel", config.noise_rel},
          {"noise_abs", config.noise_abs},
          {"overlap", config.overlap},
          {"frame_rate_hz", config.frame_rate_hz},
          {"seed", config.seed},
          {"prototypes", protos}};
}

json train_params_json(const myo::TrainParams& params) {
  return {{"algo", "knn"},
          {"g", params.g},
          {"d", params.d},
          {"k", params.k.has_value() ? json(*params.k) : json("auto")},
          {"metric", params.metric.str()},
          {"weighting", myo::to_string(params.weighting)},
          {"smooth_window", params.smooth_window}};
}

json rrrff_params_json(const myo::RrRffParams& params) {
  return {{"algo", "rrrff"},
          {"rff_dim", params.dim},
          {"gamma", params.gamma.has_value() ? json(*params.gamma) : json("median")},
          {"lambda", params.lambda},
          {"rho", params.rho},
          {"seed", params.seed},
          {"smooth_window", params.smooth_window}};
}

json protocol_json(const myo::ProtocolParams& protocol, double rate) {
  return {{"tolerance", protocol.tolerance},
          {"dwell_s", protocol.dwell_s},
          {"timeout_s", protocol.timeout_s},
          {"order_seed", protocol.seed},
          {"frame_rate_hz", rate}};
}

// Compact summary of a loaded model's effective parameters, embedded in the
// reports that were produced with it.
json model_summary_json(const myo::AnyModel& model) {
  if (const auto* knn = std::get_if<myo::KnnModel>(&model)) {
    return {{"algorithm", "knn"},
            {"k", knn->config.k},
            {"metric", knn->config.metric.spec().str()},
            {"weighting", myo::to_string(knn->config.weighting)},
            {"g", knn->rest.g},
            {"t", knn->rest.t},
            {"d", knn->prop.d},
            {"m0", knn->prop.m0},
            {"smooth_window", knn->smooth_window}};
  }
  const auto& rr = std::get<myo::RrRffModel>(model);
  return {{"algorithm", "rrrff"},
          {"rff_dim", rr.map.dim},
          {"gamma", rr.map.gamma},
          {"lambda", rr.lambda},
          {"rho", rr.rho},
          {"seed", rr.map.seed},
          {"smooth_window", rr.smooth_window}};
}

struct AnovaLine {
  std::string name;
  myo::AnovaResult result;
};

std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string anova_text(const std::vector<AnovaLine>& lines, double alpha) {
  std::string out;
  for (const auto& line : lines) {
    out += line.name + ": F=" + myo::format_double(line.result.f_statistic) +
           " df=(" + std::to_string(line.result.df_between) + "," +
           std::to_string(line.result.df_within) +
           ") p=" + myo::format_double(line.result.p_value) +
           " significant_at_" + format_short(alpha) + "=" +
           (line.result.significant(alpha) ? "yes" : "no");
    if (line.result.degenerate) out += " [degenerate: zero within-group variance]";
    out += "\n";
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Proportional kNN myocontrol toolkit"};
  app.require_subcommand(1);

  // --- synth ---
  auto* synth = app.add_subcommand("synth", "Generate a synthetic EMG recording");
  std::string synth_script, synth_config_path, synth_out;
  std::uint64_t synth_seed = default_seed();
  int synth_reps = 1;
  synth->add_option("--script", synth_script, "Script CSV: label,intensity,duration_s[,block]")
      ->required();
  synth->add_option("--config", synth_config_path, "Generator config JSON");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--reps", synth_reps, "Script repetitions")->check(CLI::PositiveNumber);
  synth->add_option("--out", synth_out, "Output recording CSV")->required();

  // --- train ---
  auto* train_cmd = app.add_subcommand("train", "Fit a model from a recording");
  std::string train_data, train_out, train_algo = "knn";
  double train_g = 2.5, train_d = 5.0;
  std::string train_k = "1";
  std::string train_metric = "euclidean", train_weight = "inv-sq";
  int train_smooth = 5;
  int rff_dim = 300;
  std::string rff_gamma = "median";
  double rff_lambda = 1.0, rff_rho = 0.15;
  std::uint64_t rff_seed = 42;
  train_cmd->add_option("--data", train_data, "Training recording CSV")->required();
  train_cmd->add_option("--algo", train_algo, "knn|rrrff")
      ->check(CLI::IsMember({"knn", "rrrff"}));
  train_cmd->add_option("--g", train_g, "Rest threshold gain");
  train_cmd->add_option("--d", train_d, "Proportional offset divisor");
  train_cmd->add_option("--k", train_k, "Neighbor count, or 'auto' for block-wise CV");
  train_cmd->add_option("--metric", train_metric, "euclidean|minkowski:p|mahalanobis");
  train_cmd->add_option("--weight", train_weight, "uniform|inv|inv-sq");
  train_cmd->add_option("--smooth", train_smooth, "Causal smoothing window (frames)");
  train_cmd->add_option("--rff-dim", rff_dim, "Random feature count");
  train_cmd->add_option("--gamma", rff_gamma, "Kernel bandwidth, or 'median'");
  train_cmd->add_option("--lambda", rff_lambda, "Ridge regularizer");
  train_cmd->add_option("--rho", rff_rho, "Rest activation threshold");
  train_cmd->add_option("--rff-seed", rff_seed, "Feature map seed");
  train_cmd->add_option("--out", train_out, "Output model JSON")->required();

  // --- crossval ---
  auto* crossval = app.add_subcommand("crossval", "Block-wise CV over the parameter grid");
  std::string cv_data, cv_out;
  int cv_smooth = 5;
  crossval->add_option("--data", cv_data, "Recording CSV")->required();
  crossval->add_option("--smooth", cv_smooth, "Causal smoothing window (frames)");
  crossval->add_option("--out", cv_out, "Output report CSV")->required();

  // --- predict ---
  auto* predict_cmd = app.add_subcommand("predict", "Replay a recording through a model");
  std::string pred_model, pred_data, pred_out;
  predict_cmd->add_option("--model", pred_model, "Model JSON")->required();
  predict_cmd->add_option("--data", pred_data, "Recording CSV")->required();
  predict_cmd->add_option("--out", pred_out, "Output prediction CSV")->required();

  // --- eval ---
  auto* eval_cmd = app.add_subcommand("eval", "Run goal-directed trials against a model");
  std::string eval_model, eval_trials, eval_out, eval_summary;
  double eval_tolerance = 0.15, eval_dwell = 0.5, eval_timeout = 10.0, eval_rate = 50.0;
  eval_cmd->add_option("--model", eval_model, "Model JSON")->required();
  eval_cmd->add_option("--trials", eval_trials, "Trials recording CSV (one block per trial)")
      ->required();
  eval_cmd->add_option("--tolerance", eval_tolerance, "Proportional band half-width");
  eval_cmd->add_option("--dwell", eval_dwell, "Required hold (s)");
  eval_cmd->add_option("--timeout", eval_timeout, "Trial timeout (s)");
  eval_cmd->add_option("--rate", eval_rate, "Frame rate (Hz)");
  eval_cmd->add_option("--out", eval_out, "Per-trial outcome CSV")->required();
  eval_cmd->add_option("--summary", eval_summary, "Optional per-level SR CSV");

  // --- compare ---
  auto* compare_cmd = app.add_subcommand("compare", "kNN vs RR-RFF on the same trials");
  std::string cmp_train, cmp_trials, cmp_dir;
  std::uint64_t cmp_seed = default_seed();
  double cmp_tolerance = 0.15, cmp_dwell = 0.5, cmp_timeout = 10.0, cmp_rate = 50.0;
  double cmp_g = 2.5, cmp_d = 5.0;
  std::string cmp_k = "1";
  int cmp_smooth = 5, cmp_rff_dim = 300;
  double cmp_lambda = 1.0, cmp_rho = 0.15;
  std::uint64_t cmp_rff_seed = 42;
  compare_cmd->add_option("--train", cmp_train, "Training recording CSV")->required();
  compare_cmd->add_option("--trials", cmp_trials, "Trials recording CSV")->required();
  compare_cmd->add_option("--seed", cmp_seed, "Trial order seed");
  compare_cmd->add_option("--tolerance", cmp_tolerance, "Proportional band half-width");
  compare_cmd->add_option("--dwell", cmp_dwell, "Required hold (s)");
  compare_cmd->add_option("--timeout", cmp_timeout, "Trial timeout (s)");
  compare_cmd->add_option("--rate", cmp_rate, "Frame rate (Hz)");
  compare_cmd->add_option("--g", cmp_g, "Rest threshold gain");
  compare_cmd->add_option("--d", cmp_d, "Proportional offset divisor");
  compare_cmd->add_option("--k", cmp_k, "Neighbor count, or 'auto'");
  compare_cmd->add_option("--smooth", cmp_smooth, "Causal smoothing window (frames)");
  compare_cmd->add_option("--rff-dim", cmp_rff_dim, "Random feature count");
  compare_cmd->add_option("--lambda", cmp_lambda, "Ridge regularizer");
  compare_cmd->add_option("--rho", cmp_rho, "Rest activation threshold");
  compare_cmd->add_option("--rff-seed", cmp_rff_seed, "Feature map seed");
  compare_cmd->add_option("--out-dir", cmp_dir, "Report directory")->required();

  // --- anova ---
  auto* anova_cmd = app.add_subcommand("anova", "One-way ANOVA over group files");
  std::vector<std::string> anova_groups;
  double anova_alpha = 0.05;
  anova_cmd->add_option("--groups", anova_groups, "Comma-separated group files")
      ->required()
      ->delimiter(',');
  anova_cmd->add_option("--alpha", anova_alpha, "Significance level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto parse_k = [](const std::string& text) -> std::optional<int> {
    if (text == "auto") return std::nullopt;
    try {
      return std::stoi(text);
    } catch (const std::exception&) {
      throw myo::config_error("--k must be a positive integer or 'auto'");
    }
  };
  auto parse_gamma = [](const std::string& text) -> std::optional<double> {
    if (text == "median") return std::nullopt;
    try {
      return std::stod(text);
    } catch (const std::exception&) {
      throw myo::config_error("--gamma must be a positive real or 'median'");
    }
  };

  if (synth->parsed()) {
    myo::SynthConfig config;
    if (!synth_config_path.empty()) config = myo::read_synth_config(synth_config_path);
    config.seed = synth_seed;
    myo::SessionScript script = myo::read_script(synth_script);
    script.repetitions = synth_reps;
    const auto data = myo::generate_session(script, config);
    myo::write_recording(synth_out, data);
    std::cout << "wrote " << data.size() << " frames to " << synth_out << "\n";
    std::cout << "config: " << synth_config_json(config).dump() << "\n";
    return 0;
  }

  if (train_cmd->parsed()) {
    const auto data = myo::read_recording(train_data);
    if (train_algo == "knn") {
      myo::TrainParams params;
      params.g = train_g;
      params.d = train_d;
      params.k = parse_k(train_k);
      params.metric = myo::MetricSpec::parse(train_metric);
      params.weighting = myo::weight_scheme_from_string(train_weight);
      params.smooth_window = train_smooth;
      const auto model = myo::train(data, params);
      for (myo::Gesture g : model.prop.degenerate_classes()) {
        std::cerr << "warning: class " << myo::to_string(g)
                  << " has Mc <= m0; proportional output is constant 1\n";
      }
      myo::save_model(train_out, model);
      std::cout << "trained knn model (k=" << model.config.k << ", t="
                << myo::format_double(model.rest.t) << ") -> " << train_out << "\n";
    } else {
      myo::RrRffParams params;
      params.dim = rff_dim;
      params.gamma = parse_gamma(rff_gamma);
      params.lambda = rff_lambda;
      params.rho = rff_rho;
      params.seed = rff_seed;
      params.smooth_window = train_smooth;
      const auto model = myo::fit_rrrff(data, params);
      myo::save_model(train_out, model);
      std::cout << "trained rrrff model (D=" << model.map.dim << ", gamma="
                << myo::format_double(model.map.gamma) << ") -> " << train_out
                << "\n";
    }
    return 0;
  }

  if (crossval->parsed()) {
    const auto raw = myo::read_recording(cv_data);
    const auto data = myo::smooth_dataset(raw, cv_smooth);
    const auto ks = myo::default_k_grid(data);
    const std::vector<myo::MetricSpec> metrics = {
        myo::MetricSpec::parse("minkowski:1"), myo::MetricSpec::parse("euclidean"),
        myo::MetricSpec::parse("minkowski:3"), myo::MetricSpec::parse("mahalanobis")};
    const std::vector<myo::WeightScheme> weightings = {
        myo::WeightScheme::uniform, myo::WeightScheme::inverse,
        myo::WeightScheme::inverse_squared};
    const auto report = myo::grid_search(data, ks, metrics, weightings);
    json metric_names = json::array();
    for (const auto& m : metrics) metric_names.push_back(m.str());
    json weighting_names = json::array();
    for (const auto w : weightings) weighting_names.push_back(myo::to_string(w));
    const json config = {{"data", cv_data},
                         {"smooth_window", cv_smooth},
                         {"k_grid", ks},
                         {"metrics", metric_names},
                         {"weightings", weighting_names}};
    myo::write_cv_report(cv_out, report, config.dump());
    std::cout << "best: k=" << report.chosen.k << " metric="
              << report.chosen.metric.str() << " weighting="
              << myo::to_string(report.chosen.weighting) << " accuracy="
              << myo::format_double(report.chosen.accuracy) << "\n";
    return 0;
  }

  if (predict_cmd->parsed()) {
    const auto model = myo::load_model(pred_model);
    const auto data = myo::read_recording(pred_data);
    // Streams are smoothed per block with the model's training window.
    std::vector<myo::Prediction> predictions;
    predictions.reserve(data.size());
    std::size_t start = 0;
    for (std::size_t i = 1; i <= data.size(); ++i) {
      if (i == data.size() || data.blocks[i] != data.blocks[start]) {
        const std::span<const myo::Frame> stream(data.frames.data() + start,
                                                 i - start);
        const auto part = myo::predict_stream_any(stream, model);
        predictions.insert(predictions.end(), part.begin(), part.end());
        start = i;
      }
    }
    const json config = {{"model", pred_model},
                         {"data", pred_data},
                         {"model_params", model_summary_json(model)}};
    myo::write_predictions(pred_out, data, predictions, config.dump());
    std::cout << "wrote " << predictions.size() << " predictions to " << pred_out
              << "\n";
    return 0;
  }

  if (eval_cmd->parsed()) {
    const auto model = myo::load_model(eval_model);
    const auto trials_data = myo::read_recording(eval_trials);
    const auto trials = myo::trials_from_dataset(trials_data, eval_rate);
    const myo::StreamPredictor predictor = [&](std::span<const myo::Frame> s) {
      return myo::predict_stream_any(s, model);
    };
    std::vector<myo::TrialOutcome> outcomes;
    std::vector<myo::TrialRecord> records;
    const std::string algo = myo::model_algorithm(model);
    for (std::size_t i = 0; i < trials.size(); ++i) {
      outcomes.push_back(myo::run_trial(predictor, trials[i], eval_tolerance,
                                        eval_dwell, eval_timeout));
      records.push_back({algo, trials[i].level, static_cast<int>(i),
                         outcomes.back().success,
                         outcomes.back().time_to_success_s});
    }
    const auto report = myo::make_sr_report(algo, trials, outcomes);
    const json config = {{"model", eval_model},   {"trials", eval_trials},
                         {"tolerance", eval_tolerance}, {"dwell_s", eval_dwell},
                         {"timeout_s", eval_timeout},   {"frame_rate_hz", eval_rate},
                         {"model_params", model_summary_json(model)}};
    myo::write_trial_records(eval_out, records, config.dump());
    if (!eval_summary.empty()) {
      myo::write_sr_report(eval_summary, report, config.dump());
    }
    std::cout << "overall SR: " << myo::format_double(report.overall) << " ("
              << report.total_successes << "/" << report.total_trials << ")\n";
    for (const auto& [level, sr] : report.per_level) {
      std::cout << "  level " << myo::format_double(level) << ": "
                << myo::format_double(sr) << "\n";
    }
    return 0;
  }

  if (compare_cmd->parsed()) {
    const auto train_set = myo::read_recording(cmp_train);
    const auto trials_data = myo::read_recording(cmp_trials);
    const auto trials = myo::trials_from_dataset(trials_data, cmp_rate);

    myo::TrainParams knn_params;
    knn_params.g = cmp_g;
    knn_params.d = cmp_d;
    knn_params.k = parse_k(cmp_k);
    knn_params.smooth_window = cmp_smooth;
    myo::RrRffParams rrrff_params;
    rrrff_params.dim = cmp_rff_dim;
    rrrff_params.lambda = cmp_lambda;
    rrrff_params.rho = cmp_rho;
    rrrff_params.seed = cmp_rff_seed;
    rrrff_params.smooth_window = cmp_smooth;
    myo::ProtocolParams protocol{cmp_tolerance, cmp_dwell, cmp_timeout, cmp_seed};

    const auto result = myo::compare(train_set, trials, knn_params, rrrff_params,
                                     protocol);

    std::filesystem::create_directories(cmp_dir);
    const json config = {{"train", cmp_train},
                         {"trials", cmp_trials},
                         {"knn", train_params_json(knn_params)},
                         {"rrrff", rrrff_params_json(rrrff_params)},
                         {"protocol", protocol_json(protocol, cmp_rate)}};
    const std::string config_str = config.dump();
    const auto path = [&](const char* name) {
      return (std::filesystem::path(cmp_dir) / name).string();
    };
    myo::write_sr_report(path("sr_knn.csv"), result.knn, config_str);
    myo::write_sr_report(path("sr_rrrff.csv"), result.rrrff, config_str);
    myo::write_trial_records(path("trials.csv"), result.records, config_str);
    myo::atomic_write(path("config.json"), config.dump(2) + "\n");

    // Per-trial grouping (success indicators) and the per-level SR aggregate.
    std::vector<std::vector<double>> by_trial(2), by_level(2);
    for (const auto& r : result.records) {
      by_trial[r.algorithm == "knn" ? 0 : 1].push_back(r.success ? 1.0 : 0.0);
    }
    for (const auto& [level, sr] : result.knn.per_level) by_level[0].push_back(sr);
    for (const auto& [level, sr] : result.rrrff.per_level) by_level[1].push_back(sr);
    std::vector<AnovaLine> lines;
    lines.push_back({"per-trial", myo::anova_oneway(by_trial)});
    if (by_level[0].size() >= 2 && by_level[1].size() >= 2) {
      lines.push_back({"per-level-sr", myo::anova_oneway(by_level)});
    }
    myo::atomic_write(path("anova.txt"),
                      "# config: " + config_str + "\n" + anova_text(lines, 0.05));

    std::cout << "knn overall SR:   " << myo::format_double(result.knn.overall)
              << "\nrrrff overall SR: " << myo::format_double(result.rrrff.overall)
              << "\nreports in " << cmp_dir << "\n";
    return 0;
  }

  if (anova_cmd->parsed()) {
    std::vector<std::vector<double>> groups;
    for (const auto& path : anova_groups) groups.push_back(myo::read_group(path));
    const auto result = myo::anova_oneway(groups);
    std::cout << "F=" << myo::format_double(result.f_statistic) << " df=("
              << result.df_between << "," << result.df_within << ") p="
              << myo::format_double(result.p_value) << "\n";
    std::cout << "significant at alpha=" << format_short(anova_alpha) << ": "
              << (result.significant(anova_alpha) ? "yes" : "no") << "\n";
    if (result.degenerate) {
      std::cout << "note: zero within-group variance (degenerate case)\n";
    }
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const myo::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const myo::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const myo::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
