#include "myoprop/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "myoprop/errors.hpp"

namespace myo {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw data_error(where + ": bad number '" + text + "'");
  }
  return v;
}

long parse_long(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw data_error(where + ": bad integer '" + text + "'");
  }
  return v;
}

std::string location(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

json metric_to_json(const DistanceMetric& metric) {
  json j;
  switch (metric.spec().kind) {
    case MetricKind::euclidean:
      j["kind"] = "euclidean";
      break;
    case MetricKind::minkowski:
      j["kind"] = "minkowski";
      j["p"] = metric.spec().p;
      break;
    case MetricKind::mahalanobis: {
      j["kind"] = "mahalanobis";
      std::vector<double> flat;
      flat.reserve(kChannels * kChannels);
      for (const auto& row : *metric.covariance())
        for (double v : row) flat.push_back(v);
      j["covariance"] = flat;
      break;
    }
  }
  return j;
}

DistanceMetric metric_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean") return DistanceMetric::euclidean();
  if (kind == "minkowski") {
    return DistanceMetric::minkowski(j.at("p").get<double>());
  }
  if (kind == "mahalanobis") {
    const auto flat = j.at("covariance").get<std::vector<double>>();
    if (flat.size() != kChannels * kChannels) {
      throw data_error("mahalanobis covariance must have 64 entries");
    }
    Mat8 cov;
    for (int i = 0; i < kChannels; ++i)
      for (int c = 0; c < kChannels; ++c) cov[i][c] = flat[i * kChannels + c];
    return DistanceMetric::mahalanobis(cov);
  }
  throw data_error("unknown metric kind in model file: " + kind);
}

json knn_to_json(const KnnModel& model) {
  json j;
  j["schema_version"] = 1;
  j["algorithm"] = "knn";
  j["smooth_window"] = model.smooth_window;
  j["config"] = {{"k", model.config.k},
                 {"metric", metric_to_json(model.config.metric)},
                 {"weighting", to_string(model.config.weighting)}};
  j["rest"] = {{"t0", model.rest.t0}, {"g", model.rest.g}, {"t", model.rest.t}};
  json means = json::object();
  for (const auto& [label, mc] : model.prop.class_means) {
    means[to_string(label)] = mc;
  }
  j["proportional"] = {{"d", model.prop.d}, {"m0", model.prop.m0},
                       {"class_means", means}};
  json points = json::array();
  json labels = json::array();
  for (std::size_t i = 0; i < model.train.size(); ++i) {
    points.push_back(model.train.points[i]);
    labels.push_back(to_string(model.train.labels[i]));
  }
  j["training_set"] = {{"points", points}, {"labels", labels}};
  if (model.cv.has_value()) {
    json rows = json::array();
    for (const auto& row : model.cv->rows) {
      rows.push_back({{"k", row.k},
                      {"metric", row.metric.str()},
                      {"weighting", to_string(row.weighting)},
                      {"accuracy", row.accuracy}});
    }
    j["cv"] = {{"rows", rows},
               {"chosen",
                {{"k", model.cv->chosen.k},
                 {"metric", model.cv->chosen.metric.str()},
                 {"weighting", to_string(model.cv->chosen.weighting)},
                 {"accuracy", model.cv->chosen.accuracy}}}};
  }
  return j;
}

KnnModel knn_from_json(const json& j) {
  KnnModel model;
  model.smooth_window = j.at("smooth_window").get<int>();
  model.config.k = j.at("config").at("k").get<int>();
  model.config.metric = metric_from_json(j.at("config").at("metric"));
  model.config.weighting =
      weight_scheme_from_string(j.at("config").at("weighting").get<std::string>());
  model.rest.t0 = j.at("rest").at("t0").get<double>();
  model.rest.g = j.at("rest").at("g").get<double>();
  model.rest.t = j.at("rest").at("t").get<double>();
  model.prop.d = j.at("proportional").at("d").get<double>();
  model.prop.m0 = j.at("proportional").at("m0").get<double>();
  for (const auto& [key, value] :
       j.at("proportional").at("class_means").items()) {
    model.prop.class_means[gesture_from_string(key)] = value.get<double>();
  }
  for (const auto& p : j.at("training_set").at("points")) {
    model.train.points.push_back(p.get<Vec8>());
  }
  for (const auto& l : j.at("training_set").at("labels")) {
    model.train.labels.push_back(gesture_from_string(l.get<std::string>()));
  }
  model.train.validate();
  if (j.contains("cv")) {
    CvReport report;
    for (const auto& row : j.at("cv").at("rows")) {
      report.rows.push_back(
          {row.at("k").get<int>(),
           MetricSpec::parse(row.at("metric").get<std::string>()),
           weight_scheme_from_string(row.at("weighting").get<std::string>()),
           row.at("accuracy").get<double>()});
    }
    const auto& chosen = j.at("cv").at("chosen");
    report.chosen = {chosen.at("k").get<int>(),
                     MetricSpec::parse(chosen.at("metric").get<std::string>()),
                     weight_scheme_from_string(
                         chosen.at("weighting").get<std::string>()),
                     chosen.at("accuracy").get<double>()};
    model.cv = std::move(report);
  }
  return model;
}

json rrrff_to_json(const RrRffModel& model) {
  json j;
  j["schema_version"] = 1;
  j["algorithm"] = "rrrff";
  j["smooth_window"] = model.smooth_window;
  json omega = json::array();
  for (const auto& row : model.map.omega) omega.push_back(row);
  j["map"] = {{"dim", model.map.dim},
              {"gamma", model.map.gamma},
              {"seed", model.map.seed},
              {"omega", omega},
              {"beta", model.map.beta}};
  j["lambda"] = model.lambda;
  j["rho"] = model.rho;
  j["gamma_from_median"] = model.gamma_from_median;
  json order = json::array();
  for (Gesture g : model.gesture_order) order.push_back(to_string(g));
  j["gesture_order"] = order;
  j["weights"] = model.weights;
  j["normal_eq_residual"] = model.normal_eq_residual;
  return j;
}

RrRffModel rrrff_from_json(const json& j) {
  RrRffModel model;
  model.smooth_window = j.at("smooth_window").get<int>();
  const auto& map = j.at("map");
  model.map.dim = map.at("dim").get<int>();
  model.map.gamma = map.at("gamma").get<double>();
  model.map.seed = map.at("seed").get<std::uint64_t>();
  for (const auto& row : map.at("omega")) model.map.omega.push_back(row.get<Vec8>());
  model.map.beta = map.at("beta").get<std::vector<double>>();
  if (static_cast<int>(model.map.omega.size()) != model.map.dim ||
      static_cast<int>(model.map.beta.size()) != model.map.dim) {
    throw data_error("feature map dimensions are inconsistent");
  }
  model.lambda = j.at("lambda").get<double>();
  model.rho = j.at("rho").get<double>();
  model.gamma_from_median = j.at("gamma_from_median").get<bool>();
  for (const auto& g : j.at("gesture_order")) {
    model.gesture_order.push_back(gesture_from_string(g.get<std::string>()));
  }
  model.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(model.weights.size()) != model.map.dim) {
    throw data_error("weight matrix row count does not match the feature dim");
  }
  for (const auto& row : model.weights) {
    if (row.size() != model.gesture_order.size()) {
      throw data_error("weight matrix column count does not match the gestures");
    }
  }
  model.normal_eq_residual = j.at("normal_eq_residual").get<double>();
  return model;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out.flush()) throw data_error("failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw data_error("failed to move " + tmp + " to " + path);
}

void write_recording(const std::string& path, const LabeledDataset& data) {
  data.validate();
  std::string out = std::string(kRecordingHeader) + "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out += format_double(data.frames[i].time_s);
    for (int c = 0; c < kChannels; ++c) {
      out += ',';
      out += format_double(data.frames[i].channels[c]);
    }
    out += ',';
    out += to_string(data.labels[i]);
    out += ',';
    out += format_double(data.levels[i]);
    out += ',';
    out += std::to_string(data.blocks.empty() ? 0 : data.blocks[i]);
    out += '\n';
  }
  atomic_write(path, out);
}

LabeledDataset read_recording(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error(path + " is empty");
  if (line != kRecordingHeader) {
    throw data_error(location(path, 1) + ": header must be exactly '" +
                     kRecordingHeader + "'");
  }
  LabeledDataset data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = location(path, line_no);
    if (fields.size() != 12) {
      throw data_error(where + ": expected 12 fields, got " +
                       std::to_string(fields.size()));
    }
    Frame frame;
    frame.time_s = parse_double(fields[0], where);
    for (int c = 0; c < kChannels; ++c) {
      const double v = parse_double(fields[1 + c], where);
      if (!std::isfinite(v) || v < 0.0) {
        throw data_error(where + ": channel " + std::to_string(c + 1) +
                         " must be a finite non-negative value");
      }
      frame.channels[c] = v;
    }
    Gesture label;
    try {
      label = gesture_from_string(fields[9]);
    } catch (const data_error&) {
      throw data_error(where + ": unknown gesture label '" + fields[9] + "'");
    }
    const double level = parse_double(fields[10], where);
    if (level < 0.0 || level > 1.0) {
      throw data_error(where + ": level must lie in [0,1]");
    }
    const long block = parse_long(fields[11], where);
    if (block < 0) throw data_error(where + ": block id must be >= 0");
    data.frames.push_back(frame);
    data.labels.push_back(label);
    data.levels.push_back(level);
    data.blocks.push_back(static_cast<int>(block));
  }
  if (data.frames.empty()) throw data_error(path + " contains no data rows");
  try {
    data.validate();
  } catch (const data_error& e) {
    throw data_error(path + ": " + e.what());
  }
  return data;
}

SessionScript read_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error(path + " is empty");
  bool with_block = false;
  if (line == "label,intensity,duration_s,block") {
    with_block = true;
  } else if (line != "label,intensity,duration_s") {
    throw data_error(location(path, 1) +
                     ": header must be 'label,intensity,duration_s[,block]'");
  }
  SessionScript script;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = location(path, line_no);
    const std::size_t expected = with_block ? 4 : 3;
    if (fields.size() != expected) {
      throw data_error(where + ": expected " + std::to_string(expected) +
                       " fields, got " + std::to_string(fields.size()));
    }
    ScriptStep step;
    try {
      step.label = gesture_from_string(fields[0]);
    } catch (const data_error&) {
      throw data_error(where + ": unknown gesture label '" + fields[0] + "'");
    }
    step.intensity = parse_double(fields[1], where);
    if (step.intensity < 0.0 || step.intensity > 1.0) {
      throw data_error(where + ": intensity must lie in [0,1]");
    }
    step.duration_s = parse_double(fields[2], where);
    if (!(step.duration_s > 0.0)) {
      throw data_error(where + ": duration must be positive");
    }
    if (with_block) {
      const long block = parse_long(fields[3], where);
      if (block < 0) throw data_error(where + ": block id must be >= 0");
      step.block = static_cast<int>(block);
    }
    script.steps.push_back(step);
  }
  if (script.steps.empty()) throw data_error(path + " contains no steps");
  return script;
}

SynthConfig read_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw data_error(path + ": " + e.what());
  }
  SynthConfig config;
  config.rest_level = j.value("rest_level", config.rest_level);
  config.full_scale = j.value("full_scale", config.full_scale);
  config.noise_rel = j.value("noise_rel", config.noise_rel);
  config.noise_abs = j.value("noise_abs", config.noise_abs);
  config.overlap = j.value("overlap", config.overlap);
  config.frame_rate_hz = j.value("frame_rate_hz", config.frame_rate_hz);
  config.seed = j.value("seed", config.seed);
  if (j.contains("prototypes")) {
    config.prototypes.clear();
    for (const auto& p : j.at("prototypes")) {
      GesturePrototype proto;
      proto.label = gesture_from_string(p.at("label").get<std::string>());
      proto.pattern = p.at("pattern").get<Vec8>();
      config.prototypes.push_back(proto);
    }
  }
  return config;
}

std::vector<double> read_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    values.push_back(parse_double(line, location(path, line_no)));
  }
  if (values.empty()) throw data_error(path + " contains no values");
  return values;
}

void save_model(const std::string& path, const KnnModel& model) {
  atomic_write(path, knn_to_json(model).dump(2) + "\n");
}

void save_model(const std::string& path, const RrRffModel& model) {
  atomic_write(path, rrrff_to_json(model).dump(2) + "\n");
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw data_error(path + ": " + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != 1) {
      throw data_error(path + ": unsupported schema version");
    }
    const std::string algorithm = j.at("algorithm").get<std::string>();
    if (algorithm == "knn") return knn_from_json(j);
    if (algorithm == "rrrff") return rrrff_from_json(j);
    throw data_error(path + ": unknown algorithm '" + algorithm + "'");
  } catch (const json::exception& e) {
    throw data_error(path + ": " + e.what());
  }
}

std::string model_algorithm(const AnyModel& model) {
  return std::holds_alternative<KnnModel>(model) ? "knn" : "rrrff";
}

std::vector<Prediction> predict_stream_any(std::span<const Frame> stream,
                                           const AnyModel& model) {
  if (const auto* knn = std::get_if<KnnModel>(&model)) {
    return predict_stream(stream, *knn);
  }
  return predict_stream_rrrff(stream, std::get<RrRffModel>(model));
}

void write_cv_report(const std::string& path, const CvReport& report,
                     const std::string& config_json) {
  std::string out = "# config: " + config_json + "\n";
  out += "# chosen: k=" + std::to_string(report.chosen.k) +
         ",metric=" + report.chosen.metric.str() +
         ",weighting=" + to_string(report.chosen.weighting) +
         ",accuracy=" + format_double(report.chosen.accuracy) + "\n";
  out += "k,metric,weighting,accuracy\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.k) + "," + row.metric.str() + "," +
           to_string(row.weighting) + "," + format_double(row.accuracy) + "\n";
  }
  atomic_write(path, out);
}

void write_sr_report(const std::string& path, const SrReport& report,
                     const std::string& config_json) {
  std::string out = "# config: " + config_json + "\n";
  out += "# overall: " + format_double(report.overall) + " (" +
         std::to_string(report.total_successes) + "/" +
         std::to_string(report.total_trials) + ")\n";
  out += "algorithm,level,n_trials,n_successes,success_rate\n";
  for (const auto& [level, sr] : report.per_level) {
    out += report.algorithm + "," + format_double(level) + "," +
           std::to_string(report.trials_per_level.at(level)) + "," +
           std::to_string(report.successes_per_level.at(level)) + "," +
           format_double(sr) + "\n";
  }
  atomic_write(path, out);
}

void write_trial_records(const std::string& path,
                         std::span<const TrialRecord> records,
                         const std::string& config_json) {
  std::string out = "# config: " + config_json + "\n";
  out += "algorithm,level,trial_id,success,time_to_success_s\n";
  for (const auto& r : records) {
    out += r.algorithm + "," + format_double(r.level) + "," +
           std::to_string(r.trial_id) + "," + (r.success ? "1" : "0") + ",";
    if (r.time_to_success_s.has_value()) {
      out += format_double(*r.time_to_success_s);
    }
    out += '\n';
  }
  atomic_write(path, out);
}

void write_predictions(const std::string& path, const LabeledDataset& data,
                       std::span<const Prediction> predictions,
                       const std::string& config_json) {
  if (data.size() != predictions.size()) {
    throw data_error("prediction count does not match the frame count");
  }
  std::string out = "# config: " + config_json + "\n";
  out += "time_s,label,proportion\n";
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    out += format_double(data.frames[i].time_s) + "," +
           to_string(predictions[i].label) + "," +
           format_double(predictions[i].proportion) + "\n";
  }
  atomic_write(path, out);
}

}  // namespace myo
