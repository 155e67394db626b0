#include "myoprop/synth.hpp"

#include <algorithm>
#include <cmath>

#include "myoprop/errors.hpp"
#include "myoprop/rng.hpp"

namespace myo {

std::vector<GesturePrototype> default_prototypes() {
  // Unit-mean channel patterns with deliberately shared mass between
  // neighbouring gestures (power/flex, ext/pro, sup/pro).
  return {
      {Gesture::power, {2.2, 1.8, 1.2, 0.6, 0.3, 0.3, 0.6, 1.0}},
      {Gesture::point, {0.4, 1.0, 2.0, 2.2, 1.0, 0.4, 0.5, 0.5}},
      {Gesture::flex,  {1.6, 2.4, 0.8, 0.4, 0.4, 0.8, 1.2, 0.4}},
      {Gesture::ext,   {0.3, 0.4, 0.9, 1.5, 2.3, 1.7, 0.6, 0.3}},
      {Gesture::pro,   {0.8, 0.4, 0.4, 1.0, 1.4, 2.2, 1.4, 0.4}},
      {Gesture::sup,   {1.2, 0.6, 0.3, 0.3, 0.7, 1.1, 1.9, 1.9}},
  };
}

Vec8 effective_pattern(const GesturePrototype& proto, double overlap) {
  Vec8 out;
  for (int c = 0; c < kChannels; ++c) {
    out[c] = (1.0 - overlap) * proto.pattern[c] + overlap * 1.0;
  }
  return out;
}

namespace {

const GesturePrototype* find_prototype(const SynthConfig& config, Gesture label) {
  for (const auto& proto : config.prototypes) {
    if (proto.label == label) return &proto;
  }
  return nullptr;
}

void validate_config(const SynthConfig& config) {
  if (!(config.rest_level > 0.0)) throw config_error("rest_level must be positive");
  if (!(config.full_scale > 0.0)) throw config_error("full_scale must be positive");
  if (config.noise_rel < 0.0 || config.noise_abs < 0.0) {
    throw config_error("noise parameters must be non-negative");
  }
  if (config.overlap < 0.0 || config.overlap > 1.0) {
    throw config_error("overlap must lie in [0,1]");
  }
  for (std::size_t i = 0; i < config.prototypes.size(); ++i) {
    const auto& proto = config.prototypes[i];
    if (proto.label == Gesture::rest) {
      throw config_error("rest has no prototype; it is the noise floor");
    }
    double sum = 0.0, top = 0.0;
    for (double v : proto.pattern) {
      if (v < 0.0) throw config_error("prototype patterns must be non-negative");
      sum += v;
      top = std::max(top, v);
    }
    if (std::fabs(sum / kChannels - 1.0) > 1e-9 || top <= 0.0) {
      throw config_error("prototype pattern for " + to_string(proto.label) +
                         " must have unit mean and a positive entry");
    }
    for (std::size_t j = i + 1; j < config.prototypes.size(); ++j) {
      if (config.prototypes[j].label == proto.label) {
        throw config_error("duplicate prototype for " + to_string(proto.label));
      }
    }
  }
}

}  // namespace

Frame generate_frame(Gesture label, double intensity, const SynthConfig& config,
                     std::uint64_t frame_index) {
  if (!(intensity >= 0.0 && intensity <= 1.0)) {
    throw config_error("intensity must lie in [0,1]");
  }
  SynthConfig effective = config;
  if (effective.prototypes.empty()) effective.prototypes = default_prototypes();
  validate_config(effective);

  const GesturePrototype* proto = nullptr;
  if (label != Gesture::rest) {
    proto = find_prototype(effective, label);
    if (proto == nullptr) {
      throw config_error("no prototype for gesture " + to_string(label));
    }
  }

  // Per-frame stream: 8 floor draws then 8 gesture draws, always consumed in
  // the same order so rest and gesture frames stay aligned per index.
  Rng rng = Rng::for_index(config.seed, frame_index);
  Vec8 floor_noise, gesture_noise;
  for (int c = 0; c < kChannels; ++c) floor_noise[c] = rng.normal();
  for (int c = 0; c < kChannels; ++c) gesture_noise[c] = rng.normal();

  Frame out;
  const Vec8 pattern =
      proto ? effective_pattern(*proto, config.overlap) : Vec8{};
  for (int c = 0; c < kChannels; ++c) {
    const double floor_part =
        config.rest_level * (1.0 + config.noise_abs * floor_noise[c]);
    double value = floor_part;
    if (proto) {
      value += intensity * config.full_scale * pattern[c] *
               (1.0 + config.noise_rel * gesture_noise[c]);
    }
    out.channels[c] = std::fabs(value);
  }
  return out;
}

LabeledDataset generate_session(const SessionScript& script,
                                const SynthConfig& config) {
  if (script.steps.empty()) throw config_error("session script is empty");
  if (script.repetitions < 1) throw config_error("repetitions must be >= 1");
  if (!(config.frame_rate_hz > 0.0)) {
    throw config_error("frame rate must be positive");
  }

  int max_explicit_block = -1;
  std::size_t n_explicit = 0;
  for (const auto& step : script.steps) {
    if (step.block.has_value()) {
      if (*step.block < 0) throw config_error("explicit block ids must be >= 0");
      max_explicit_block = std::max(max_explicit_block, *step.block);
      ++n_explicit;
    }
  }
  if (n_explicit != 0 && n_explicit != script.steps.size()) {
    throw config_error("either all script steps carry a block id or none do");
  }
  const int block_stride = max_explicit_block + 1;  // per-repetition offset

  LabeledDataset data;
  std::uint64_t frame_index = 0;
  for (int rep = 0; rep < script.repetitions; ++rep) {
    for (const auto& step : script.steps) {
      const double intensity =
          step.label == Gesture::rest ? 0.0 : step.intensity;
      const auto n_frames = static_cast<std::size_t>(
          std::llround(step.duration_s * config.frame_rate_hz));
      if (n_frames == 0) {
        throw config_error("script step shorter than one frame");
      }
      const int block = step.block.has_value()
                            ? *step.block + rep * block_stride
                            : rep;
      for (std::size_t f = 0; f < n_frames; ++f) {
        Frame frame = generate_frame(step.label, intensity, config, frame_index);
        frame.time_s = static_cast<double>(frame_index) / config.frame_rate_hz;
        data.frames.push_back(frame);
        data.labels.push_back(step.label);
        data.levels.push_back(intensity);
        data.blocks.push_back(block);
        ++frame_index;
      }
    }
  }
  data.validate();
  return data;
}

}  // namespace myo
