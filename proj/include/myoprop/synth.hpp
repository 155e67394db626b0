#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "myoprop/signal.hpp"

namespace myo {

// Channel pattern of one gesture at full intensity; unit mean so the pattern
// itself is a valid direction.
struct GesturePrototype {
  Gesture label = Gesture::power;
  Vec8 pattern{};
};

struct SynthConfig {
  std::vector<GesturePrototype> prototypes;  // defaults to all six gestures
  double rest_level = 0.05;   // per-channel rest floor
  double full_scale = 1.0;    // magnitude added by a full-intensity gesture
  double noise_rel = 0.1;     // multiplicative noise std on the gesture part
  double noise_abs = 0.25;    // relative noise std on the rest floor
  double overlap = 0.0;       // 0 keeps prototypes apart, 1 collapses them
  double frame_rate_hz = 50.0;
  std::uint64_t seed = 1;
};

// The six stock prototypes with partially overlapping channel patterns.
std::vector<GesturePrototype> default_prototypes();

// Prototypes blended toward the uniform vector by `overlap`.
Vec8 effective_pattern(const GesturePrototype& proto, double overlap);

// channels = |intensity * full_scale * pattern * (1 + eps_rel)
//             + rest_level * (1 + eps_abs)|, per channel; rest frames carry
// only the floor term. Deterministic in (config.seed, frame_index).
Frame generate_frame(Gesture label, double intensity, const SynthConfig& config,
                     std::uint64_t frame_index = 0);

struct ScriptStep {
  Gesture label = Gesture::rest;
  double intensity = 0.0;    // in [0,1]; ignored (0) for rest
  double duration_s = 1.0;
  std::optional<int> block;  // explicit block id; default: repetition index
};

struct SessionScript {
  std::vector<ScriptStep> steps;
  int repetitions = 1;
};

// Concatenates `repetitions` passes over the script. Frames get ground-truth
// labels and levels; blocks default to the repetition index, or the step's
// explicit id offset per repetition. Bit-identical for identical seeds.
LabeledDataset generate_session(const SessionScript& script,
                                const SynthConfig& config);

}  // namespace myo
