#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace myo {

inline constexpr int kChannels = 8;

using Vec8 = std::array<double, kChannels>;

// The gesture alphabet. rest is special: it is decided by magnitude
// thresholding, never by the classifier.
enum class Gesture { rest, power, point, flex, ext, pro, sup };

inline constexpr std::array<Gesture, 7> kAllGestures = {
    Gesture::rest, Gesture::power, Gesture::point, Gesture::flex,
    Gesture::ext,  Gesture::pro,   Gesture::sup};

inline constexpr std::array<Gesture, 6> kNonRestGestures = {
    Gesture::power, Gesture::point, Gesture::flex,
    Gesture::ext,   Gesture::pro,   Gesture::sup};

std::string to_string(Gesture g);
Gesture gesture_from_string(const std::string& name);  // throws data_error

// One time-step of rectified 8-channel EMG.
struct Frame {
  Vec8 channels{};     // rectified activations, all >= 0 and finite
  double time_s = 0.0;
};

// A frame split into its unit-mean direction and its magnitude (mean of the
// rectified channels). magnitude == 0 is the defined degenerate case: the
// direction is then all-zero and the caller must treat the frame as rest.
struct NormalizedFrame {
  Vec8 direction{};
  double magnitude = 0.0;
};

// Frames with per-frame labels, stimulus levels and repetition block ids.
// Block ids group contiguous frames; an empty `blocks` vector means no block
// structure was recorded.
struct LabeledDataset {
  std::vector<Frame> frames;
  std::vector<Gesture> labels;
  std::vector<double> levels;  // in [0,1]; 0 for rest frames
  std::vector<int> blocks;     // empty, or one id per frame

  std::size_t size() const { return frames.size(); }
  void validate() const;  // throws data_error on any broken invariant
};

// Element-wise absolute value. Throws data_error if `raw` does not hold
// exactly kChannels finite values.
Frame rectify(std::span<const double> raw);

// Arithmetic mean of the channels (the "signal strength").
double magnitude(const Frame& frame);

// Split into direction (channels / magnitude) and magnitude.
NormalizedFrame normalize(const Frame& frame);

// Causal per-channel moving average over the last `window` frames; the
// prefix is averaged over however many frames exist. window == 0 is a
// config_error. Output length equals input length.
std::vector<Frame> smooth(std::span<const Frame> stream, int window);

// smooth() applied independently to each contiguous block so envelopes never
// bleed across repetition boundaries. Datasets without block ids are
// smoothed as one stream.
LabeledDataset smooth_dataset(const LabeledDataset& data, int window);

}  // namespace myo
