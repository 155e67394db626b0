#include "myoprop/signal.hpp"

#include <cmath>
#include <unordered_map>

#include "myoprop/errors.hpp"

namespace myo {

std::string to_string(Gesture g) {
  switch (g) {
    case Gesture::rest: return "rest";
    case Gesture::power: return "power";
    case Gesture::point: return "point";
    case Gesture::flex: return "flex";
    case Gesture::ext: return "ext";
    case Gesture::pro: return "pro";
    case Gesture::sup: return "sup";
  }
  throw data_error("unknown gesture value");
}

Gesture gesture_from_string(const std::string& name) {
  static const std::unordered_map<std::string, Gesture> table = {
      {"rest", Gesture::rest}, {"power", Gesture::power},
      {"point", Gesture::point}, {"flex", Gesture::flex},
      {"ext", Gesture::ext},   {"pro", Gesture::pro},
      {"sup", Gesture::sup}};
  auto it = table.find(name);
  if (it == table.end()) throw data_error("unknown gesture label: " + name);
  return it->second;
}

void LabeledDataset::validate() const {
  const std::size_t n = frames.size();
  if (labels.size() != n || levels.size() != n ||
      (!blocks.empty() && blocks.size() != n)) {
    throw data_error("dataset columns have mismatched lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (double c : frames[i].channels) {
      if (!std::isfinite(c) || c < 0.0) {
        throw data_error("frame " + std::to_string(i) +
                         " has a negative or non-finite channel");
      }
    }
    if (!std::isfinite(levels[i]) || levels[i] < 0.0 || levels[i] > 1.0) {
      throw data_error("frame " + std::to_string(i) + " level outside [0,1]");
    }
    if (labels[i] == Gesture::rest && levels[i] != 0.0) {
      throw data_error("frame " + std::to_string(i) +
                       " is rest but has nonzero level");
    }
    if (!blocks.empty() && blocks[i] < 0) {
      throw data_error("frame " + std::to_string(i) + " has negative block id");
    }
  }
  if (!blocks.empty()) {
    // Every block id must cover one contiguous run.
    std::unordered_map<int, bool> closed;
    for (std::size_t i = 0; i < n; ++i) {
      const int id = blocks[i];
      if (i == 0 || blocks[i - 1] != id) {
        if (closed.count(id)) {
          throw data_error("block id " + std::to_string(id) +
                           " appears in non-contiguous runs");
        }
        closed[id] = false;
      }
    }
  }
}

Frame rectify(std::span<const double> raw) {
  if (raw.size() != static_cast<std::size_t>(kChannels)) {
    throw data_error("expected " + std::to_string(kChannels) +
                     " channels, got " + std::to_string(raw.size()));
  }
  Frame out;
  for (int c = 0; c < kChannels; ++c) {
    if (!std::isfinite(raw[c])) {
      throw data_error("non-finite sample in channel " + std::to_string(c + 1));
    }
    out.channels[c] = std::fabs(raw[c]);
  }
  return out;
}

double magnitude(const Frame& frame) {
  double sum = 0.0;
  for (double c : frame.channels) sum += c;
  return sum / kChannels;
}

NormalizedFrame normalize(const Frame& frame) {
  NormalizedFrame out;
  out.magnitude = magnitude(frame);
  if (out.magnitude == 0.0) return out;  // all-zero direction, caller treats as rest
  for (int c = 0; c < kChannels; ++c) {
    out.direction[c] = frame.channels[c] / out.magnitude;
  }
  return out;
}

std::vector<Frame> smooth(std::span<const Frame> stream, int window) {
  if (window < 1) throw config_error("smoothing window must be >= 1");
  // Direct summation per frame; a running sum would drift off the exact
  // window-1 identity. Windows are short, so O(n*window) is fine.
  std::vector<Frame> out(stream.begin(), stream.end());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const std::size_t lo = i + 1 >= static_cast<std::size_t>(window)
                               ? i + 1 - static_cast<std::size_t>(window)
                               : 0;
    const double count = static_cast<double>(i - lo + 1);
    for (int c = 0; c < kChannels; ++c) {
      double sum = 0.0;
      for (std::size_t j = lo; j <= i; ++j) sum += stream[j].channels[c];
      out[i].channels[c] = sum / count;
    }
  }
  return out;
}

LabeledDataset smooth_dataset(const LabeledDataset& data, int window) {
  LabeledDataset out = data;
  if (data.blocks.empty()) {
    out.frames = smooth(data.frames, window);
    return out;
  }
  std::size_t start = 0;
  for (std::size_t i = 1; i <= data.size(); ++i) {
    if (i == data.size() || data.blocks[i] != data.blocks[start]) {
      auto part = smooth(
          std::span<const Frame>(data.frames.data() + start, i - start), window);
      std::copy(part.begin(), part.end(), out.frames.begin() + start);
      start = i;
    }
  }
  return out;
}

}  // namespace myo
