#include "hcr/parts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcr/parallel.hpp"

namespace hcr {

const std::array<std::string_view, kKeypointCount>& keypoint_names() {
  static const std::array<std::string_view, kKeypointCount> names = {
      "nose",           // 0
      "neck",           // 1
      "right_shoulder",  // 2
      "right_elbow",    // 3
      "right_wrist",    // 4
      "left_shoulder",  // 5
      "left_elbow",     // 6
      "left_wrist",     // 7
      "right_hip",      // 8
      "right_knee",     // 9
      "right_ankle",    // 10
      "left_hip",       // 11
      "left_knee",      // 12
      "left_ankle",     // 13
      "right_eye",      // 14
      "left_eye",       // 15
      "right_ear",      // 16
      "left_ear",       // 17
  };
  return names;
}

const std::array<BodyPart, kPartCount>& body_parts() {
  static const std::array<BodyPart, kPartCount> parts = {{
      {"head", {0, 14, 15, 16, 17}},
      {"left_arm", {5, 6, 7}},
      {"right_arm", {2, 3, 4}},
      {"right_leg", {8, 9, 10}},
      {"left_leg", {11, 12, 13}},
      {"trunk", {1, 2, 5, 8, 11}},
      {"trunk_head_left_arm", {0, 1, 2, 5, 6, 7, 8, 11, 14, 15, 16, 17}},
      {"trunk_head_right_arm", {0, 1, 2, 3, 4, 5, 8, 11, 14, 15, 16, 17}},
      {"trunk_head", {1, 2, 5, 8, 11, 14, 15, 16, 17}},
      {"upper_body", {0, 1, 2, 3, 4, 5, 6, 7, 14, 15, 16, 17}},
      {"lower_body", {8, 9, 10, 11, 12, 13}},
      {"left_body", {0, 1, 5, 6, 7, 11, 12, 13, 15, 17}},
      {"right_body", {0, 1, 2, 3, 4, 8, 9, 10, 14, 16}},
      {"body", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17}},
  }};
  return parts;
}

HeatmapStack::HeatmapStack(int channels, int height, int width) {
  if (channels < 0 || height < 0 || width < 0) {
    throw InvalidArgument("heatmap dimensions must be non-negative");
  }
  this->channels = channels;
  this->height = height;
  this->width = width;
  values.assign(static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) *
                    static_cast<std::size_t>(width),
                0.0);
}

void HeatmapStack::validate(bool strict_range) const {
  if (channels < 1 || height < 1 || width < 1) {
    throw InvalidArgument("heatmap stack must have positive dimensions");
  }
  const std::size_t expected = static_cast<std::size_t>(channels) *
                               static_cast<std::size_t>(height) *
                               static_cast<std::size_t>(width);
  if (values.size() != expected) {
    throw InvalidArgument("heatmap stack holds " + std::to_string(values.size()) +
                          " values, expected " + std::to_string(expected));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("heatmap contains non-finite values");
    if (strict_range && (v < 0.0 || v > 1.0)) {
      throw InvalidInput("heatmap value " + std::to_string(v) + " outside [0, 1]");
    }
  }
}

HeatmapStack compose_parts(const HeatmapStack& keypoints) {
  keypoints.validate(/*strict_range=*/false);
  if (keypoints.channels != kKeypointCount) {
    throw InvalidArgument("keypoint stack must have " + std::to_string(kKeypointCount) +
                          " channels, got " + std::to_string(keypoints.channels));
  }

  const auto& parts = body_parts();
  HeatmapStack out(kPartCount, keypoints.height, keypoints.width);

  // One task per (part, row) pair; every task writes a disjoint row.
  const int tasks = kPartCount * keypoints.height;
  parallel_for(tasks, [&](int task) {
    const int part = task / keypoints.height;
    const int y = task % keypoints.height;
    const BodyPart& spec = parts[static_cast<std::size_t>(part)];
    for (int x = 0; x < keypoints.width; ++x) {
      double best = 0.0;
      bool first = true;
      for (int channel : spec.keypoints) {
        const double v = keypoints.at(channel, y, x);
        if (first || v > best) {
          best = v;
          first = false;
        }
      }
      out.at(part, y, x) = best;
    }
  });
  return out;
}

double parts_loss(const HeatmapStack& predicted, const HeatmapStack& target,
                  LossReduction reduction) {
  predicted.validate(/*strict_range=*/false);
  target.validate(/*strict_range=*/false);
  if (predicted.channels != target.channels || predicted.height != target.height ||
      predicted.width != target.width) {
    throw InvalidArgument("loss operands must share one shape");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.values.size(); ++i) {
    const double d = predicted.values[i] - target.values[i];
    total += d * d;
  }
  if (reduction == LossReduction::mean) {
    total /= static_cast<double>(predicted.values.size());
  }
  return total;
}

double combined_loss(double classification_loss, double parts_loss_value,
                     const LossConfig& config) {
  if (!std::isfinite(classification_loss) || !std::isfinite(parts_loss_value) ||
      !std::isfinite(config.lambda)) {
    throw InvalidArgument("loss terms must be finite");
  }
  return classification_loss + config.lambda * parts_loss_value;
}

}  // namespace hcr
