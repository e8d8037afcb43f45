#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "hcr/error.hpp"

namespace hcr {

inline constexpr int kKeypointCount = 18;
inline constexpr int kPartCount = 14;

// Canonical keypoint channel order for pose heatmaps.
const std::array<std::string_view, kKeypointCount>& keypoint_names();

struct BodyPart {
  std::string_view name;
  std::vector<int> keypoints;  // channel indices into the keypoint stack
};

// The fixed set of body-part groupings, coarse to full body.
const std::array<BodyPart, kPartCount>& body_parts();

// Channels x height x width grid of values in [0, 1].
struct HeatmapStack {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;  // channel-major, then row-major

  HeatmapStack() = default;
  HeatmapStack(int channels, int height, int width);

  double at(int c, int y, int x) const { return values[index(c, y, x)]; }
  double& at(int c, int y, int x) { return values[index(c, y, x)]; }

  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }

  std::size_t size() const { return values.size(); }

  // Shape consistency plus optional [0, 1] range enforcement.
  void validate(bool strict_range = true) const;

  friend bool operator==(const HeatmapStack&, const HeatmapStack&) = default;
};

// Body-part activation grids derived from an 18-channel keypoint stack: each
// part's value at a pixel is the max over its member keypoint channels.
HeatmapStack compose_parts(const HeatmapStack& keypoints);

// Mean (default) or raw-sum squared error between two equally shaped grids.
enum class LossReduction { mean, sum };
double parts_loss(const HeatmapStack& predicted, const HeatmapStack& target,
                  LossReduction reduction = LossReduction::mean);

// Total training objective: classification loss plus lambda times the parts
// reconstruction loss.
struct LossConfig {
  double lambda = 1.0;
};
double combined_loss(double classification_loss, double parts_loss_value,
                     const LossConfig& config = {});

}  // namespace hcr
