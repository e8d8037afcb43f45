#include "hcr/seqcluster.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hcr/error.hpp"

namespace hcr {

void Segmentation::validate(int total_frames) const {
  if (segments.empty()) throw InvalidArgument("segmentation has no segments");
  int expected_start = 0;
  for (const auto& [start, end] : segments) {
    if (start != expected_start) {
      throw InvalidArgument("segments must be contiguous from frame 0");
    }
    if (end <= start) throw InvalidArgument("segments must be non-empty");
    expected_start = end;
  }
  if (expected_start != total_frames) {
    throw InvalidArgument("segments must cover all " + std::to_string(total_frames) +
                          " frames");
  }
}

ClusterState ClusterState::from_sequence(const Matrix& frames) {
  if (frames.rows() == 0 || frames.cols() == 0) {
    throw InvalidArgument("sequence must have at least one frame and one feature");
  }
  ClusterState state;
  state.total_frames_ = frames.rows();
  state.dim_ = frames.cols();
  state.sums_.reserve(static_cast<std::size_t>(frames.rows()));
  state.sizes_.assign(static_cast<std::size_t>(frames.rows()), 1);
  state.ends_.resize(static_cast<std::size_t>(frames.rows()));
  for (int t = 0; t < frames.rows(); ++t) {
    auto row = frames.row(t);
    state.sums_.emplace_back(row.begin(), row.end());
    state.ends_[static_cast<std::size_t>(t)] = t + 1;
  }
  return state;
}

std::vector<double> ClusterState::centroid(int i) const {
  if (i < 0 || i >= count()) throw InvalidArgument("centroid: cluster index out of range");
  const auto ui = static_cast<std::size_t>(i);
  std::vector<double> c = sums_[ui];
  for (double& v : c) v /= sizes_[ui];
  return c;
}

double ClusterState::neighbor_distance(int i) const {
  if (count() < 2) throw InvalidState("neighbor_distance: fewer than two clusters");
  if (i < 0 || i + 1 >= count()) {
    throw InvalidArgument("neighbor_distance: pair index out of range");
  }
  const auto ui = static_cast<std::size_t>(i);
  double s = 0.0;
  for (int c = 0; c < dim_; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    const double d = sums_[ui][uc] / sizes_[ui] - sums_[ui + 1][uc] / sizes_[ui + 1];
    s += d * d;
  }
  return std::sqrt(s);
}

void ClusterState::merge(int i) {
  if (count() < 2) throw InvalidState("merge: fewer than two clusters");
  if (i < 0 || i + 1 >= count()) throw InvalidArgument("merge: pair index out of range");
  const auto ui = static_cast<std::size_t>(i);
  for (int c = 0; c < dim_; ++c) {
    sums_[ui][static_cast<std::size_t>(c)] += sums_[ui + 1][static_cast<std::size_t>(c)];
  }
  sizes_[ui] += sizes_[ui + 1];
  ends_[ui] = ends_[ui + 1];
  sums_.erase(sums_.begin() + static_cast<std::ptrdiff_t>(ui) + 1);
  sizes_.erase(sizes_.begin() + static_cast<std::ptrdiff_t>(ui) + 1);
  ends_.erase(ends_.begin() + static_cast<std::ptrdiff_t>(ui) + 1);
}

Segmentation ClusterState::to_segmentation() const {
  Segmentation seg;
  seg.segments.reserve(sizes_.size());
  int start = 0;
  for (int end : ends_) {
    seg.segments.emplace_back(start, end);
    start = end;
  }
  return seg;
}

Segmentation cluster_sequence(const FeatureSequence& seq, int k, ClusterStats* stats) {
  const int frames = seq.frames.rows();
  if (k < 1 || k > frames) {
    throw InvalidArgument("cluster count must be between 1 and the frame count (" +
                          std::to_string(frames) + "), got " + std::to_string(k));
  }
  if (!seq.frames.all_finite()) {
    throw InvalidInput("sequence '" + seq.id + "' contains non-finite feature values");
  }

  ClusterState state = ClusterState::from_sequence(seq.frames);
  if (stats != nullptr) stats->merges = 0;

  // Cached adjacent-pair distances; a merge at i only disturbs pairs i-1, i.
  std::vector<double> pair_dist;
  pair_dist.reserve(static_cast<std::size_t>(frames));
  for (int i = 0; i + 1 < state.count(); ++i) pair_dist.push_back(state.neighbor_distance(i));

  while (state.count() > k) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(pair_dist.size()); ++i) {
      if (pair_dist[static_cast<std::size_t>(i)] < best_dist) {
        best_dist = pair_dist[static_cast<std::size_t>(i)];
        best = i;
      }
    }
    state.merge(best);
    if (stats != nullptr) ++stats->merges;

    pair_dist.erase(pair_dist.begin() + best);
    if (best > 0) pair_dist[static_cast<std::size_t>(best) - 1] = state.neighbor_distance(best - 1);
    if (best + 1 < state.count()) pair_dist[static_cast<std::size_t>(best)] = state.neighbor_distance(best);
  }

  return state.to_segmentation();
}

Matrix segment_representation(const FeatureSequence& seq, const Segmentation& seg,
                              std::optional<int> frames_per_segment) {
  seg.validate(seq.frames.rows());
  if (frames_per_segment.has_value() && *frames_per_segment < 1) {
    throw InvalidArgument("frames_per_segment must be positive");
  }
  if (!seq.frames.all_finite()) {
    throw InvalidInput("sequence '" + seq.id + "' contains non-finite feature values");
  }

  const int d = seq.frames.cols();
  Matrix out(seg.count(), d);
  for (int s = 0; s < seg.count(); ++s) {
    const auto [start, end] = seg.segments[static_cast<std::size_t>(s)];
    const int len = end - start;

    std::vector<int> picks;
    if (frames_per_segment.has_value() && len >= *frames_per_segment) {
      const int f = *frames_per_segment;
      if (f == 1) {
        picks.push_back(start);
      } else {
        for (int t = 0; t < f; ++t) {
          picks.push_back(start + t * (len - 1) / (f - 1));
        }
      }
    } else {
      for (int t = start; t < end; ++t) picks.push_back(t);
    }

    auto out_row = out.row(s);
    for (int t : picks) {
      auto frame = seq.frames.row(t);
      for (int c = 0; c < d; ++c) out_row[static_cast<std::size_t>(c)] += frame[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < d; ++c) out_row[static_cast<std::size_t>(c)] /= static_cast<double>(picks.size());
  }
  return out;
}

}  // namespace hcr
