#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcr/matrix.hpp"

namespace hcr {

// A temporally ordered sequence of per-frame feature vectors (T x d).
struct FeatureSequence {
  Matrix frames;
  std::string id;
  std::string label;
};

// A partition of [0, T) into contiguous half-open segments, in order.
struct Segmentation {
  std::vector<std::pair<int, int>> segments;

  int count() const { return static_cast<int>(segments.size()); }

  // Segments must be non-empty, contiguous, and cover [0, total_frames).
  void validate(int total_frames) const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

// Working state of the contiguous agglomerative pass: each cluster is a run
// of frames, tracked as (coordinate sum, size) so centroids stay exact
// size-weighted means across merges.
class ClusterState {
 public:
  static ClusterState from_sequence(const Matrix& frames);

  int count() const { return static_cast<int>(sizes_.size()); }
  int total_frames() const { return total_frames_; }

  std::vector<double> centroid(int i) const;

  // Euclidean distance between the centroids of clusters i and i+1.
  double neighbor_distance(int i) const;

  // Folds cluster i+1 into cluster i.
  void merge(int i);

  Segmentation to_segmentation() const;

 private:
  std::vector<std::vector<double>> sums_;
  std::vector<int> sizes_;
  std::vector<int> ends_;  // ends_[i] = one past the last frame of cluster i
  int total_frames_ = 0;
  int dim_ = 0;
};

struct ClusterStats {
  int merges = 0;
};

// Clusters a T-frame sequence into k contiguous segments by repeatedly
// merging the adjacent pair with the smallest centroid distance (leftmost on
// ties). Exactly T - k merges are performed.
Segmentation cluster_sequence(const FeatureSequence& seq, int k, ClusterStats* stats = nullptr);

// One row per segment: the mean of the segment's frames. When
// frames_per_segment = F is given and a segment holds at least F frames, the
// mean runs over F evenly spaced frames instead (indices
// start + floor(t * (len - 1) / (F - 1)) for t = 0..F-1; F = 1 keeps only the
// first frame). Shorter segments contribute all their frames.
Matrix segment_representation(const FeatureSequence& seq, const Segmentation& seg,
                              std::optional<int> frames_per_segment = std::nullopt);

}  // namespace hcr
