#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hcr/error.hpp"
#include "hcr/reference.hpp"
#include "hcr/rng.hpp"
#include "hcr/seqcluster.hpp"

using hcr::ClusterState;
using hcr::ClusterStats;
using hcr::FeatureSequence;
using hcr::Matrix;
using hcr::Segmentation;

namespace {

FeatureSequence sequence_1d(std::vector<double> values) {
  Matrix frames(static_cast<int>(values.size()), 1);
  for (int t = 0; t < frames.rows(); ++t) frames(t, 0) = values[static_cast<std::size_t>(t)];
  return {frames, "test", ""};
}

FeatureSequence random_sequence(hcr::Rng& rng, int frames, int dim) {
  Matrix m(frames, dim);
  for (double& v : m.values()) v = rng.normal();
  return {m, "random", ""};
}

}  // namespace

TEST_SUITE("seqcluster") {
  TEST_CASE("k equal to frame count keeps every frame separate") {
    const FeatureSequence seq = sequence_1d({3, 1, 4, 1, 5});
    ClusterStats stats;
    const Segmentation seg = cluster_sequence(seq, 5, &stats);
    REQUIRE(seg.count() == 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(seg.segments[static_cast<std::size_t>(i)] == std::pair<int, int>{i, i + 1});
    }
    CHECK(stats.merges == 0);
  }

  TEST_CASE("k of one collapses everything") {
    const FeatureSequence seq = sequence_1d({3, 1, 4, 1, 5});
    ClusterStats stats;
    const Segmentation seg = cluster_sequence(seq, 1, &stats);
    REQUIRE(seg.count() == 1);
    CHECK(seg.segments[0] == std::pair<int, int>{0, 5});
    CHECK(stats.merges == 4);
  }

  TEST_CASE("two plateaus split at the jump") {
    const FeatureSequence seq = sequence_1d({0, 0, 0, 10, 10, 10});
    ClusterStats stats;
    const Segmentation seg = cluster_sequence(seq, 2, &stats);
    REQUIRE(seg.count() == 2);
    CHECK(seg.segments[0] == std::pair<int, int>{0, 3});
    CHECK(seg.segments[1] == std::pair<int, int>{3, 6});
    CHECK(stats.merges == 4);
  }

  TEST_CASE("merge count is always frames minus k") {
    hcr::Rng rng(99);
    for (int round = 0; round < 20; ++round) {
      const int frames = 2 + static_cast<int>(rng.uniform_below(40));
      const int k = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(frames)));
      const FeatureSequence seq = random_sequence(rng, frames, 3);
      ClusterStats stats;
      const Segmentation seg = cluster_sequence(seq, k, &stats);
      CHECK(stats.merges == frames - k);
      CHECK(seg.count() == k);
      seg.validate(frames);
    }
  }

  TEST_CASE("neighbor distance is the centroid euclidean distance") {
    Matrix frames = Matrix::from_rows({{0, 0}, {3, 4}});
    ClusterState state = ClusterState::from_sequence(frames);
    CHECK(state.neighbor_distance(0) == doctest::Approx(5.0).epsilon(1e-12));
  }

  TEST_CASE("centroids are size-weighted means across merges") {
    Matrix frames = Matrix::from_rows({{0}, {1}, {8}});
    ClusterState state = ClusterState::from_sequence(frames);
    state.merge(0);
    REQUIRE(state.count() == 2);
    CHECK(state.centroid(0)[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(state.centroid(1)[0] == doctest::Approx(8.0).epsilon(1e-12));
    state.merge(0);
    CHECK(state.centroid(0)[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(state.merge(0), hcr::InvalidState);
  }

  TEST_CASE("ties merge the leftmost pair") {
    // All adjacent distances equal: the first pair must merge first.
    const FeatureSequence seq = sequence_1d({0, 1, 2, 3});
    const Segmentation seg = cluster_sequence(seq, 3);
    REQUIRE(seg.count() == 3);
    CHECK(seg.segments[0] == std::pair<int, int>{0, 2});
    CHECK(seg.segments[1] == std::pair<int, int>{2, 3});
    CHECK(seg.segments[2] == std::pair<int, int>{3, 4});
  }

  TEST_CASE("rejects out-of-range k and bad values") {
    const FeatureSequence seq = sequence_1d({1, 2, 3});
    CHECK_THROWS_AS(cluster_sequence(seq, 0, nullptr), hcr::InvalidArgument);
    CHECK_THROWS_AS(cluster_sequence(seq, 4, nullptr), hcr::InvalidArgument);

    FeatureSequence bad = sequence_1d({1, 2, 3});
    bad.frames(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(cluster_sequence(bad, 2, nullptr), hcr::InvalidInput);
  }

  TEST_CASE("segmentation validation catches gaps, overlap, and empty segments") {
    Segmentation gap{{{0, 2}, {3, 5}}};
    CHECK_THROWS_AS(gap.validate(5), hcr::InvalidArgument);
    Segmentation empty{{{0, 0}, {0, 5}}};
    CHECK_THROWS_AS(empty.validate(5), hcr::InvalidArgument);
    Segmentation short_cover{{{0, 4}}};
    CHECK_THROWS_AS(short_cover.validate(5), hcr::InvalidArgument);
    Segmentation ok{{{0, 2}, {2, 5}}};
    ok.validate(5);
  }

  TEST_CASE("representation averages sampled frames") {
    const FeatureSequence seq = sequence_1d({0, 1, 2, 3, 4, 5});
    const Segmentation whole{{{0, 6}}};

    SUBCASE("four evenly spaced frames") {
      const Matrix r = segment_representation(seq, whole, 4);
      REQUIRE(r.rows() == 1);
      // picks frames 0, 1, 3, 5 -> mean 2.25
      CHECK(r(0, 0) == doctest::Approx(2.25).epsilon(1e-12));
    }
    SUBCASE("no subsampling averages everything") {
      const Matrix r = segment_representation(seq, whole, std::nullopt);
      CHECK(r(0, 0) == doctest::Approx(2.5).epsilon(1e-12));
    }
    SUBCASE("segments shorter than the sample count keep all frames") {
      const Segmentation split{{{0, 3}, {3, 6}}};
      const Matrix r = segment_representation(seq, split, 4);
      REQUIRE(r.rows() == 2);
      CHECK(r(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(r(1, 0) == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("one frame per segment takes the first") {
      const Matrix r = segment_representation(seq, whole, 1);
      CHECK(r(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("zero frames per segment is rejected") {
      CHECK_THROWS_AS(segment_representation(seq, whole, 0), hcr::InvalidArgument);
    }
  }

  TEST_CASE("representation validates the segmentation against the sequence") {
    const FeatureSequence seq = sequence_1d({0, 1, 2});
    const Segmentation wrong{{{0, 2}}};
    CHECK_THROWS_AS(segment_representation(seq, wrong, 4), hcr::InvalidArgument);
  }

  TEST_CASE("agrees with the quadratic reference on random sequences") {
    hcr::Rng rng(2024);
    for (int round = 0; round < 60; ++round) {
      const int frames = 2 + static_cast<int>(rng.uniform_below(48));
      const int dim = 1 + static_cast<int>(rng.uniform_below(8));
      const int k = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(frames)));
      const FeatureSequence seq = random_sequence(rng, frames, dim);
      const Segmentation fast = cluster_sequence(seq, k);
      const Segmentation slow = hcr::reference::cluster_sequence_quadratic(seq, k);
      CHECK(fast == slow);
    }
  }
}
