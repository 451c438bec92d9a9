#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dagnn/delaunay.hpp"
#include "dagnn/geometry.hpp"
#include "dagnn/segment_tree.hpp"

namespace dagnn {

enum class Strategy { Identity, SpatialSort, FarthestPoint };

const char* strategy_name(Strategy s);

/// Per-step encroachment sets recorded by the coupled farthest-point run
/// (insertion indices); lets an index build skip re-triangulating.
struct BuildTrace {
  std::vector<std::vector<std::uint32_t>> encroached_by_step;
};

/// A permutation of the input points tagged with its generating strategy.
struct InsertionOrder {
  std::vector<std::uint32_t> permutation;  // insertion position -> original index
  Strategy strategy = Strategy::Identity;
  /// FarthestPoint only: min distance of each point at selection time
  /// (Euclidean; position 0 is the seed, +infinity by convention).
  std::vector<double> fps_min_distances;
  std::shared_ptr<const BuildTrace> trace;
};

InsertionOrder identity_order(std::size_t n);

/// BRIO: seeded shuffle, geometric rounds (ratio 4, smallest round >= 16,
/// earlier rounds first), Hilbert sort within each round.
InsertionOrder spatial_sort(std::span<const Point> points, std::uint64_t seed);

/// Exact farthest-point traversal of all n points, coupled to the incremental
/// triangulation: after each insertion only points in buckets of the new
/// vertex's encroached neighbors are reassigned; a segment tree yields the
/// next point (ties to the smallest original index).
InsertionOrder fps_order(std::span<const Point> points, std::uint32_t start_index, int dimension);

/// Step-by-step driver behind fps_order; exposed so the bucket partition
/// invariant can be audited after every insertion.
class FarthestPointSampler {
 public:
  FarthestPointSampler(std::span<const Point> points, std::uint32_t start_index, int dimension);

  bool done() const { return selected_.size() == n_; }
  /// Selects and inserts the next farthest point; returns its original index.
  std::uint32_t step();
  void run() {
    while (!done()) step();
  }

  const std::vector<std::uint32_t>& selected() const { return selected_; }
  const std::vector<double>& min_distances() const { return min_dist_; }
  /// Squared distance of every uninserted point to its nearest inserted site
  /// (-inf once inserted).
  const std::vector<double>& current_sq() const { return current_sq_; }
  /// buckets()[k]: uninserted original indices whose nearest inserted site is
  /// the k-th selected point.
  const std::vector<std::vector<std::uint32_t>>& buckets() const { return buckets_; }
  InsertionOrder finish();

 private:
  std::span<const Point> pts_;
  std::size_t n_;
  int dim_;
  Triangulation tri_;
  std::vector<std::uint32_t> selected_;
  std::vector<double> min_dist_;
  std::vector<double> current_sq_;
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::vector<std::uint32_t> owner_;  // original index -> bucket (selection position)
  std::unique_ptr<SegmentTree> tree_;
  std::shared_ptr<BuildTrace> trace_;
};

}  // namespace dagnn
