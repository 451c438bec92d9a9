#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "dagnn/geometry.hpp"

namespace dagnn {

// Reference nearest-neighbor implementations. All three are exact and share
// one tie rule: smallest squared distance, then smallest index in the fixed
// point order. linear_nearest is THE oracle for the query-table tests.

/// Nearest over points[0..prefix) (default: all). O(prefix).
std::uint32_t linear_nearest(std::span<const Point> points, const Point& q,
                             std::optional<std::size_t> prefix = std::nullopt);

/// Axis-median kd-tree, axes cycled by depth, leaf size 10.
class KdTree {
 public:
  explicit KdTree(std::span<const Point> points);
  std::uint32_t nearest(const Point& q) const;
  std::uint64_t memory_bytes() const;

 private:
  struct Node {
    double split = 0.0;
    int axis = -1;                // -1: leaf
    std::uint32_t left = 0, right = 0;
    std::uint32_t begin = 0, end = 0;  // leaf range in idx_
  };
  std::uint32_t build(std::uint32_t begin, std::uint32_t end, int depth);
  void search(std::uint32_t node, const Point& q, double& best, std::uint32_t& best_idx) const;

  std::span<const Point> pts_;
  std::vector<std::uint32_t> idx_;
  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
  int dim_ = 0;
};

/// Uniform hash grid, cell size 3x the mean nearest-neighbor spacing of a
/// <=1000-point sample; expanding-ring search, exact termination.
class UniformGrid {
 public:
  explicit UniformGrid(std::span<const Point> points);
  std::uint32_t nearest(const Point& q) const;
  double cell_size() const { return h_; }
  std::uint64_t memory_bytes() const;

 private:
  std::array<std::int64_t, 3> cell_of(const Point& p) const;
  std::span<const Point> pts_;
  int dim_ = 0;
  double h_ = 1.0;
  Point origin_;
  std::array<std::int64_t, 3> lo_{}, hi_{};  // occupied cell bounds
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace dagnn
