#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dagnn/geometry.hpp"

namespace dagnn {

struct DpcInput {
  std::vector<Point> points;     // 2D
  std::vector<double> densities;
};

struct DpcDelta {
  std::vector<double> delta;  // per input point
  /// Original index of the nearest strictly-higher-density point (ties:
  /// higher density first by smaller original index); nullopt for the
  /// maximum-density point, whose delta is its max distance to any point.
  std::vector<std::optional<std::uint32_t>> nearest_higher;
  std::uint64_t distance_evaluations = 0;  // delta-phase comparison count
};

/// Density-peak-clustering delta via prefix-k queries: sort by density
/// descending (ties by original index), build the index in that order, and
/// answer each point's delta with a nearest-prefix query over its
/// predecessors.
DpcDelta dpc_delta(const DpcInput& input);

/// First m entries of the farthest-point order (original indices).
std::vector<std::uint32_t> fps_sample(std::span<const Point> points, std::size_t m,
                                      std::uint32_t start_index, int dimension);

}  // namespace dagnn
