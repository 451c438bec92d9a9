#include "dagnn/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dagnn/ordering.hpp"
#include "dagnn/query_table.hpp"

namespace dagnn {

DpcDelta dpc_delta(const DpcInput& input) {
  const std::size_t n = input.points.size();
  if (n == 0) throw std::invalid_argument("dpc_delta: empty input");
  if (input.densities.size() != n) throw std::invalid_argument("dpc_delta: size mismatch");
  for (const double r : input.densities)
    if (!std::isfinite(r)) throw std::invalid_argument("dpc_delta: non-finite density");

  // Density-descending order; ties broken by original index so the prefix
  // semantics are total.
  std::vector<std::uint32_t> by_density(n);
  std::iota(by_density.begin(), by_density.end(), 0u);
  std::sort(by_density.begin(), by_density.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (input.densities[a] != input.densities[b]) return input.densities[a] > input.densities[b];
    return a < b;
  });

  std::vector<Point> sorted_pts(n);
  for (std::size_t i = 0; i < n; ++i) sorted_pts[i] = input.points[by_density[i]];

  DpcDelta out;
  out.delta.assign(n, 0.0);
  out.nearest_higher.assign(n, std::nullopt);

  // Max-density point: delta = max distance to any point.
  {
    double best = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      best = std::max(best, squared_distance(sorted_pts[0], sorted_pts[j]));
      ++out.distance_evaluations;
    }
    out.delta[by_density[0]] = std::sqrt(best);
  }
  if (n == 1) return out;

  const NnsIndex index = build(sorted_pts, identity_order(n), input.points[0].dim());
  for (std::size_t i = 1; i < n; ++i) {
    const auto [sorted_pos, st] = index.nearest_prefix_with_stats(sorted_pts[i], i);
    out.distance_evaluations += st.comparisons + 1;  // +1: the scan's starting distance
    const double d = std::sqrt(squared_distance(sorted_pts[i], sorted_pts[sorted_pos]));
    out.delta[by_density[i]] = d;
    out.nearest_higher[by_density[i]] = by_density[sorted_pos];
  }
  return out;
}

std::vector<std::uint32_t> fps_sample(std::span<const Point> points, std::size_t m,
                                      std::uint32_t start_index, int dimension) {
  if (m < 1 || m > points.size()) throw std::invalid_argument("fps_sample: m out of range");
  FarthestPointSampler sampler(points, start_index, dimension);
  while (sampler.selected().size() < m) sampler.step();
  return {sampler.selected().begin(), sampler.selected().begin() + static_cast<std::ptrdiff_t>(m)};
}

}  // namespace dagnn
