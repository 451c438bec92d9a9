#include "dagnn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dagnn {

std::uint32_t linear_nearest(std::span<const Point> points, const Point& q,
                             std::optional<std::size_t> prefix) {
  const std::size_t n = prefix.value_or(points.size());
  if (n == 0 || n > points.size()) throw std::invalid_argument("linear_nearest: empty prefix");
  std::uint32_t best = 0;
  double best_d = squared_distance(points[0], q);
  for (std::uint32_t i = 1; i < n; ++i) {
    const double d = squared_distance(points[i], q);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// --- kd-tree ----------------------------------------------------------------

KdTree::KdTree(std::span<const Point> points) : pts_(points) {
  if (points.empty()) throw std::invalid_argument("KdTree: empty point set");
  dim_ = points[0].dim();
  idx_.resize(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) idx_[i] = i;
  nodes_.reserve(2 * points.size() / 10 + 8);
  root_ = build(0, static_cast<std::uint32_t>(points.size()), 0);
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end, int depth) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= 10) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  const int axis = depth % dim_;
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double xa = pts_[a][axis], xb = pts_[b][axis];
                     return xa < xb || (xa == xb && a < b);
                   });
  const double split = pts_[idx_[mid]][axis];
  const std::uint32_t l = build(begin, mid, depth + 1);
  const std::uint32_t r = build(mid, end, depth + 1);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void KdTree::search(std::uint32_t node, const Point& q, double& best, std::uint32_t& best_idx) const {
  const Node& nd = nodes_[node];
  if (nd.axis < 0) {
    for (std::uint32_t k = nd.begin; k < nd.end; ++k) {
      const std::uint32_t i = idx_[k];
      const double d = squared_distance(pts_[i], q);
      if (d < best || (d == best && i < best_idx)) {
        best = d;
        best_idx = i;
      }
    }
    return;
  }
  const double delta = q[nd.axis] - nd.split;
  const std::uint32_t near = delta < 0.0 ? nd.left : nd.right;
  const std::uint32_t far = delta < 0.0 ? nd.right : nd.left;
  search(near, q, best, best_idx);
  // Equality must still visit: an equidistant point beyond the plane can win
  // the smallest-index tie.
  if (delta * delta <= best) search(far, q, best, best_idx);
}

std::uint32_t KdTree::nearest(const Point& q) const {
  if (q.dim() != dim_) throw std::invalid_argument("KdTree: query dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_idx = 0xffffffffu;
  search(root_, q, best, best_idx);
  return best_idx;
}

std::uint64_t KdTree::memory_bytes() const {
  return nodes_.size() * sizeof(Node) + idx_.size() * sizeof(std::uint32_t) +
         pts_.size() * static_cast<std::uint64_t>(dim_) * sizeof(double);
}

// --- uniform grid ------------------------------------------------------------

namespace {

std::uint64_t cell_hash(const std::array<std::int64_t, 3>& c) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const std::int64_t v : c) h = (h ^ static_cast<std::uint64_t>(v)) * 0xff51afd7ed558ccdULL;
  return h;
}

}  // namespace

UniformGrid::UniformGrid(std::span<const Point> points) : pts_(points) {
  if (points.empty()) throw std::invalid_argument("UniformGrid: empty point set");
  dim_ = points[0].dim();
  origin_ = bounding_box(points).min;

  // Cell size: 3x mean nearest-neighbor spacing, estimated on an evenly
  // strided sample measured against the full set.
  const std::size_t n = points.size();
  if (n > 1) {
    const std::size_t sample = std::min<std::size_t>(n, 1000);
    const std::size_t stride = n / sample;
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t s = 0; s < sample; ++s) {
      const std::size_t i = s * stride;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        best = std::min(best, squared_distance(points[j], points[i]));
      }
      acc += std::sqrt(best);
      ++cnt;
    }
    const double spacing = acc / static_cast<double>(cnt);
    h_ = spacing > 0.0 ? 3.0 * spacing : 1.0;
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    const auto c = cell_of(points[i]);
    if (i == 0) {
      lo_ = hi_ = c;
    } else {
      for (int k = 0; k < 3; ++k) {
        lo_[static_cast<std::size_t>(k)] = std::min(lo_[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(k)]);
        hi_[static_cast<std::size_t>(k)] = std::max(hi_[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(k)]);
      }
    }
    cells_[cell_hash(c)].push_back(i);
  }
}

std::array<std::int64_t, 3> UniformGrid::cell_of(const Point& p) const {
  std::array<std::int64_t, 3> c{0, 0, 0};
  for (int k = 0; k < dim_; ++k)
    c[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(std::floor((p[k] - origin_[k]) / h_));
  return c;
}

std::uint32_t UniformGrid::nearest(const Point& q) const {
  if (q.dim() != dim_) throw std::invalid_argument("UniformGrid: query dimension mismatch");
  const auto qc = cell_of(q);
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_idx = 0xffffffffu;

  // Chebyshev distance from the query cell to the occupied block, and to its
  // farthest corner: rings outside [k_min, k_max] are empty.
  std::int64_t k_min = 0, k_max = 0;
  for (int k = 0; k < dim_; ++k) {
    const std::int64_t c = qc[static_cast<std::size_t>(k)];
    const std::int64_t lo = lo_[static_cast<std::size_t>(k)], hi = hi_[static_cast<std::size_t>(k)];
    k_min = std::max(k_min, std::max<std::int64_t>(lo - c, c - hi));
    k_max = std::max(k_max, std::max<std::int64_t>(std::llabs(c - lo), std::llabs(hi - c)));
  }

  const auto visit = [&](const std::array<std::int64_t, 3>& c) {
    const auto it = cells_.find(cell_hash(c));
    if (it == cells_.end()) return;
    for (const std::uint32_t i : it->second) {
      const double d = squared_distance(pts_[i], q);
      if (d < best || (d == best && i < best_idx)) {
        best = d;
        best_idx = i;
      }
    }
  };

  for (std::int64_t ring = k_min; ring <= k_max; ++ring) {
    // Points in ring k lie at distance >= (k-1)*h; stop once that strictly
    // exceeds the best (equality keeps scanning for the index tie rule).
    if (best_idx != 0xffffffffu) {
      const double lb = static_cast<double>(ring - 1) * h_;
      if (lb > 0.0 && lb * lb > best) break;
    }
    std::array<std::int64_t, 3> c{0, 0, 0};
    if (dim_ == 2) {
      for (std::int64_t dx = -ring; dx <= ring; ++dx)
        for (std::int64_t dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::llabs(dx), std::llabs(dy)) != ring) continue;
          c = {qc[0] + dx, qc[1] + dy, 0};
          visit(c);
        }
    } else {
      for (std::int64_t dx = -ring; dx <= ring; ++dx)
        for (std::int64_t dy = -ring; dy <= ring; ++dy)
          for (std::int64_t dz = -ring; dz <= ring; ++dz) {
            if (std::max(std::llabs(dx), std::max(std::llabs(dy), std::llabs(dz))) != ring) continue;
            c = {qc[0] + dx, qc[1] + dy, qc[2] + dz};
            visit(c);
          }
    }
  }
  return best_idx;
}

std::uint64_t UniformGrid::memory_bytes() const {
  std::uint64_t b = pts_.size() * static_cast<std::uint64_t>(dim_) * sizeof(double);
  b += cells_.size() * (sizeof(std::uint64_t) + sizeof(std::vector<std::uint32_t>));
  b += pts_.size() * sizeof(std::uint32_t);
  return b;
}

}  // namespace dagnn
