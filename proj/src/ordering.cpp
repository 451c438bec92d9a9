#include "dagnn/ordering.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dagnn/rng.hpp"

namespace dagnn {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Identity: return "identity";
    case Strategy::SpatialSort: return "spatial";
    case Strategy::FarthestPoint: return "fps";
  }
  return "?";
}

InsertionOrder identity_order(std::size_t n) {
  InsertionOrder o;
  o.strategy = Strategy::Identity;
  o.permutation.resize(n);
  std::iota(o.permutation.begin(), o.permutation.end(), 0u);
  return o;
}

namespace {

// Coordinates -> transpose-format Hilbert index (Skilling, AIP 707, 2004).
void axes_to_transpose(std::uint64_t* x, int bits, int n) {
  std::uint64_t m = std::uint64_t{1} << (bits - 1), p, q, t;
  for (q = m; q > 1; q >>= 1) {
    p = q - 1;
    for (int i = 0; i < n; ++i) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
  for (int i = 1; i < n; ++i) x[i] ^= x[i - 1];
  t = 0;
  for (q = m; q > 1; q >>= 1)
    if (x[n - 1] & q) t ^= q - 1;
  for (int i = 0; i < n; ++i) x[i] ^= t;
}

std::uint64_t hilbert_key(const Point& p, const Aabb& box, double extent, int dim) {
  const int bits = dim == 2 ? 31 : 21;
  std::uint64_t x[3] = {0, 0, 0};
  const std::uint64_t top = std::uint64_t{1} << bits;
  for (int k = 0; k < dim; ++k) {
    const double t = extent > 0.0 ? (p[k] - box.min[k]) / extent : 0.0;
    auto g = static_cast<std::uint64_t>(t * static_cast<double>(top));
    if (g >= top) g = top - 1;
    x[k] = g;
  }
  axes_to_transpose(x, bits, dim);
  std::uint64_t key = 0;
  for (int b = bits - 1; b >= 0; --b)
    for (int k = 0; k < dim; ++k) key = (key << 1) | ((x[k] >> b) & 1u);
  return key;
}

void hilbert_sort_range(std::span<const Point> points, std::vector<std::uint32_t>& idx,
                        std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return;
  const int dim = points[idx[lo]].dim();
  Aabb box{points[idx[lo]], points[idx[lo]]};
  for (std::size_t i = lo; i < hi; ++i) {
    const Point& p = points[idx[i]];
    for (int k = 0; k < dim; ++k) {
      box.min[k] = std::min(box.min[k], p[k]);
      box.max[k] = std::max(box.max[k], p[k]);
    }
  }
  double extent = 0.0;
  for (int k = 0; k < dim; ++k) extent = std::max(extent, box.max[k] - box.min[k]);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
  keyed.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i)
    keyed.emplace_back(hilbert_key(points[idx[i]], box, extent, dim), idx[i]);
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = lo; i < hi; ++i) idx[i] = keyed[i - lo].second;
}

}  // namespace

InsertionOrder spatial_sort(std::span<const Point> points, std::uint64_t seed) {
  const std::size_t n = points.size();
  if (n < 1) throw std::invalid_argument("spatial_sort: empty point set");
  InsertionOrder o;
  o.strategy = Strategy::SpatialSort;
  o.permutation.resize(n);
  std::iota(o.permutation.begin(), o.permutation.end(), 0u);
  Rng rng(seed);
  rng.shuffle(o.permutation);

  // Round boundaries n, n/4, n/16, ... stopping at >= 16; earliest first.
  std::vector<std::size_t> cuts{n};
  while (cuts.back() > 16) cuts.push_back(cuts.back() / 4);
  cuts.push_back(0);
  for (std::size_t r = cuts.size() - 1; r >= 1; --r)
    hilbert_sort_range(points, o.permutation, cuts[r], cuts[r - 1]);
  return o;
}

FarthestPointSampler::FarthestPointSampler(std::span<const Point> points,
                                           std::uint32_t start_index, int dimension)
    : pts_(points), n_(points.size()), dim_(dimension), tri_(dimension) {
  if (n_ < 1) throw std::invalid_argument("fps_order: empty point set");
  if (start_index >= n_) throw std::invalid_argument("fps_order: start index out of range");
  require_distinct(points);
  trace_ = std::make_shared<BuildTrace>();

  selected_.push_back(start_index);
  min_dist_.push_back(std::numeric_limits<double>::infinity());
  trace_->encroached_by_step.push_back({});
  tri_.insert(pts_[start_index], start_index);

  current_sq_.assign(n_, -std::numeric_limits<double>::infinity());
  owner_.assign(n_, 0);
  buckets_.emplace_back();
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (i == start_index) continue;
    current_sq_[i] = squared_distance(pts_[i], pts_[start_index]);
    buckets_[0].push_back(i);
  }
  if (n_ > 1) tree_ = std::make_unique<SegmentTree>(current_sq_);
}

std::uint32_t FarthestPointSampler::step() {
  if (done()) throw std::logic_error("FarthestPointSampler: already complete");
  const auto [best, xi_raw] = tree_->argmax();
  const auto xi = static_cast<std::uint32_t>(xi_raw);
  assert(best > -std::numeric_limits<double>::infinity());
  min_dist_.push_back(std::sqrt(best));

  const auto pos = static_cast<std::uint32_t>(selected_.size());
  const VertexId hint = owner_[xi];  // bucket owner == its vertex id
  const InsertionOutcome out = tri_.insert(pts_[xi], xi, hint);
  assert(out.new_vertex == pos);
  trace_->encroached_by_step.push_back(out.encroached);

  buckets_.emplace_back();
  auto& mine = buckets_.back();
  for (const VertexId b : out.encroached) {
    auto& bucket = buckets_[b];
    std::size_t keep = 0;
    for (std::size_t r = 0; r < bucket.size(); ++r) {
      const std::uint32_t x = bucket[r];
      const double nd = squared_distance(pts_[x], pts_[xi]);
      if (nd < current_sq_[x]) {
        current_sq_[x] = nd;
        owner_[x] = pos;
        tree_->update(x, nd);
        mine.push_back(x);
      } else {
        bucket[keep++] = x;
      }
    }
    bucket.resize(keep);
  }
  // Remove the selected point from its bucket and retire it in the tree.
  auto& old_bucket = buckets_[owner_[xi]];
  old_bucket.erase(std::find(old_bucket.begin(), old_bucket.end(), xi));
  current_sq_[xi] = -std::numeric_limits<double>::infinity();
  tree_->update(xi, current_sq_[xi]);
  selected_.push_back(xi);
  return xi;
}

InsertionOrder FarthestPointSampler::finish() {
  run();
  InsertionOrder o;
  o.strategy = Strategy::FarthestPoint;
  o.permutation = selected_;
  o.fps_min_distances = min_dist_;
  o.trace = trace_;
  return o;
}

InsertionOrder fps_order(std::span<const Point> points, std::uint32_t start_index, int dimension) {
  FarthestPointSampler sampler(points, start_index, dimension);
  return sampler.finish();
}

}  // namespace dagnn
