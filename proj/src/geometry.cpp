#include "dagnn/geometry.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <unordered_map>

#include "dagnn/rng.hpp"

namespace dagnn {

bool Point::finite() const {
  for (int k = 0; k < dim_; ++k)
    if (!std::isfinite(c_[static_cast<std::size_t>(k)])) return false;
  return true;
}

Point Aabb::center() const {
  Point c = min;
  for (int k = 0; k < dim(); ++k) c[k] = min[k] + 0.5 * (max[k] - min[k]);
  return c;
}

Aabb Aabb::scaled(double s) const {
  Aabb out = *this;
  const Point c = center();
  for (int k = 0; k < dim(); ++k) {
    const double half = 0.5 * (max[k] - min[k]) * s;
    out.min[k] = c[k] - half;
    out.max[k] = c[k] + half;
  }
  return out;
}

bool Aabb::contains(const Point& p) const {
  for (int k = 0; k < dim(); ++k)
    if (p[k] < min[k] || p[k] > max[k]) return false;
  return true;
}

Aabb bounding_box(std::span<const Point> pts) {
  if (pts.empty()) throw std::invalid_argument("bounding_box: empty point set");
  Aabb box{pts[0], pts[0]};
  for (const Point& p : pts) {
    if (p.dim() != box.dim()) throw std::invalid_argument("bounding_box: mixed dimensions");
    for (int k = 0; k < box.dim(); ++k) {
      box.min[k] = std::min(box.min[k], p[k]);
      box.max[k] = std::max(box.max[k], p[k]);
    }
  }
  return box;
}

namespace {

std::uint64_t coord_bits(double x) {
  const double n = (x == 0.0) ? 0.0 : x;  // fold -0.0 and 0.0
  std::uint64_t u;
  std::memcpy(&u, &n, sizeof u);
  return u;
}

struct PointKeyHash {
  std::size_t operator()(const std::uint64_t& h) const { return static_cast<std::size_t>(h); }
};

}  // namespace

void require_distinct(std::span<const Point> pts) {
  if (pts.empty()) return;
  const int d = pts[0].dim();
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>, PointKeyHash> table;
  table.reserve(pts.size() * 2);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> dups;
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    const Point& p = pts[i];
    if (p.dim() != d) throw std::invalid_argument("require_distinct: mixed dimensions");
    if (!p.finite())
      throw std::invalid_argument("require_distinct: non-finite coordinates at index " +
                                  std::to_string(i));
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int k = 0; k < d; ++k) h = (h ^ coord_bits(p[k])) * 0xff51afd7ed558ccdULL;
    auto& bucket = table[h];
    for (std::uint32_t j : bucket)
      if (pts[j] == p) dups.emplace_back(j, i);
    bucket.push_back(i);
  }
  if (!dups.empty()) {
    std::ostringstream msg;
    msg << "duplicate points at indices:";
    const std::size_t shown = std::min<std::size_t>(dups.size(), 16);
    for (std::size_t k = 0; k < shown; ++k)
      msg << " (" << dups[k].first << "," << dups[k].second << ")";
    if (dups.size() > shown) msg << " ... " << dups.size() << " pairs total";
    throw duplicate_point_error(msg.str(), std::move(dups));
  }
}

std::vector<Point> generate_queries(const Aabb& box, double scale, std::size_t count,
                                    std::uint64_t seed) {
  if (!std::isfinite(scale) || scale < 1.0)
    throw std::invalid_argument("generate_queries: scale must be finite and >= 1");
  const Aabb q = box.scaled(scale);
  const int d = box.dim();
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point p = q.min;
    for (int k = 0; k < d; ++k) p[k] = q.min[k] + (q.max[k] - q.min[k]) * rng.uniform01();
    out.push_back(p);
  }
  return out;
}

std::vector<Point> generate_surface_cloud(CloudKind kind, std::size_t n, int dim,
                                          std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_surface_cloud: n must be >= 1");
  if (dim != 2 && dim != 3) throw std::invalid_argument("generate_surface_cloud: dim must be 2 or 3");
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  switch (kind) {
    case CloudKind::Sphere:
      for (std::size_t i = 0; i < n; ++i) {
        if (dim == 2) {
          const double t = 6.283185307179586476925286766559 * rng.uniform01();
          double x = std::cos(t), y = std::sin(t);
          const double r = std::sqrt(x * x + y * y);
          out.emplace_back(x / r, y / r);
        } else {
          const double z = 2.0 * rng.uniform01() - 1.0;
          const double t = 6.283185307179586476925286766559 * rng.uniform01();
          const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
          double x = s * std::cos(t), y = s * std::sin(t), zz = z;
          const double r = std::sqrt(x * x + y * y + zz * zz);
          out.emplace_back(x / r, y / r, zz / r);
        }
      }
      break;
    case CloudKind::JitteredLine:
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        const double j1 = (2.0 * rng.uniform01() - 1.0) * 1e-6;
        if (dim == 2) {
          out.emplace_back(x, j1);
        } else {
          const double j2 = (2.0 * rng.uniform01() - 1.0) * 1e-6;
          out.emplace_back(x, j1, j2);
        }
      }
      break;
    case CloudKind::UniformCube:
      for (std::size_t i = 0; i < n; ++i) {
        if (dim == 2) {
          const double x = rng.uniform01(), y = rng.uniform01();
          out.emplace_back(x, y);
        } else {
          const double x = rng.uniform01(), y = rng.uniform01(), z = rng.uniform01();
          out.emplace_back(x, y, z);
        }
      }
      break;
    default:
      throw std::invalid_argument("generate_surface_cloud: unknown kind");
  }
  return out;
}

}  // namespace dagnn
