#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dagnn {

/// Sign of an exact geometric predicate.
enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_of(double v) {
  if (v > 0.0) return Sign::Positive;
  if (v < 0.0) return Sign::Negative;
  return Sign::Zero;
}
inline Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

/// A 2D or 3D point. The dimension is carried per point; a dataset uses one
/// dimension throughout and mixing dimensions in an operation is an error.
class Point {
 public:
  Point() = default;
  Point(double x, double y) : c_{x, y, 0.0}, dim_(2) {}
  Point(double x, double y, double z) : c_{x, y, z}, dim_(3) {}

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const double* data() const { return c_.data(); }

  bool finite() const;
  bool operator==(const Point& o) const { return dim_ == o.dim_ && c_ == o.c_; }

 private:
  std::array<double, 3> c_{0.0, 0.0, 0.0};
  int dim_ = 3;
};

/// Axis-aligned bounding box; min <= max componentwise.
struct Aabb {
  Point min;
  Point max;

  int dim() const { return min.dim(); }
  Point center() const;
  /// Box scaled by `s` about its center, per axis.
  Aabb scaled(double s) const;
  bool contains(const Point& p) const;
};

Aabb bounding_box(std::span<const Point> pts);

/// Sum of squared coordinate differences, accumulated coordinate 0..d-1 left
/// to right. The order is part of the contract: query answers are compared
/// bit-for-bit against oracles using the same formula.
inline double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline double squared_distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("squared_distance: dimension mismatch");
  return squared_distance(a.data(), b.data(), a.dim());
}

// ---------------------------------------------------------------------------
// Exact predicates.
//
// orient/in_sphere are exact: a semi-static floating-point filter decides the
// easy cases and an exact rational evaluation decides the rest. Orientation
// follows the det[p1-p0, ..., pd-p0] convention, so (0,0),(1,0),(0,1) and
// (0,0,0),(1,0,0),(0,1,0),(0,0,1) are both Positive.
// ---------------------------------------------------------------------------

/// Orientation of d+1 points of dimension d.
Sign orient(std::span<const Point> simplex);

/// Raw in-sphere test: Positive iff q is strictly inside the circumsphere of
/// the positively oriented simplex; Zero on exactly co-spherical input.
Sign in_sphere(std::span<const Point> simplex, const Point& q);

/// Perturbed in-sphere test. Ties are broken by symbolic perturbation ordered
/// by global point index (lower index wins); never returns Zero. `indices`
/// are the simplex points' global indices, `q_index` the query's. All indices
/// must be distinct.
Sign in_sphere_perturbed(std::span<const Point> simplex, std::span<const std::uint32_t> indices,
                         const Point& q, std::uint32_t q_index);

namespace detail {
// Degenerate hull-facet helpers used by the triangulation; exact.
// p collinear with segment (a,b): true iff p lies strictly between a and b.
bool segment_contains_interior(const Point& a, const Point& b, const Point& p);
// p coplanar with triangle (a,b,c) in 3D: perturbed in-circle test within the
// common plane, index tie rule as above.
Sign coplanar_in_circle_perturbed(const Point& a, std::uint32_t ia, const Point& b, std::uint32_t ib,
                                  const Point& c, std::uint32_t ic, const Point& p, std::uint32_t ip);
}  // namespace detail

// ---------------------------------------------------------------------------
// Dataset hygiene.
// ---------------------------------------------------------------------------

/// Thrown when a dataset contains exact-equal duplicate points.
class duplicate_point_error : public std::invalid_argument {
 public:
  duplicate_point_error(std::string msg, std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs)
      : std::invalid_argument(std::move(msg)), duplicates(std::move(pairs)) {}
  std::vector<std::pair<std::uint32_t, std::uint32_t>> duplicates;
};

/// Throws duplicate_point_error listing offending index pairs; also rejects
/// non-finite coordinates and mixed dimensions.
void require_distinct(std::span<const Point> pts);

// ---------------------------------------------------------------------------
// Seeded generators for tests and benchmarks. Pure given (args, seed).
// ---------------------------------------------------------------------------

enum class CloudKind { Sphere, JitteredLine, UniformCube };

/// `count` points uniform in `box` scaled by `scale` (>= 1, finite) about its
/// center.
std::vector<Point> generate_queries(const Aabb& box, double scale, std::size_t count,
                                    std::uint64_t seed);

/// Synthetic datasets: Sphere = uniform on the unit (d-1)-sphere;
/// JitteredLine = x strictly increasing i/n with |jitter| <= 1e-6 on the other
/// axes; UniformCube = uniform in [0,1]^d.
std::vector<Point> generate_surface_cloud(CloudKind kind, std::size_t n, int dim,
                                          std::uint64_t seed);

}  // namespace dagnn
