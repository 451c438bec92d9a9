// Exact orientation and in-sphere predicates: a semi-static floating-point
// filter (Shewchuk's stage-A error bounds) backed by exact rational
// arithmetic when the filter cannot certify a sign. Symbolic perturbation
// resolves co-spherical ties by global point index: point i carries an
// infinitesimal weight eps^(i+1), so the perturbed diagram is the regular
// triangulation limit and lower indices win.

#include <gmpxx.h>

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

#include "dagnn/geometry.hpp"

namespace dagnn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
const double kCcwErrA = (3.0 + 16.0 * kEps) * kEps;
const double kO3dErrA = (7.0 + 56.0 * kEps) * kEps;
const double kIccErrA = (10.0 + 96.0 * kEps) * kEps;
const double kIspErrA = (16.0 + 224.0 * kEps) * kEps;

// The stage-A bounds assume no intermediate under/overflow; outside this
// magnitude window the sign goes to the exact path instead.
constexpr double kPermanentLo = 1e-250;
constexpr double kPermanentHi = 1e250;

inline bool filter_usable(double permanent) {
  return std::isfinite(permanent) && permanent >= kPermanentLo && permanent <= kPermanentHi;
}

using Q = mpq_class;

inline Q qsub(double a, double b) { return Q(a) - Q(b); }

Q det2q(const Q& a0, const Q& a1, const Q& b0, const Q& b1) { return a0 * b1 - a1 * b0; }

Q det3q(const std::array<Q, 3>& a, const std::array<Q, 3>& b, const std::array<Q, 3>& c) {
  return a[0] * det2q(b[1], b[2], c[1], c[2]) - a[1] * det2q(b[0], b[2], c[0], c[2]) +
         a[2] * det2q(b[0], b[1], c[0], c[1]);
}

Q det4q(const std::array<Q, 4>& a, const std::array<Q, 4>& b, const std::array<Q, 4>& c,
        const std::array<Q, 4>& d) {
  Q det = 0;
  const std::array<const std::array<Q, 4>*, 4> rows{&a, &b, &c, &d};
  for (int r = 0; r < 4; ++r) {
    std::array<std::array<Q, 3>, 3> m;
    int k = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == r) continue;
      m[k] = {(*rows[j])[1], (*rows[j])[2], (*rows[j])[3]};
      ++k;
    }
    const Q term = (*rows[r])[0] * det3q(m[0], m[1], m[2]);
    det += (r % 2 == 0) ? term : -term;
  }
  return det;
}

inline Sign sign_q(const Q& v) { return static_cast<Sign>(sgn(v)); }

// --- orient2d: det[a-c, b-c] --------------------------------------------

Sign orient2d_exact(const double* pa, const double* pb, const double* pc) {
  const Q det = qsub(pa[0], pc[0]) * qsub(pb[1], pc[1]) - qsub(pa[1], pc[1]) * qsub(pb[0], pc[0]);
  return sign_q(det);
}

Sign orient2d(const double* pa, const double* pb, const double* pc) {
  const double detleft = (pa[0] - pc[0]) * (pb[1] - pc[1]);
  const double detright = (pa[1] - pc[1]) * (pb[0] - pc[0]);
  const double det = detleft - detright;
  const double detsum = std::fabs(detleft) + std::fabs(detright);
  if (filter_usable(detsum)) {
    const double errbound = kCcwErrA * detsum;
    if (det > errbound) return Sign::Positive;
    if (-det > errbound) return Sign::Negative;
  }
  return orient2d_exact(pa, pb, pc);
}

// --- orient3d: det[a-d, b-d, c-d] ----------------------------------------

Sign orient3d_exact(const double* pa, const double* pb, const double* pc, const double* pd) {
  std::array<Q, 3> a, b, c;
  for (int k = 0; k < 3; ++k) {
    a[k] = qsub(pa[k], pd[k]);
    b[k] = qsub(pb[k], pd[k]);
    c[k] = qsub(pc[k], pd[k]);
  }
  return sign_q(det3q(a, b, c));
}

Sign orient3d(const double* pa, const double* pb, const double* pc, const double* pd) {
  const double adx = pa[0] - pd[0], ady = pa[1] - pd[1], adz = pa[2] - pd[2];
  const double bdx = pb[0] - pd[0], bdy = pb[1] - pd[1], bdz = pb[2] - pd[2];
  const double cdx = pc[0] - pd[0], cdy = pc[1] - pd[1], cdz = pc[2] - pd[2];

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;

  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * std::fabs(adz) +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * std::fabs(bdz) +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * std::fabs(cdz);
  if (filter_usable(permanent)) {
    const double errbound = kO3dErrA * permanent;
    if (det > errbound) return Sign::Positive;
    if (-det > errbound) return Sign::Negative;
  }
  return orient3d_exact(pa, pb, pc, pd);
}

// --- incircle: det rows [(x-d), |x-d|^2] for x in a,b,c -------------------

Sign incircle_exact(const double* pa, const double* pb, const double* pc, const double* pd) {
  std::array<std::array<Q, 3>, 3> m;
  const double* rows[3] = {pa, pb, pc};
  for (int r = 0; r < 3; ++r) {
    const Q dx = qsub(rows[r][0], pd[0]);
    const Q dy = qsub(rows[r][1], pd[1]);
    m[r] = {dx, dy, dx * dx + dy * dy};
  }
  return sign_q(det3q(m[0], m[1], m[2]));
}

Sign incircle(const double* pa, const double* pb, const double* pc, const double* pd) {
  const double adx = pa[0] - pd[0], ady = pa[1] - pd[1];
  const double bdx = pb[0] - pd[0], bdy = pb[1] - pd[1];
  const double cdx = pc[0] - pd[0], cdy = pc[1] - pd[1];

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  if (filter_usable(permanent)) {
    const double errbound = kIccErrA * permanent;
    if (det > errbound) return Sign::Positive;
    if (-det > errbound) return Sign::Negative;
  }
  return incircle_exact(pa, pb, pc, pd);
}

// --- insphere: det rows [(x-e), |x-e|^2] for x in a,b,c,d ------------------

Sign insphere_exact(const double* pa, const double* pb, const double* pc, const double* pd,
                    const double* pe) {
  std::array<std::array<Q, 4>, 4> m;
  const double* rows[4] = {pa, pb, pc, pd};
  for (int r = 0; r < 4; ++r) {
    const Q dx = qsub(rows[r][0], pe[0]);
    const Q dy = qsub(rows[r][1], pe[1]);
    const Q dz = qsub(rows[r][2], pe[2]);
    m[r] = {dx, dy, dz, dx * dx + dy * dy + dz * dz};
  }
  return sign_q(det4q(m[0], m[1], m[2], m[3]));
}

Sign insphere(const double* pa, const double* pb, const double* pc, const double* pd,
              const double* pe) {
  const double aex = pa[0] - pe[0], aey = pa[1] - pe[1], aez = pa[2] - pe[2];
  const double bex = pb[0] - pe[0], bey = pb[1] - pe[1], bez = pb[2] - pe[2];
  const double cex = pc[0] - pe[0], cey = pc[1] - pe[1], cez = pc[2] - pe[2];
  const double dex = pd[0] - pe[0], dey = pd[1] - pe[1], dez = pd[2] - pe[2];

  const double aexbey = aex * bey, bexaey = bex * aey, ab = aexbey - bexaey;
  const double bexcey = bex * cey, cexbey = cex * bey, bc = bexcey - cexbey;
  const double cexdey = cex * dey, dexcey = dex * cey, cd = cexdey - dexcey;
  const double dexaey = dex * aey, aexdey = aex * dey, da = dexaey - aexdey;
  const double aexcey = aex * cey, cexaey = cex * aey, ac = aexcey - cexaey;
  const double bexdey = bex * dey, dexbey = dex * bey, bd = bexdey - dexbey;

  const double abc = aez * bc - bez * ac + cez * ab;
  const double bcd = bez * cd - cez * bd + dez * bc;
  const double cda = cez * da + dez * ac + aez * cd;
  const double dab = dez * ab + aez * bd + bez * da;

  const double alift = aex * aex + aey * aey + aez * aez;
  const double blift = bex * bex + bey * bey + bez * bez;
  const double clift = cex * cex + cey * cey + cez * cez;
  const double dlift = dex * dex + dey * dey + dez * dez;

  const double det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd);

  const double aezp = std::fabs(aez), bezp = std::fabs(bez);
  const double cezp = std::fabs(cez), dezp = std::fabs(dez);
  const double permanent =
      ((std::fabs(cexdey) + std::fabs(dexcey)) * bezp + (std::fabs(dexbey) + std::fabs(bexdey)) * cezp +
       (std::fabs(bexcey) + std::fabs(cexbey)) * dezp) *
          alift +
      ((std::fabs(dexaey) + std::fabs(aexdey)) * cezp + (std::fabs(aexcey) + std::fabs(cexaey)) * dezp +
       (std::fabs(cexdey) + std::fabs(dexcey)) * aezp) *
          blift +
      ((std::fabs(aexbey) + std::fabs(bexaey)) * dezp + (std::fabs(bexdey) + std::fabs(dexbey)) * aezp +
       (std::fabs(dexaey) + std::fabs(aexdey)) * bezp) *
          clift +
      ((std::fabs(bexcey) + std::fabs(cexbey)) * aezp + (std::fabs(cexaey) + std::fabs(aexcey)) * bezp +
       (std::fabs(aexbey) + std::fabs(bexaey)) * cezp) *
          dlift;
  if (filter_usable(permanent)) {
    const double errbound = kIspErrA * permanent;
    if (det > errbound) return Sign::Positive;
    if (-det > errbound) return Sign::Negative;
  }
  return insphere_exact(pa, pb, pc, pd, pe);
}

void check_simplex(std::span<const Point> simplex, int expected_extra) {
  if (simplex.empty()) throw std::invalid_argument("predicate: empty simplex");
  const int d = simplex[0].dim();
  if (d != 2 && d != 3) throw std::invalid_argument("predicate: dimension must be 2 or 3");
  if (simplex.size() != static_cast<std::size_t>(d + expected_extra))
    throw std::invalid_argument("predicate: wrong number of simplex points");
  for (const Point& p : simplex)
    if (p.dim() != d) throw std::invalid_argument("predicate: mixed dimensions");
}

}  // namespace

Sign orient(std::span<const Point> simplex) {
  check_simplex(simplex, 1);
  if (simplex[0].dim() == 2)
    return orient2d(simplex[0].data(), simplex[1].data(), simplex[2].data());
  // det[b-a, c-a, d-a] == det[pa-pd, pb-pd, pc-pd] with (pa..pd) = (b,c,d,a)
  return orient3d(simplex[1].data(), simplex[2].data(), simplex[3].data(), simplex[0].data());
}

Sign in_sphere(std::span<const Point> simplex, const Point& q) {
  check_simplex(simplex, 1);
  if (q.dim() != simplex[0].dim()) throw std::invalid_argument("in_sphere: dimension mismatch");
  if (simplex[0].dim() == 2)
    return incircle(simplex[0].data(), simplex[1].data(), simplex[2].data(), q.data());
  // Inside a positively oriented 3D simplex flips the raw determinant sign.
  return -insphere(simplex[0].data(), simplex[1].data(), simplex[2].data(), simplex[3].data(),
                   q.data());
}

// Perturbed test. With weights w_i = eps^(index_i + 1) the in-sphere
// determinant gains, per simplex row r, a term -w_r * B_r and, for the query,
// +w_q * orient(simplex), where B_r = (-1)^r * det of the remaining rows
// (p_j - q). Scanning participants by ascending index returns the sign of the
// first nonzero coefficient; the query's coefficient is positive by the
// orientation precondition, so the scan always terminates.
Sign in_sphere_perturbed(std::span<const Point> simplex, std::span<const std::uint32_t> indices,
                         const Point& q, std::uint32_t q_index) {
  const Sign raw = in_sphere(simplex, q);
  if (raw != Sign::Zero) return raw;
  const int d = simplex[0].dim();
  if (indices.size() != simplex.size())
    throw std::invalid_argument("in_sphere_perturbed: index count mismatch");

  std::array<int, 5> order{};  // participant slots: 0..d = simplex rows, d+1 = query
  for (int i = 0; i <= d + 1; ++i) order[static_cast<std::size_t>(i)] = i;
  auto index_of = [&](int slot) -> std::uint32_t {
    return slot == d + 1 ? q_index : indices[static_cast<std::size_t>(slot)];
  };
  std::sort(order.begin(), order.begin() + d + 2,
            [&](int a, int b) { return index_of(a) < index_of(b); });

  for (int k = 0; k <= d + 1; ++k) {
    const int slot = order[static_cast<std::size_t>(k)];
    if (slot == d + 1) return Sign::Positive;
    // B_r = (-1)^r * orient(q, remaining simplex points in row order)
    std::array<Point, 4> pts;
    pts[0] = q;
    int m = 1;
    for (int j = 0; j <= d; ++j) {
      if (j == slot) continue;
      pts[static_cast<std::size_t>(m++)] = simplex[static_cast<std::size_t>(j)];
    }
    const Sign o = orient(std::span<const Point>(pts.data(), static_cast<std::size_t>(d + 1)));
    if (o != Sign::Zero) return (slot % 2 == 0) ? -o : o;
  }
  assert(false && "perturbed in_sphere: degenerate simplex");
  return Sign::Zero;
}

namespace detail {

bool segment_contains_interior(const Point& a, const Point& b, const Point& p) {
  const int d = a.dim();
  Q d1 = 0, d2 = 0;
  for (int k = 0; k < d; ++k) {
    const Q ab = qsub(b[k], a[k]);
    d1 += (qsub(p[k], a[k])) * ab;
    d2 += (qsub(p[k], b[k])) * (-ab);
  }
  return sgn(d1) > 0 && sgn(d2) > 0;
}

// In-plane circum-circle test for coplanar 3D points, perturbed. The circle
// is pinned as a sphere through (a, b, c, a + normal); the phantom point
// carries no weight, so it is skipped by the perturbation scan.
Sign coplanar_in_circle_perturbed(const Point& a, std::uint32_t ia, const Point& b, std::uint32_t ib,
                                  const Point& c, std::uint32_t ic, const Point& p, std::uint32_t ip) {
  std::array<std::array<Q, 3>, 4> rel;  // a,b,c,phantom relative to p
  std::array<Q, 3> av, bv, cv, nv;
  for (int k = 0; k < 3; ++k) {
    av[k] = qsub(a[k], p[k]);
    bv[k] = qsub(b[k], p[k]);
    cv[k] = qsub(c[k], p[k]);
  }
  std::array<Q, 3> ab, ac;
  for (int k = 0; k < 3; ++k) {
    ab[k] = qsub(b[k], a[k]);
    ac[k] = qsub(c[k], a[k]);
  }
  nv[0] = ab[1] * ac[2] - ab[2] * ac[1];
  nv[1] = ab[2] * ac[0] - ab[0] * ac[2];
  nv[2] = ab[0] * ac[1] - ab[1] * ac[0];
  rel[0] = av;
  rel[1] = bv;
  rel[2] = cv;
  for (int k = 0; k < 3; ++k) rel[3][k] = av[k] + nv[k];

  std::array<std::array<Q, 4>, 4> m;
  for (int r = 0; r < 4; ++r) {
    m[r] = {rel[r][0], rel[r][1], rel[r][2],
            rel[r][0] * rel[r][0] + rel[r][1] * rel[r][1] + rel[r][2] * rel[r][2]};
  }
  const Q raw = det4q(m[0], m[1], m[2], m[3]);
  if (sgn(raw) != 0) return -sign_q(raw);  // 3D inside-sign convention

  std::array<std::pair<std::uint32_t, int>, 4> order{{{ia, 0}, {ib, 1}, {ic, 2}, {ip, 3}}};
  std::sort(order.begin(), order.end());
  for (const auto& [idx, slot] : order) {
    (void)idx;
    if (slot == 3) return Sign::Positive;  // query's coefficient: orient = |n|^2 > 0
    std::array<std::array<Q, 3>, 3> sub;
    int k = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == slot) continue;
      sub[static_cast<std::size_t>(k++)] = rel[static_cast<std::size_t>(j)];
    }
    const Q minor = det3q(sub[0], sub[1], sub[2]);
    if (sgn(minor) != 0) {
      const Sign s = sign_q(minor);
      return (slot % 2 == 0) ? -s : s;
    }
  }
  assert(false && "coplanar perturbed circle: degenerate facet");
  return Sign::Zero;
}

}  // namespace detail

}  // namespace dagnn
