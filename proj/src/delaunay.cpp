#include "dagnn/delaunay.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dagnn {
namespace {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t point_hash(const Point& p, std::uint64_t seed) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (int k = 0; k < p.dim(); ++k) {
    std::uint64_t bits;
    const double v = p[k] == 0.0 ? 0.0 : p[k];
    std::memcpy(&bits, &v, sizeof bits);
    h = (h ^ bits) * 0xff51afd7ed558ccdULL;
  }
  return h;
}

struct FacetKey {
  std::array<VertexId, 3> v{0, 0, 0};  // sorted, unused slots zeroed
  bool operator==(const FacetKey&) const = default;
};
struct FacetKeyHash {
  std::size_t operator()(const FacetKey& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (VertexId x : k.v) h = (h ^ x) * 0xff51afd7ed558ccdULL;
    return static_cast<std::size_t>(h);
  }
};

FacetKey facet_key(const std::array<VertexId, 4>& verts, int skip, int d) {
  FacetKey k;
  int m = 0;
  for (int j = 0; j <= d; ++j)
    if (j != skip) k.v[static_cast<std::size_t>(m++)] = verts[static_cast<std::size_t>(j)];
  std::sort(k.v.begin(), k.v.begin() + m);
  return k;
}

}  // namespace

Triangulation::Triangulation(int dimension, std::uint64_t seed) : dim_(dimension), seed_(seed) {
  if (dimension != 2 && dimension != 3)
    throw std::invalid_argument("Triangulation: dimension must be 2 or 3");
}

void Triangulation::check_point(const Point& p) const {
  if (p.dim() != dim_) throw std::invalid_argument("Triangulation: point dimension mismatch");
  if (!p.finite()) throw std::invalid_argument("Triangulation: non-finite coordinates");
}

VertexId Triangulation::add_vertex(const Point& p, std::uint32_t global) {
  verts_.push_back(Vertex{p, global, kNoCell});
  return static_cast<VertexId>(verts_.size() - 1);
}

CellId Triangulation::new_cell() {
  if (!free_cells_.empty()) {
    const CellId c = free_cells_.back();
    free_cells_.pop_back();
    cells_[c] = Cell{};
    return c;
  }
  cells_.push_back(Cell{});
  return static_cast<CellId>(cells_.size() - 1);
}

void Triangulation::retire_cell(CellId c) {
  if (!cells_[c].ghost) --n_finite_cells_;
  cells_[c].alive = false;
  free_cells_.push_back(c);
}

InsertionOutcome Triangulation::insert(const Point& p, std::optional<VertexId> hint) {
  return insert(p, next_global_, hint);
}

InsertionOutcome Triangulation::insert(const Point& p, std::uint32_t global_index,
                                       std::optional<VertexId> hint) {
  check_point(p);
  InsertionOutcome out;
  if (!full_dim_) {
    for (VertexId v = 0; v < verts_.size(); ++v)
      if (verts_[v].pt == p)
        throw duplicate_point_error("insert: duplicate point", {{verts_[v].global, global_index}});
    const VertexId vid = add_vertex(p, global_index);
    next_global_ = std::max(next_global_, global_index + 1);
    pre_order_.push_back(vid);
    out.new_vertex = vid;
    out.encroached.reserve(vid);
    for (VertexId v = 0; v < vid; ++v) out.encroached.push_back(v);
    update_rank(vid);
    if (rank_ == dim_ + 1) promote_to_full_dim();
    return out;
  }
  const VertexId vid = add_vertex(p, global_index);
  try {
    out.encroached = carve(vid, hint);
  } catch (...) {
    verts_.pop_back();
    throw;
  }
  next_global_ = std::max(next_global_, global_index + 1);
  out.new_vertex = vid;
  return out;
}

void Triangulation::update_rank(VertexId v) {
  const Point& p = verts_[v].pt;
  switch (rank_) {
    case 0:
      basis_ = {v};
      rank_ = 1;
      return;
    case 1:
      basis_.push_back(v);  // points are distinct, so rank grows
      rank_ = 2;
      return;
    case 2: {
      const Point& a = verts_[basis_[0]].pt;
      const Point& b = verts_[basis_[1]].pt;
      bool collinear;
      if (dim_ == 2) {
        const Point tri[3] = {a, b, p};
        collinear = orient(std::span<const Point>(tri, 3)) == Sign::Zero;
      } else {
        collinear = true;
        for (int drop = 0; drop < 3 && collinear; ++drop) {
          const int u = (drop + 1) % 3, w = (drop + 2) % 3;
          const Point pa(a[u], a[w]), pb(b[u], b[w]), pp(p[u], p[w]);
          const Point tri[3] = {pa, pb, pp};
          if (orient(std::span<const Point>(tri, 3)) != Sign::Zero) collinear = false;
        }
      }
      if (!collinear) {
        basis_.push_back(v);
        rank_ = 3;
      }
      return;
    }
    case 3: {
      if (dim_ == 2) return;  // already full rank; promotion pending
      const Point tet[4] = {verts_[basis_[0]].pt, verts_[basis_[1]].pt, verts_[basis_[2]].pt, p};
      if (orient(std::span<const Point>(tet, 4)) != Sign::Zero) {
        basis_.push_back(v);
        rank_ = 4;
      }
      return;
    }
    default:
      return;
  }
}

void Triangulation::make_first_cell_and_ghosts(const std::vector<VertexId>& basis) {
  const int d = dim_;
  std::array<VertexId, 4> vs{};
  for (int i = 0; i <= d; ++i) vs[static_cast<std::size_t>(i)] = basis[static_cast<std::size_t>(i)];
  {
    std::array<Point, 4> pts;
    for (int i = 0; i <= d; ++i) pts[static_cast<std::size_t>(i)] = verts_[vs[static_cast<std::size_t>(i)]].pt;
    const Sign o = orient(std::span<const Point>(pts.data(), static_cast<std::size_t>(d + 1)));
    if (o == Sign::Zero) throw std::logic_error("first cell: degenerate basis");
    if (o == Sign::Negative) std::swap(vs[0], vs[1]);
  }
  const CellId c0 = new_cell();
  cells_[c0].alive = true;
  cells_[c0].ghost = false;
  cells_[c0].v = vs;
  ++n_finite_cells_;

  std::array<CellId, 4> g{};
  for (int i = 0; i <= d; ++i) {
    const CellId gi = new_cell();
    g[static_cast<std::size_t>(i)] = gi;
    Cell& gc = cells_[gi];
    gc.alive = true;
    gc.ghost = true;
    int m = 0;
    for (int j = 0; j <= d; ++j)
      if (j != i) gc.v[static_cast<std::size_t>(m++)] = vs[static_cast<std::size_t>(j)];
    // outward orientation: interior vertex v_i must be on the negative side
    if ((d - i) % 2 == 0) std::swap(gc.v[0], gc.v[1]);
    gc.v[static_cast<std::size_t>(d)] = kGhostVertex;
    cells_[c0].nbr[static_cast<std::size_t>(i)] = gi;
    gc.nbr[static_cast<std::size_t>(d)] = c0;
  }
  for (int i = 0; i <= d; ++i) {
    Cell& gc = cells_[g[static_cast<std::size_t>(i)]];
    for (int j = 0; j <= d; ++j) {
      if (j == i) continue;
      for (int s = 0; s < d; ++s) {
        if (gc.v[static_cast<std::size_t>(s)] == vs[static_cast<std::size_t>(j)]) {
          gc.nbr[static_cast<std::size_t>(s)] = g[static_cast<std::size_t>(j)];
          break;
        }
      }
    }
  }
  for (int i = 0; i <= d; ++i) verts_[vs[static_cast<std::size_t>(i)]].incident = c0;
  last_cell_ = c0;
}

void Triangulation::promote_to_full_dim() {
  full_dim_ = true;
  make_first_cell_and_ghosts(basis_);
  std::vector<VertexId> rest;
  for (VertexId v : pre_order_)
    if (std::find(basis_.begin(), basis_.end(), v) == basis_.end()) rest.push_back(v);
  pre_order_.clear();
  for (VertexId v : rest) carve(v, std::nullopt);
}

Sign Triangulation::facet_orient_vs_point(CellId c, int slot, const Point& p) const {
  const int d = dim_;
  std::array<Point, 4> pts;
  int m = 0;
  for (int j = 0; j <= d; ++j) {
    if (j == slot) continue;
    pts[static_cast<std::size_t>(m++)] = verts_[cells_[c].v[static_cast<std::size_t>(j)]].pt;
  }
  pts[static_cast<std::size_t>(m)] = p;
  return orient(std::span<const Point>(pts.data(), static_cast<std::size_t>(d + 1)));
}

CellId Triangulation::start_cell(std::optional<VertexId> hint) const {
  if (hint && *hint < verts_.size()) {
    const CellId c = verts_[*hint].incident;
    if (c != kNoCell && cells_[c].alive) return c;
  }
  return last_cell_;
}

LocateResult Triangulation::locate(const Point& p, std::optional<VertexId> hint) const {
  if (!full_dim_) throw std::logic_error("locate: triangulation rank below d+1");
  check_point(p);
  return walk(p, start_cell(hint));
}

LocateResult Triangulation::walk(const Point& p, CellId start) const {
  const int d = dim_;
  CellId cur = start;
  if (cells_[cur].ghost) cur = cells_[cur].nbr[static_cast<std::size_t>(d)];
  CellId prev = kNoCell;
  std::uint64_t rng_state = point_hash(p, seed_);

  const double fcount = static_cast<double>(std::max<std::size_t>(n_finite_cells_, 1));
  const std::size_t cap =
      32 + static_cast<std::size_t>(10.0 * std::pow(fcount, 1.0 / d) * d);

  for (std::size_t step = 0; step < cap; ++step) {
    const Cell& cell = cells_[cur];
    if (cell.ghost) return LocateResult{false, cur};  // exited the hull strictly
    const std::uint64_t offset = splitmix64(rng_state);
    bool exited = false;
    for (int j = 0; j <= d && !exited; ++j) {
      const int i = static_cast<int>((offset + static_cast<std::uint64_t>(j)) %
                                     static_cast<std::uint64_t>(d + 1));
      if (cell.nbr[static_cast<std::size_t>(i)] == prev) continue;
      const Sign s = facet_orient_vs_point(cur, i, p);
      const Sign exit_sign = ((d - i) % 2 == 0) ? Sign::Negative : Sign::Positive;
      if (s == exit_sign) {
        prev = cur;
        cur = cell.nbr[static_cast<std::size_t>(i)];
        exited = true;
      }
    }
    if (!exited) return LocateResult{true, cur};
  }

  // Exhaustive fallback: scan for a containing finite cell, then for a
  // strictly visible hull facet.
  for (CellId c = 0; c < cells_.size(); ++c) {
    if (!cells_[c].alive || cells_[c].ghost) continue;
    bool inside = true;
    for (int i = 0; i <= d && inside; ++i) {
      const Sign s = facet_orient_vs_point(c, i, p);
      const Sign exit_sign = ((d - i) % 2 == 0) ? Sign::Negative : Sign::Positive;
      if (s == exit_sign) inside = false;
    }
    if (inside) return LocateResult{true, c};
  }
  for (CellId c = 0; c < cells_.size(); ++c) {
    if (!cells_[c].alive || !cells_[c].ghost) continue;
    if (facet_orient_vs_point(c, d, p) == Sign::Positive) return LocateResult{false, c};
  }
  throw std::logic_error("locate: exhaustive fallback found no cell");
}

bool Triangulation::cell_conflicts(CellId c, const Point& p, std::uint32_t p_global) const {
  const int d = dim_;
  const Cell& cell = cells_[c];
  if (!cell.ghost) {
    std::array<Point, 4> pts;
    std::array<std::uint32_t, 4> idx{};
    for (int j = 0; j <= d; ++j) {
      const VertexId v = cell.v[static_cast<std::size_t>(j)];
      pts[static_cast<std::size_t>(j)] = verts_[v].pt;
      idx[static_cast<std::size_t>(j)] = verts_[v].global;
    }
    return in_sphere_perturbed(std::span<const Point>(pts.data(), static_cast<std::size_t>(d + 1)),
                               std::span<const std::uint32_t>(idx.data(), static_cast<std::size_t>(d + 1)),
                               p, p_global) == Sign::Positive;
  }
  // Ghost cell: strictly visible facet conflicts; on the supporting
  // hyperplane the (d-1)-dimensional circum test decides.
  const Sign o = facet_orient_vs_point(c, d, p);
  if (o == Sign::Positive) return true;
  if (o == Sign::Negative) return false;
  const VertexId a = cell.v[0], b = cell.v[1];
  if (d == 2) return detail::segment_contains_interior(verts_[a].pt, verts_[b].pt, p);
  const VertexId cc = cell.v[2];
  return detail::coplanar_in_circle_perturbed(verts_[a].pt, verts_[a].global, verts_[b].pt,
                                              verts_[b].global, verts_[cc].pt, verts_[cc].global,
                                              p, p_global) == Sign::Positive;
}

std::vector<VertexId> Triangulation::carve(VertexId vid, std::optional<VertexId> hint) {
  const int d = dim_;
  const Point p = verts_[vid].pt;  // copy: verts_ may reallocate via add_vertex callers
  const std::uint32_t pg = verts_[vid].global;

  const LocateResult loc = walk(p, start_cell(hint));
  for (int j = 0; j <= d; ++j) {
    const VertexId w = cells_[loc.cell].v[static_cast<std::size_t>(j)];
    if (w != kGhostVertex && w != vid && verts_[w].pt == p)
      throw duplicate_point_error("insert: duplicate point", {{verts_[w].global, pg}});
  }

  ++epoch_;
  std::vector<CellId> cavity;
  std::vector<std::pair<CellId, int>> boundary;
  if (!cell_conflicts(loc.cell, p, pg)) throw std::logic_error("insert: seed cell not in conflict");
  cells_[loc.cell].visit = epoch_;
  cells_[loc.cell].conflict = true;
  cavity.push_back(loc.cell);
  for (std::size_t head = 0; head < cavity.size(); ++head) {
    const CellId c = cavity[head];
    for (int i = 0; i <= d; ++i) {
      const CellId nb = cells_[c].nbr[static_cast<std::size_t>(i)];
      if (cells_[nb].visit == epoch_) {
        if (!cells_[nb].conflict) boundary.emplace_back(c, i);
        continue;
      }
      cells_[nb].visit = epoch_;
      if (cell_conflicts(nb, p, pg)) {
        cells_[nb].conflict = true;
        cavity.push_back(nb);
      } else {
        cells_[nb].conflict = false;
        boundary.emplace_back(c, i);
      }
    }
  }

  std::unordered_map<FacetKey, std::pair<CellId, int>, FacetKeyHash> open_facets;
  open_facets.reserve(boundary.size() * 2);
  std::vector<CellId> created;
  created.reserve(boundary.size());

  for (const auto& [c, i] : boundary) {
    std::array<VertexId, 4> facet{};
    int nf = 0;
    bool has_ghost = false;
    for (int j = 0; j <= d; ++j) {
      if (j == i) continue;
      const VertexId w = cells_[c].v[static_cast<std::size_t>(j)];
      if (w == kGhostVertex)
        has_ghost = true;
      else
        facet[static_cast<std::size_t>(nf++)] = w;
    }
    const CellId outside = cells_[c].nbr[static_cast<std::size_t>(i)];

    const CellId nc = new_cell();
    Cell& cell = cells_[nc];
    cell.alive = true;
    if (has_ghost) {
      cell.ghost = true;
      for (int k = 0; k < nf; ++k) cell.v[static_cast<std::size_t>(k)] = facet[static_cast<std::size_t>(k)];
      cell.v[static_cast<std::size_t>(nf)] = vid;
      cell.v[static_cast<std::size_t>(d)] = kGhostVertex;
    } else {
      cell.ghost = false;
      for (int k = 0; k < d; ++k) cell.v[static_cast<std::size_t>(k)] = facet[static_cast<std::size_t>(k)];
      cell.v[static_cast<std::size_t>(d)] = vid;
      std::array<Point, 4> pts;
      for (int k = 0; k <= d; ++k) pts[static_cast<std::size_t>(k)] = verts_[cell.v[static_cast<std::size_t>(k)]].pt;
      const Sign o = orient(std::span<const Point>(pts.data(), static_cast<std::size_t>(d + 1)));
      if (o == Sign::Zero) throw std::logic_error("insert: flat cell on cavity boundary");
      if (o == Sign::Negative) std::swap(cell.v[0], cell.v[1]);
      ++n_finite_cells_;
    }

    int slot_v = 0;
    for (int k = 0; k <= d; ++k)
      if (cell.v[static_cast<std::size_t>(k)] == vid) slot_v = k;
    cell.nbr[static_cast<std::size_t>(slot_v)] = outside;
    for (int t = 0; t <= d; ++t) {
      if (cells_[outside].nbr[static_cast<std::size_t>(t)] == c) {
        cells_[outside].nbr[static_cast<std::size_t>(t)] = nc;
        break;
      }
    }
    for (int s = 0; s <= d; ++s) {
      if (s == slot_v) continue;
      const FacetKey key = facet_key(cell.v, s, d);
      auto it = open_facets.find(key);
      if (it == open_facets.end()) {
        open_facets.emplace(key, std::make_pair(nc, s));
      } else {
        const auto [oc, os] = it->second;
        cells_[nc].nbr[static_cast<std::size_t>(s)] = oc;
        cells_[oc].nbr[static_cast<std::size_t>(os)] = nc;
        open_facets.erase(it);
      }
    }
    created.push_back(nc);
  }
  if (!open_facets.empty()) throw std::logic_error("insert: cavity boundary not closed");

  // Ghost cells face outward: the finite neighbor's opposite vertex sits on
  // the negative side of the finite facet.
  for (const CellId nc : created) {
    Cell& cell = cells_[nc];
    if (!cell.ghost) continue;
    const CellId cf = cell.nbr[static_cast<std::size_t>(d)];
    VertexId w = kGhostVertex;
    for (int j = 0; j <= d; ++j) {
      const VertexId u = cells_[cf].v[static_cast<std::size_t>(j)];
      bool in_facet = false;
      for (int k = 0; k < d; ++k)
        if (cell.v[static_cast<std::size_t>(k)] == u) in_facet = true;
      if (!in_facet) w = u;
    }
    const Sign o = facet_orient_vs_point(nc, d, verts_[w].pt);
    if (o == Sign::Zero) throw std::logic_error("insert: degenerate hull facet");
    if (o == Sign::Positive) {
      std::swap(cell.v[0], cell.v[1]);
      std::swap(cell.nbr[0], cell.nbr[1]);
    }
  }

  for (const CellId c : cavity) retire_cell(c);

  for (const CellId nc : created) {
    if (!cells_[nc].ghost) continue;
    for (int j = 0; j < d; ++j) verts_[cells_[nc].v[static_cast<std::size_t>(j)]].incident = nc;
  }
  for (const CellId nc : created) {
    if (cells_[nc].ghost) continue;
    for (int j = 0; j <= d; ++j) verts_[cells_[nc].v[static_cast<std::size_t>(j)]].incident = nc;
    last_cell_ = nc;
  }

  std::vector<VertexId> encroached;
  encroached.reserve(created.size() + 4);
  for (const CellId nc : created)
    for (int j = 0; j <= d; ++j) {
      const VertexId u = cells_[nc].v[static_cast<std::size_t>(j)];
      if (u != vid && u != kGhostVertex) encroached.push_back(u);
    }
  std::sort(encroached.begin(), encroached.end());
  encroached.erase(std::unique(encroached.begin(), encroached.end()), encroached.end());
  return encroached;
}

std::vector<VertexId> Triangulation::neighbors(VertexId v) const {
  if (v >= verts_.size()) throw std::invalid_argument("neighbors: invalid vertex handle");
  std::vector<VertexId> out;
  if (!full_dim_) {
    for (VertexId u = 0; u < verts_.size(); ++u)
      if (u != v) out.push_back(u);
    return out;
  }
  const int d = dim_;
  std::unordered_set<CellId> seen;
  std::vector<CellId> stack;
  const CellId c0 = verts_[v].incident;
  stack.push_back(c0);
  seen.insert(c0);
  while (!stack.empty()) {
    const CellId c = stack.back();
    stack.pop_back();
    const Cell& cell = cells_[c];
    for (int j = 0; j <= d; ++j) {
      const VertexId u = cell.v[static_cast<std::size_t>(j)];
      if (u != v && u != kGhostVertex) out.push_back(u);
      if (u != v) {
        const CellId nb = cell.nbr[static_cast<std::size_t>(j)];
        if (nb != kNoCell && seen.insert(nb).second) stack.push_back(nb);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::array<VertexId, 4>> Triangulation::finite_cells() const {
  std::vector<std::array<VertexId, 4>> out;
  for (const Cell& c : cells_) {
    if (!c.alive || c.ghost) continue;
    std::array<VertexId, 4> vs = c.v;
    if (dim_ == 2) vs[3] = kGhostVertex;
    std::sort(vs.begin(), vs.begin() + dim_ + 1);
    out.push_back(vs);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::array<VertexId, 4> Triangulation::cell_vertices(CellId c) const { return cells_[c].v; }
bool Triangulation::cell_is_ghost(CellId c) const { return cells_[c].ghost; }

ValidationResult Triangulation::validate() const {
  ValidationResult r;
  auto fail = [&](std::string s) {
    r.ok = false;
    if (r.issues.size() < 64) r.issues.push_back(std::move(s));
  };
  const int d = dim_;
  if (!full_dim_) {
    for (const Cell& c : cells_)
      if (c.alive) fail("pre-simplex structure has cells");
    return r;
  }

  std::unordered_map<FacetKey, int, FacetKeyHash> facet_count;
  for (CellId c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    if (!cell.alive) continue;
    const bool ghost_last = cell.v[static_cast<std::size_t>(d)] == kGhostVertex;
    if (cell.ghost != ghost_last) fail("cell " + std::to_string(c) + ": ghost flag mismatch");

    if (!cell.ghost) {
      std::array<Point, 4> pts;
      for (int j = 0; j <= d; ++j) pts[static_cast<std::size_t>(j)] = verts_[cell.v[static_cast<std::size_t>(j)]].pt;
      if (orient(std::span<const Point>(pts.data(), static_cast<std::size_t>(d + 1))) != Sign::Positive)
        fail("cell " + std::to_string(c) + ": not positively oriented");
    } else {
      const CellId cf = cell.nbr[static_cast<std::size_t>(d)];
      if (cf == kNoCell || !cells_[cf].alive || cells_[cf].ghost) {
        fail("ghost " + std::to_string(c) + ": finite facet neighbor invalid");
      } else {
        VertexId w = kGhostVertex;
        for (int j = 0; j <= d; ++j) {
          const VertexId u = cells_[cf].v[static_cast<std::size_t>(j)];
          bool in_facet = false;
          for (int k = 0; k < d; ++k)
            if (cell.v[static_cast<std::size_t>(k)] == u) in_facet = true;
          if (!in_facet) w = u;
        }
        if (w == kGhostVertex || facet_orient_vs_point(c, d, verts_[w].pt) != Sign::Negative)
          fail("ghost " + std::to_string(c) + ": hull facet not outward");
      }
    }

    for (int i = 0; i <= d; ++i) {
      const CellId nb = cell.nbr[static_cast<std::size_t>(i)];
      if (nb == kNoCell || nb >= cells_.size() || !cells_[nb].alive) {
        fail("cell " + std::to_string(c) + ": missing neighbor");
        continue;
      }
      bool back = false;
      for (int t = 0; t <= d; ++t)
        if (cells_[nb].nbr[static_cast<std::size_t>(t)] == c) back = true;
      if (!back) fail("cell " + std::to_string(c) + ": neighbor link not mutual");
      ++facet_count[facet_key(cell.v, i, d)];
    }
  }
  for (const auto& [key, cnt] : facet_count) {
    if (cnt != 2) fail("facet shared by " + std::to_string(cnt) + " cells");
  }

  // Empty circumsphere under the perturbed predicate, brute force.
  for (CellId c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    if (!cell.alive || cell.ghost) continue;
    std::array<Point, 4> pts;
    std::array<std::uint32_t, 4> idx{};
    for (int j = 0; j <= d; ++j) {
      pts[static_cast<std::size_t>(j)] = verts_[cell.v[static_cast<std::size_t>(j)]].pt;
      idx[static_cast<std::size_t>(j)] = verts_[cell.v[static_cast<std::size_t>(j)]].global;
    }
    for (VertexId w = 0; w < verts_.size(); ++w) {
      bool member = false;
      for (int j = 0; j <= d; ++j)
        if (cell.v[static_cast<std::size_t>(j)] == w) member = true;
      if (member) continue;
      if (in_sphere_perturbed(std::span<const Point>(pts.data(), static_cast<std::size_t>(d + 1)),
                              std::span<const std::uint32_t>(idx.data(), static_cast<std::size_t>(d + 1)),
                              verts_[w].pt, verts_[w].global) == Sign::Positive) {
        fail("vertex " + std::to_string(w) + " inside circumsphere of cell " + std::to_string(c));
        break;
      }
    }
    if (!r.ok && r.issues.size() >= 64) break;
  }

  std::vector<bool> covered(verts_.size(), false);
  for (const Cell& cell : cells_) {
    if (!cell.alive || cell.ghost) continue;
    for (int j = 0; j <= d; ++j) covered[cell.v[static_cast<std::size_t>(j)]] = true;
  }
  for (VertexId v = 0; v < verts_.size(); ++v)
    if (!covered[v]) fail("vertex " + std::to_string(v) + " not in any finite cell");
  return r;
}

Triangulation Triangulation::from_cells_unchecked(int dimension, const std::vector<Point>& pts,
                                                  const std::vector<std::array<VertexId, 4>>& cells) {
  Triangulation t(dimension);
  const int d = dimension;
  for (std::uint32_t i = 0; i < pts.size(); ++i) t.add_vertex(pts[i], i);
  t.next_global_ = static_cast<std::uint32_t>(pts.size());
  t.full_dim_ = true;
  t.rank_ = d + 1;

  std::unordered_map<FacetKey, std::vector<std::pair<CellId, int>>, FacetKeyHash> fmap;
  for (const auto& vs : cells) {
    const CellId c = t.new_cell();
    t.cells_[c].alive = true;
    t.cells_[c].ghost = false;
    t.cells_[c].v = vs;
    ++t.n_finite_cells_;
    t.last_cell_ = c;
    for (int i = 0; i <= d; ++i) fmap[facet_key(vs, i, d)].emplace_back(c, i);
  }
  std::vector<std::pair<CellId, int>> hull;
  for (auto& [key, owners] : fmap) {
    if (owners.size() == 2) {
      t.cells_[owners[0].first].nbr[static_cast<std::size_t>(owners[0].second)] = owners[1].first;
      t.cells_[owners[1].first].nbr[static_cast<std::size_t>(owners[1].second)] = owners[0].first;
    } else if (owners.size() == 1) {
      hull.push_back(owners[0]);
    } else {
      throw std::invalid_argument("from_cells_unchecked: facet shared by >2 cells");
    }
  }
  std::unordered_map<FacetKey, std::vector<std::pair<CellId, int>>, FacetKeyHash> gmap;
  for (const auto& [c, i] : hull) {
    const CellId g = t.new_cell();
    Cell& gc = t.cells_[g];
    gc.alive = true;
    gc.ghost = true;
    int m = 0;
    for (int j = 0; j <= d; ++j)
      if (j != i) gc.v[static_cast<std::size_t>(m++)] = t.cells_[c].v[static_cast<std::size_t>(j)];
    gc.v[static_cast<std::size_t>(d)] = kGhostVertex;
    const VertexId w = t.cells_[c].v[static_cast<std::size_t>(i)];
    if (t.facet_orient_vs_point(g, d, t.verts_[w].pt) == Sign::Positive) std::swap(gc.v[0], gc.v[1]);
    gc.nbr[static_cast<std::size_t>(d)] = c;
    t.cells_[c].nbr[static_cast<std::size_t>(i)] = g;
    for (int s = 0; s < d; ++s) gmap[facet_key(gc.v, s, d)].emplace_back(g, s);
  }
  for (auto& [key, owners] : gmap) {
    if (owners.size() != 2) throw std::invalid_argument("from_cells_unchecked: open hull");
    t.cells_[owners[0].first].nbr[static_cast<std::size_t>(owners[0].second)] = owners[1].first;
    t.cells_[owners[1].first].nbr[static_cast<std::size_t>(owners[1].second)] = owners[0].first;
  }
  for (CellId c = 0; c < t.cells_.size(); ++c) {
    if (!t.cells_[c].alive || t.cells_[c].ghost) continue;
    for (int j = 0; j <= d; ++j) t.verts_[t.cells_[c].v[static_cast<std::size_t>(j)]].incident = c;
  }
  return t;
}

}  // namespace dagnn
