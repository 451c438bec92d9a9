#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dagnn/geometry.hpp"

namespace dagnn {

using VertexId = std::uint32_t;
using CellId = std::uint32_t;

inline constexpr VertexId kGhostVertex = 0xfffffffeu;
inline constexpr std::uint32_t kNoCell = 0xffffffffu;

/// Result of inserting one point: the new vertex and the previously inserted
/// vertices adjacent to it in the updated triangulation (during the
/// pre-simplex phase: every previously inserted vertex).
struct InsertionOutcome {
  VertexId new_vertex = 0;
  std::vector<VertexId> encroached;
};

struct LocateResult {
  bool inside = false;
  /// Containing finite cell when inside, otherwise the ghost cell whose hull
  /// facet the walk exited through.
  CellId cell = kNoCell;
};

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> issues;
};

/// Incremental Bowyer-Watson Delaunay triangulation in 2D or 3D.
///
/// The hull is closed with ghost cells (one synthetic vertex at infinity per
/// hull facet); ghosts never appear in encroached sets or neighbors().
/// Degenerate inputs are handled exactly: co-spherical ties are broken by
/// symbolic perturbation on the per-vertex global index, so the structure is
/// unique for a given point set. While the inserted prefix is affinely
/// degenerate (rank < d+1) no cells exist; the prefix is kept aside and every
/// insertion reports all prior vertices as encroached, a safe superset.
class Triangulation {
 public:
  explicit Triangulation(int dimension, std::uint64_t seed = 0);

  /// Inserts p with an explicit global index (drives the perturbation order;
  /// must be unique across the triangulation's lifetime).
  InsertionOutcome insert(const Point& p, std::uint32_t global_index,
                          std::optional<VertexId> hint = std::nullopt);
  /// Inserts p with global index = arrival order.
  InsertionOutcome insert(const Point& p, std::optional<VertexId> hint = std::nullopt);

  /// Point location by remembering stochastic walk. Requires rank == d+1.
  LocateResult locate(const Point& p, std::optional<VertexId> hint = std::nullopt) const;

  /// Vertices sharing an edge with v (pre-simplex phase: all other vertices).
  std::vector<VertexId> neighbors(VertexId v) const;

  /// Brute-force structural check: positive orientation, mutual adjacency,
  /// and the empty-circumsphere property under the perturbed predicate for
  /// every finite cell against every vertex. O(cells * vertices); test use.
  ValidationResult validate() const;

  int dimension() const { return dim_; }
  std::size_t vertex_count() const { return verts_.size(); }
  std::size_t finite_cell_count() const { return n_finite_cells_; }
  int affine_rank() const { return rank_; }
  bool full_dimensional() const { return full_dim_; }
  std::size_t pre_simplex_size() const { return full_dim_ ? 0 : pre_order_.size(); }

  const Point& point(VertexId v) const { return verts_[v].pt; }
  std::uint32_t global_index(VertexId v) const { return verts_[v].global; }

  /// Finite cells with sorted vertex ids, sorted lexicographically; a
  /// canonical form for structure comparisons.
  std::vector<std::array<VertexId, 4>> finite_cells() const;
  std::array<VertexId, 4> cell_vertices(CellId c) const;
  bool cell_is_ghost(CellId c) const;

  /// Builds a triangulation directly from explicit cells without restoring
  /// the Delaunay property (adjacency inferred, hull closed with ghosts).
  /// For validate() fixtures and diagnostics.
  static Triangulation from_cells_unchecked(int dimension, const std::vector<Point>& pts,
                                            const std::vector<std::array<VertexId, 4>>& cells);

 private:
  struct Vertex {
    Point pt;
    std::uint32_t global = 0;
    CellId incident = kNoCell;
  };
  struct Cell {
    std::array<VertexId, 4> v{};
    std::array<CellId, 4> nbr{kNoCell, kNoCell, kNoCell, kNoCell};
    std::uint32_t visit = 0;
    bool alive = false;
    bool ghost = false;
    bool conflict = false;
  };

  VertexId add_vertex(const Point& p, std::uint32_t global);
  CellId new_cell();
  void retire_cell(CellId c);
  void update_rank(VertexId v);
  void promote_to_full_dim();
  void make_first_cell_and_ghosts(const std::vector<VertexId>& basis);
  std::vector<VertexId> carve(VertexId vid, std::optional<VertexId> hint);
  bool cell_conflicts(CellId c, const Point& p, std::uint32_t p_global) const;
  LocateResult walk(const Point& p, CellId start) const;
  CellId start_cell(std::optional<VertexId> hint) const;
  Sign facet_orient_vs_point(CellId c, int slot, const Point& p) const;
  void check_point(const Point& p) const;

  int dim_;
  std::uint64_t seed_;
  bool full_dim_ = false;
  int rank_ = 0;
  std::vector<Vertex> verts_;
  std::vector<Cell> cells_;
  std::vector<CellId> free_cells_;
  std::vector<VertexId> pre_order_;
  std::vector<VertexId> basis_;
  std::size_t n_finite_cells_ = 0;
  CellId last_cell_ = kNoCell;
  mutable std::uint32_t epoch_ = 0;
  std::uint32_t next_global_ = 0;
};

}  // namespace dagnn
