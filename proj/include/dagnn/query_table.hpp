#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dagnn/geometry.hpp"
#include "dagnn/ordering.hpp"

namespace dagnn {

/// Counters for one query.
struct QueryStats {
  std::uint64_t comparisons = 0;      // squared-distance evaluations
  std::uint64_t jumps = 0;            // list switches
  std::uint64_t visited_entries = 0;  // list entries scanned
};

struct ListStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance
  std::size_t max = 0;
  std::uint64_t total_entries = 0;
  std::vector<std::uint64_t> histogram;  // histogram[len] = #lists of that length
};

/// The Query Table: per insertion index i, the strictly increasing list of
/// later insertion indices that encroached on point i's cell, plus the
/// insertion permutation. Lists are stored flattened (CSR).
class QueryTable {
 public:
  QueryTable() = default;
  QueryTable(std::vector<std::vector<std::uint32_t>> lists,
             std::vector<std::uint32_t> insertion_to_original, std::vector<double> flat_points,
             int dim);

  std::size_t size() const { return order_.size(); }
  int dimension() const { return dim_; }

  std::span<const std::uint32_t> list(std::uint32_t insertion_index) const {
    return {entries_.data() + offsets_[insertion_index],
            entries_.data() + offsets_[insertion_index + 1]};
  }
  std::uint64_t total_entries() const { return entries_.size(); }

  /// insertion position -> original index
  std::uint32_t original_of(std::uint32_t insertion_index) const { return order_[insertion_index]; }
  /// original index -> insertion position
  std::uint32_t insertion_of(std::uint32_t original_index) const { return perm_[original_index]; }
  const std::vector<std::uint32_t>& insertion_order() const { return order_; }

  const double* point_data(std::uint32_t insertion_index) const {
    return flat_points_.data() + static_cast<std::size_t>(insertion_index) * dim_;
  }
  Point point_by_insertion(std::uint32_t insertion_index) const;

  const std::vector<std::uint64_t>& offsets() const { return offsets_; }
  const std::vector<std::uint32_t>& entries() const { return entries_; }
  const std::vector<double>& flat_points() const { return flat_points_; }

 private:
  int dim_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> entries_;
  std::vector<std::uint32_t> order_;  // insertion -> original
  std::vector<std::uint32_t> perm_;   // original -> insertion
  std::vector<double> flat_points_;   // insertion order, dim_ doubles per point
};

struct BuildInfo {
  Strategy strategy = Strategy::Identity;
  std::uint64_t seed = 0;
  double build_seconds = 0.0;
  std::uint64_t encroachment_total = 0;  // sum over insertions of |encroached|
  double mean_encroached = 0.0;          // measured Delaunay-degree constant
};

/// The queryable artifact: immutable after build.
class NnsIndex {
 public:
  NnsIndex() = default;
  NnsIndex(QueryTable table, BuildInfo info) : table_(std::move(table)), info_(info) {}

  const QueryTable& table() const { return table_; }
  const BuildInfo& info() const { return info_; }
  std::size_t size() const { return table_.size(); }
  int dimension() const { return table_.dimension(); }

  /// Exact nearest neighbor of q (original index). Ties: smallest squared
  /// distance, then smallest insertion index.
  std::pair<std::uint32_t, QueryStats> nearest(const Point& q) const;

  /// Nearest among the first k points in insertion order, 1 <= k <= n.
  std::uint32_t nearest_prefix(const Point& q, std::size_t k) const;
  std::pair<std::uint32_t, QueryStats> nearest_prefix_with_stats(const Point& q,
                                                                 std::size_t k) const;

  ListStats list_stats() const;

  /// Analytic memory footprint of the query structures, bytes.
  std::uint64_t memory_bytes() const;

  void save(const std::string& path) const;
  void save(std::ostream& out) const;
  static NnsIndex load(const std::string& path);
  static NnsIndex load(std::istream& in);

 private:
  QueryTable table_;
  BuildInfo info_;
};

/// Builds the Query Table by inserting `points` in `order` into an
/// incremental triangulation, appending each insertion index to the lists of
/// the vertices it encroaches. FarthestPoint orders carrying a trace reuse
/// the coupled run's encroachment sets; fresh FarthestPoint builds locate via
/// a nearest-prefix query on the partial table.
NnsIndex build(std::span<const Point> points, const InsertionOrder& order, int dimension,
               std::uint64_t seed = 0);

}  // namespace dagnn
