#include "dagnn/query_table.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "dagnn/delaunay.hpp"

namespace dagnn {

QueryTable::QueryTable(std::vector<std::vector<std::uint32_t>> lists,
                       std::vector<std::uint32_t> insertion_to_original,
                       std::vector<double> flat_points, int dim)
    : dim_(dim), order_(std::move(insertion_to_original)), flat_points_(std::move(flat_points)) {
  const std::size_t n = order_.size();
  if (lists.size() != n || flat_points_.size() != n * static_cast<std::size_t>(dim))
    throw std::invalid_argument("QueryTable: inconsistent sizes");
  perm_.assign(n, 0);
  for (std::uint32_t pos = 0; pos < n; ++pos) perm_[order_[pos]] = pos;
  offsets_.assign(n + 1, 0);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    offsets_[i] = total;
    total += lists[i].size();
  }
  offsets_[n] = total;
  entries_.reserve(total);
  for (const auto& l : lists) entries_.insert(entries_.end(), l.begin(), l.end());
}

Point QueryTable::point_by_insertion(std::uint32_t i) const {
  const double* p = point_data(i);
  return dim_ == 2 ? Point(p[0], p[1]) : Point(p[0], p[1], p[2]);
}

namespace {

// The DP scan of Alg. 2: start at insertion index 0, walk the current list
// in order, jump on the first strictly closer entry and restart at the head
// of that entry's list. `limit` bounds usable insertion indices (prefix-k);
// lists are increasing, so a scan stops at the first out-of-range entry.
std::pair<std::uint32_t, QueryStats> run_query(const QueryTable& t, const Point& q,
                                               std::uint32_t limit) {
  const int dim = t.dimension();
  if (q.dim() != dim) throw std::invalid_argument("nearest: query dimension mismatch");
  if (!q.finite()) throw std::invalid_argument("nearest: non-finite query");
  QueryStats st;
  std::uint32_t cur = 0;
  double cur_d = squared_distance(q.data(), t.point_data(0), dim);
  const std::uint64_t* off = t.offsets().data();
  const std::uint32_t* ent = t.entries().data();

restart:
  for (std::uint64_t i = off[cur], end = off[cur + 1]; i < end; ++i) {
    ++st.visited_entries;
    const std::uint32_t cand = ent[i];
    if (cand >= limit) break;
    ++st.comparisons;
    const double d = squared_distance(q.data(), t.point_data(cand), dim);
    if (d < cur_d) {
      assert(cand > cur);
      cur = cand;
      cur_d = d;
      ++st.jumps;
      goto restart;
    }
  }
  return {cur, st};
}

}  // namespace

std::pair<std::uint32_t, QueryStats> NnsIndex::nearest(const Point& q) const {
  if (size() == 0) throw std::logic_error("nearest: empty index");
  auto [pos, st] = run_query(table_, q, static_cast<std::uint32_t>(size()));
  return {table_.original_of(pos), st};
}

std::pair<std::uint32_t, QueryStats> NnsIndex::nearest_prefix_with_stats(const Point& q,
                                                                         std::size_t k) const {
  if (k < 1 || k > size()) throw std::invalid_argument("nearest_prefix: k out of range");
  auto [pos, st] = run_query(table_, q, static_cast<std::uint32_t>(k));
  return {table_.original_of(pos), st};
}

std::uint32_t NnsIndex::nearest_prefix(const Point& q, std::size_t k) const {
  return nearest_prefix_with_stats(q, k).first;
}

ListStats NnsIndex::list_stats() const {
  ListStats s;
  const std::size_t n = size();
  if (n == 0) return s;
  s.total_entries = table_.total_entries();
  s.mean = static_cast<double>(s.total_entries) / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = table_.list(static_cast<std::uint32_t>(i)).size();
    s.max = std::max(s.max, len);
    const double d = static_cast<double>(len) - s.mean;
    acc += d * d;
  }
  s.variance = acc / static_cast<double>(n);
  s.histogram.assign(s.max + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    ++s.histogram[table_.list(static_cast<std::uint32_t>(i)).size()];
  return s;
}

std::uint64_t NnsIndex::memory_bytes() const {
  const std::uint64_t n = size();
  return n * static_cast<std::uint64_t>(dimension()) * sizeof(double)  // points
         + (n + 1) * sizeof(std::uint64_t)                             // offsets
         + table_.total_entries() * sizeof(std::uint32_t)              // entries
         + 2 * n * sizeof(std::uint32_t);                              // permutations
}

NnsIndex build(std::span<const Point> points, const InsertionOrder& order, int dimension,
               std::uint64_t seed) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("build: empty point set");
  if (order.permutation.size() != n) throw std::invalid_argument("build: order size mismatch");
  {
    std::vector<bool> hit(n, false);
    for (const std::uint32_t o : order.permutation) {
      if (o >= n || hit[o]) throw std::invalid_argument("build: order is not a permutation");
      hit[o] = true;
    }
  }
  for (const Point& p : points)
    if (p.dim() != dimension) throw std::invalid_argument("build: point dimension mismatch");
  require_distinct(points);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> flat(n * static_cast<std::size_t>(dimension));
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = points[order.permutation[i]];
    for (int k = 0; k < dimension; ++k) flat[i * static_cast<std::size_t>(dimension) + static_cast<std::size_t>(k)] = p[k];
  }

  std::vector<std::vector<std::uint32_t>> lists(n);
  std::uint64_t encroach_total = 0;

  const bool reuse_trace = order.trace && order.trace->encroached_by_step.size() == n;
  if (reuse_trace) {
    for (std::uint32_t j = 0; j < n; ++j) {
      for (const std::uint32_t x : order.trace->encroached_by_step[j]) {
        lists[x].push_back(j);
        ++encroach_total;
      }
    }
  } else {
    Triangulation tri(dimension, seed);
    const bool fp_hints = order.strategy == Strategy::FarthestPoint;
    VertexId prev = 0;
    for (std::uint32_t j = 0; j < n; ++j) {
      const Point& p = points[order.permutation[j]];
      std::optional<VertexId> hint;
      if (j > 0) {
        if (fp_hints && tri.full_dimensional()) {
          // The partial table already answers prefix queries; the nearest of
          // the first j points seeds the walk.
          std::uint32_t cur = 0;
          double cur_d = squared_distance(p.data(), flat.data(), dimension);
          const auto scan = [&](std::uint32_t owner) {
            for (const std::uint32_t cand : lists[owner]) {
              const double d = squared_distance(
                  p.data(), flat.data() + static_cast<std::size_t>(cand) * dimension, dimension);
              if (d < cur_d) {
                cur_d = d;
                return cand;
              }
            }
            return owner;
          };
          for (std::uint32_t next = scan(cur); next != cur; next = scan(cur)) cur = next;
          hint = cur;
        } else {
          hint = prev;
        }
      }
      const InsertionOutcome out = tri.insert(p, order.permutation[j], hint);
      assert(out.new_vertex == j);
      prev = out.new_vertex;
      for (const VertexId x : out.encroached) {
        lists[x].push_back(j);
        ++encroach_total;
      }
    }
  }

  QueryTable table(std::move(lists), order.permutation, std::move(flat), dimension);
  BuildInfo info;
  info.strategy = order.strategy;
  info.seed = seed;
  info.encroachment_total = encroach_total;
  info.mean_encroached = n > 1 ? static_cast<double>(encroach_total) / static_cast<double>(n - 1) : 0.0;
  info.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return NnsIndex(std::move(table), info);
}

// --- serialization ---------------------------------------------------------
// Little-endian: magic "DAGN", version u32, dim u32, n u64, permutation
// (insertion -> original) n*u64, offsets (n+1)*u64, entries total*u64,
// points n*dim f64 in insertion order.

namespace {

constexpr char kMagic[4] = {'D', 'A', 'G', 'N'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void write_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  std::uint64_t bits;
  if constexpr (sizeof(T) == 8 && std::is_floating_point_v<T>) {
    std::memcpy(&bits, &v, 8);
  } else {
    bits = static_cast<std::uint64_t>(v);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!in) throw std::runtime_error("index load: truncated file");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  if constexpr (sizeof(T) == 8 && std::is_floating_point_v<T>) {
    T v;
    std::memcpy(&v, &bits, 8);
    return v;
  } else {
    return static_cast<T>(bits);
  }
}

}  // namespace

void NnsIndex::save(std::ostream& out) const {
  out.write(kMagic, 4);
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dimension()));
  const std::uint64_t n = size();
  write_le<std::uint64_t>(out, n);
  for (std::uint64_t i = 0; i < n; ++i) write_le<std::uint64_t>(out, table_.original_of(static_cast<std::uint32_t>(i)));
  for (const std::uint64_t o : table_.offsets()) write_le<std::uint64_t>(out, o);
  for (const std::uint32_t e : table_.entries()) write_le<std::uint64_t>(out, e);
  for (const double x : table_.flat_points()) write_le<double>(out, x);
  if (!out) throw std::runtime_error("index save: write failed");
}

void NnsIndex::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("index save: cannot open " + path);
  save(f);
}

NnsIndex NnsIndex::load(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("index load: bad magic");
  const auto version = read_le<std::uint32_t>(in);
  if (version != kVersion) throw std::runtime_error("index load: unsupported version");
  const auto dim = static_cast<int>(read_le<std::uint32_t>(in));
  if (dim != 2 && dim != 3) throw std::runtime_error("index load: bad dimension");
  const auto n = read_le<std::uint64_t>(in);
  std::vector<std::uint32_t> order(n);
  for (auto& o : order) o = static_cast<std::uint32_t>(read_le<std::uint64_t>(in));
  std::vector<std::uint64_t> offsets(n + 1);
  for (auto& o : offsets) o = read_le<std::uint64_t>(in);
  std::vector<std::vector<std::uint32_t>> lists(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (offsets[i + 1] < offsets[i]) throw std::runtime_error("index load: bad offsets");
    lists[i].resize(offsets[i + 1] - offsets[i]);
    for (auto& e : lists[i]) e = static_cast<std::uint32_t>(read_le<std::uint64_t>(in));
  }
  std::vector<double> flat(n * static_cast<std::uint64_t>(dim));
  for (auto& x : flat) x = read_le<double>(in);
  QueryTable table(std::move(lists), std::move(order), std::move(flat), dim);
  return NnsIndex(std::move(table), BuildInfo{});
}

NnsIndex NnsIndex::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("index load: cannot open " + path);
  return load(f);
}

}  // namespace dagnn
