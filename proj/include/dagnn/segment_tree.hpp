#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dagnn {

/// Array-based max segment tree with argmax, point updates in O(log n).
/// Ties resolve to the smallest index.
class SegmentTree {
 public:
  explicit SegmentTree(std::span<const double> keys) {
    if (keys.empty()) throw std::invalid_argument("SegmentTree: empty key array");
    n_ = keys.size();
    base_ = std::bit_ceil(n_);
    nodes_.assign(2 * base_, {-std::numeric_limits<double>::infinity(), 0});
    for (std::size_t i = 0; i < base_; ++i) {
      nodes_[base_ + i].second = static_cast<std::uint32_t>(i);
      if (i < n_) nodes_[base_ + i].first = keys[i];
    }
    for (std::size_t i = base_ - 1; i >= 1; --i) nodes_[i] = combine(nodes_[2 * i], nodes_[2 * i + 1]);
  }

  std::size_t size() const { return n_; }
  double key(std::size_t i) const { return nodes_[base_ + check(i)].first; }

  void update(std::size_t i, double v) {
    std::size_t k = base_ + check(i);
    nodes_[k].first = v;
    for (k >>= 1; k >= 1; k >>= 1) nodes_[k] = combine(nodes_[2 * k], nodes_[2 * k + 1]);
  }

  /// (max value, smallest index attaining it).
  std::pair<double, std::size_t> argmax() const {
    return {nodes_[1].first, nodes_[1].second};
  }

 private:
  using Node = std::pair<double, std::uint32_t>;
  static Node combine(const Node& l, const Node& r) { return r.first > l.first ? r : l; }
  std::size_t check(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("SegmentTree: index out of range");
    return i;
  }

  std::size_t n_ = 0;
  std::size_t base_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace dagnn
