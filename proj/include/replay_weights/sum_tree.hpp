#pragma once

#include <cstddef>
#include <vector>

namespace rw {

// Complete binary tree over a power-of-two leaf array. Leaves hold
// nonnegative priorities; internal nodes hold subtree sums (and maxima, so
// max-priority queries stay O(1)). Ancestors are recomputed from their
// children on every update, so node sums never drift from the leaves by more
// than accumulated representation error; rebuild() restores them exactly.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }

  void set(std::size_t leaf, double priority);
  double get(std::size_t leaf) const;

  double total() const { return sum_[1]; }
  double max_leaf() const { return max_[1]; }

  // leaf index whose prefix-sum interval contains `mass`; mass >= total()
  // lands in the last positive leaf
  std::size_t find_prefix(double mass) const;

  // recompute every internal node from the leaves
  void rebuild();

  // largest |node - (left + right)| relative to the node, for consistency checks
  double max_relative_node_error() const;

 private:
  std::size_t capacity_;   // requested leaf count
  std::size_t leaves_;     // rounded up to a power of two
  std::vector<double> sum_;  // 1-based heap layout, 2*leaves_ entries
  std::vector<double> max_;
};

}  // namespace rw
