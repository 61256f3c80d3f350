#include "replay_weights/sum_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rw {

namespace {
std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}
}  // namespace

SumTree::SumTree(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("sum tree capacity must be positive");
  leaves_ = next_pow2(capacity);
  sum_.assign(2 * leaves_, 0.0);
  max_.assign(2 * leaves_, 0.0);
}

void SumTree::set(std::size_t leaf, double priority) {
  if (leaf >= capacity_) throw std::out_of_range("sum tree leaf out of range");
  if (!(priority >= 0.0) || !std::isfinite(priority)) {
    throw std::invalid_argument("sum tree priority must be finite and nonnegative");
  }
  std::size_t i = leaves_ + leaf;
  sum_[i] = priority;
  max_[i] = priority;
  for (i >>= 1; i >= 1; i >>= 1) {
    sum_[i] = sum_[2 * i] + sum_[2 * i + 1];
    max_[i] = std::max(max_[2 * i], max_[2 * i + 1]);
  }
}

double SumTree::get(std::size_t leaf) const {
  if (leaf >= capacity_) throw std::out_of_range("sum tree leaf out of range");
  return sum_[leaves_ + leaf];
}

std::size_t SumTree::find_prefix(double mass) const {
  std::size_t i = 1;
  while (i < leaves_) {
    const std::size_t left = 2 * i;
    if (mass < sum_[left] || sum_[left + 1] == 0.0) {
      i = left;
    } else {
      mass -= sum_[left];
      i = left + 1;
    }
  }
  return std::min(i - leaves_, capacity_ - 1);
}

void SumTree::rebuild() {
  for (std::size_t i = leaves_ - 1; i >= 1; --i) {
    sum_[i] = sum_[2 * i] + sum_[2 * i + 1];
    max_[i] = std::max(max_[2 * i], max_[2 * i + 1]);
  }
}

double SumTree::max_relative_node_error() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < leaves_; ++i) {
    const double expect = sum_[2 * i] + sum_[2 * i + 1];
    const double scale = std::max(1.0, std::abs(expect));
    worst = std::max(worst, std::abs(sum_[i] - expect) / scale);
  }
  return worst;
}

}  // namespace rw
