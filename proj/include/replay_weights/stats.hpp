#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace rw {

template <typename Scalar>
using Vector = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using Vectord = Vector<double>;

// population standard deviation (divide by N)
template <typename Derived>
typename Derived::Scalar population_stddev(const Eigen::ArrayBase<Derived>& v) {
  using std::sqrt;
  Vector<typename Derived::Scalar> x = v;
  const auto mu = x.mean();
  return sqrt((x - mu).square().mean());
}

// median; even length averages the two middle order statistics
template <typename Derived>
typename Derived::Scalar median_of(const Eigen::ArrayBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> x = v;
  std::vector<Scalar> s(x.data(), x.data() + x.size());
  const std::size_t n = s.size();
  auto mid = s.begin() + n / 2;
  std::nth_element(s.begin(), mid, s.end());
  Scalar hi = *mid;
  if (n % 2 == 1) return hi;
  Scalar lo = *std::max_element(s.begin(), mid);
  return Scalar(0.5) * (lo + hi);
}

}  // namespace rw
