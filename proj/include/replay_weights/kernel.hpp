#pragma once

// Weighted-loss kernel: maps the TD errors of one sampled mini-batch to
// per-sample loss weights. Five stages, applied to |delta|:
//
//   1. robust normalization  (center by min(mean, median), scale by stddev)
//   2. positive-preferential shrink map      d / (max(d, 0) + 1)
//   3. zero-centered Gaussian raw priority
//   4. softmax rescaling (max-subtracted)
//   5. scale-restoring compensation          ||d|| / ||p o d||
//
// All stages are pure functions of the batch; weights are treated as
// constants by the learner (no gradient flows through batch statistics).

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "replay_weights/stats.hpp"

namespace rw {

enum class NormalizationMode { combined, mean, median };
enum class CompensationNorm { l1, l2 };

struct KernelConfig {
  NormalizationMode normalization = NormalizationMode::combined;
  bool softmax = true;
  CompensationNorm compensation = CompensationNorm::l1;
  bool positive_preferential = true;
};

// Weights plus the per-stage intermediates, kept for debugging and for the
// harness's trace dumps.
template <typename Scalar>
struct WeightVector {
  Vector<Scalar> omega;
  Vector<Scalar> delta_n;  // normalized
  Vector<Scalar> delta_m;  // after shrink map
  Vector<Scalar> delta_g;  // raw priority
  Vector<Scalar> p;        // softmax weighting factor
};

template <typename Derived>
void require_finite_batch(const Eigen::ArrayBase<Derived>& errors) {
  const auto& x = errors.derived();
  if (x.size() == 0) throw std::invalid_argument("td error batch is empty");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(static_cast<double>(x[i]))) {
      std::ostringstream msg;
      msg << "td error at index " << i << " is not finite (" << x[i] << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

// (|d_j| - c) / stddev(|d|), with c the mode's center. A zero-variance batch
// normalizes to the zero vector: identical errors get identical weight and
// the division is never taken.
template <typename Derived>
Vector<typename Derived::Scalar> combined_normalize(
    const Eigen::ArrayBase<Derived>& errors, NormalizationMode mode) {
  using Scalar = typename Derived::Scalar;
  require_finite_batch(errors);
  Vector<Scalar> a = errors.abs();
  const Scalar mu = a.mean();
  const Scalar md = median_of(a);
  Scalar center;
  switch (mode) {
    case NormalizationMode::combined: center = std::min(mu, md); break;
    case NormalizationMode::mean: center = mu; break;
    default: center = md; break;
  }
  const Scalar sigma = population_stddev(a);
  if (sigma == Scalar(0)) return Vector<Scalar>::Zero(a.size());
  return (a - center) / sigma;
}

// d / (max(d, 0) + 1): identity on non-positive values, shrinks positive
// values toward zero, strictly increasing, bounded above by 1.
template <typename Derived>
Vector<typename Derived::Scalar> positive_preferential(
    const Eigen::ArrayBase<Derived>& delta_n) {
  using Scalar = typename Derived::Scalar;
  return delta_n.derived() / (delta_n.derived().max(Scalar(0)) + Scalar(1));
}

// Zero-mean Gaussian density evaluated at delta_m with the batch's own
// stddev; maximal at 0, strictly decreasing in |delta_m|. Zero variance
// yields a constant vector (the value is irrelevant after softmax).
template <typename Derived>
Vector<typename Derived::Scalar> gaussian_raw_priority(
    const Eigen::ArrayBase<Derived>& delta_m) {
  using Scalar = typename Derived::Scalar;
  const Scalar sigma = population_stddev(delta_m);
  if (sigma == Scalar(0)) return Vector<Scalar>::Ones(delta_m.size());
  const Scalar scale = Scalar(1) / (std::sqrt(Scalar(2) * Scalar(M_PI)) * sigma);
  return scale * (Scalar(-0.5) * (delta_m.derived() / sigma).square()).exp();
}

// exp(d_j) / sum exp(d_i), computed max-subtracted. Subtracting a constant
// leaves the result unchanged, so this is exact, not an approximation.
template <typename Derived>
Vector<typename Derived::Scalar> softmax_weights(
    const Eigen::ArrayBase<Derived>& delta_g) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> x = delta_g;
  Vector<Scalar> e = (x - x.maxCoeff()).exp();
  return e / e.sum();
}

// omega_j = (||d|| / ||p o d||) * p_j. If ||p o d|| is zero the loss is zero
// anyway; all-ones preserves the unweighted semantics.
template <typename DerivedP, typename DerivedD>
Vector<typename DerivedP::Scalar> compensate(
    const Eigen::ArrayBase<DerivedP>& p, const Eigen::ArrayBase<DerivedD>& errors,
    CompensationNorm norm) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != errors.size()) {
    std::ostringstream msg;
    msg << "weighting factors (" << p.size() << ") and td errors ("
        << errors.size() << ") differ in length";
    throw std::invalid_argument(msg.str());
  }
  Vector<Scalar> weighted = p.derived() * errors.derived();
  Scalar num, den;
  if (norm == CompensationNorm::l1) {
    num = errors.abs().sum();
    den = weighted.abs().sum();
  } else {
    num = std::sqrt(errors.square().sum());
    den = std::sqrt(weighted.square().sum());
  }
  if (den == Scalar(0)) return Vector<Scalar>::Ones(p.size());
  return (num / den) * p.derived();
}

// Full pipeline. Softmax off passes the raw priorities straight to
// compensation; shrink map off passes delta_n through unchanged.
template <typename Derived>
WeightVector<typename Derived::Scalar> compute_weights(
    const Eigen::ArrayBase<Derived>& errors, const KernelConfig& config = {}) {
  using Scalar = typename Derived::Scalar;
  WeightVector<Scalar> out;
  out.delta_n = combined_normalize(errors, config.normalization);
  out.delta_m = config.positive_preferential ? positive_preferential(out.delta_n)
                                             : out.delta_n;
  out.delta_g = gaussian_raw_priority(out.delta_m);
  out.p = config.softmax ? softmax_weights(out.delta_g) : out.delta_g;
  out.omega = compensate(out.p, errors, config.compensation);
  return out;
}

// (1/N) sum (w_j d_j)^2
template <typename DerivedD, typename DerivedW>
typename DerivedD::Scalar weighted_loss(const Eigen::ArrayBase<DerivedD>& errors,
                                        const Eigen::ArrayBase<DerivedW>& omega) {
  using Scalar = typename DerivedD::Scalar;
  if (errors.size() != omega.size()) {
    std::ostringstream msg;
    msg << "td errors (" << errors.size() << ") and weights (" << omega.size()
        << ") differ in length";
    throw std::invalid_argument(msg.str());
  }
  return (omega.derived() * errors.derived()).square().sum() /
         Scalar(errors.size());
}

}  // namespace rw
