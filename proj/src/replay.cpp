#include "replay_weights/replay.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rw {

UniformBuffer::UniformBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("buffer capacity must be positive");
  storage_.resize(capacity);
}

void UniformBuffer::push(Transition t) {
  storage_[cursor_] = std::move(t);
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::vector<std::size_t> UniformBuffer::sample_indices(std::size_t n, Rng& rng) const {
  if (size_ < n) {
    std::ostringstream msg;
    msg << "cannot sample " << n << " transitions from a buffer holding " << size_;
    throw std::runtime_error(msg.str());
  }
  std::vector<std::size_t> out(n);
  const double m = static_cast<double>(size_);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = std::min(static_cast<std::size_t>(rng.uniform01() * m), size_ - 1);
  }
  return out;
}

double beta_at(const PerConfig& cfg, std::uint64_t steps_done, std::uint64_t horizon) {
  if (horizon == 0) return cfg.beta_end;
  const double f = std::min(1.0, static_cast<double>(steps_done) / static_cast<double>(horizon));
  return cfg.beta_start + (cfg.beta_end - cfg.beta_start) * f;
}

PrioritizedBuffer::PrioritizedBuffer(std::size_t capacity, PerConfig config)
    : capacity_(capacity), config_(config), tree_(capacity == 0 ? 1 : capacity) {
  if (capacity == 0) throw std::invalid_argument("buffer capacity must be positive");
  if (!(config_.epsilon_priority > 0.0)) {
    throw std::invalid_argument("epsilon_priority must be positive");
  }
  storage_.resize(capacity);
  stamps_.assign(capacity, 0);
}

void PrioritizedBuffer::push(Transition t) {
  const double priority = size_ == 0 ? 1.0 : tree_.max_leaf();
  storage_[cursor_] = std::move(t);
  stamps_[cursor_] = ++next_stamp_;
  tree_.set(cursor_, priority);
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::vector<PrioritizedSample> PrioritizedBuffer::sample(std::size_t n, double beta,
                                                         Rng& rng) const {
  if (size_ < n) {
    std::ostringstream msg;
    msg << "cannot sample " << n << " transitions from a buffer holding " << size_;
    throw std::runtime_error(msg.str());
  }
  const double total = tree_.total();
  if (!(total > 0.0)) throw std::runtime_error("all priorities are zero; cannot sample");

  std::vector<PrioritizedSample> out(n);
  const double m = static_cast<double>(size_);
  double max_raw = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t slot = tree_.find_prefix(rng.uniform01() * total);
    const double prob = tree_.get(slot) / total;
    out[j].slot = slot;
    out[j].stamp = stamps_[slot];
    out[j].is_weight = std::pow(m * prob, -beta);
    max_raw = std::max(max_raw, out[j].is_weight);
  }
  for (auto& s : out) s.is_weight /= max_raw;
  return out;
}

void PrioritizedBuffer::update_priorities(const std::vector<PrioritizedSample>& refs,
                                          const Vectord& td_errors) {
  if (static_cast<Eigen::Index>(refs.size()) != td_errors.size()) {
    throw std::invalid_argument("priority update batch length mismatch");
  }
  for (std::size_t j = 0; j < refs.size(); ++j) {
    const auto& ref = refs[j];
    if (stamps_[ref.slot] != ref.stamp) {
      ++stale_updates_;  // slot overwritten since sampling
      continue;
    }
    const double p = std::abs(td_errors[static_cast<Eigen::Index>(j)]) +
                     config_.epsilon_priority;
    tree_.set(ref.slot, std::pow(p, config_.alpha));
  }
}

Vectord compose_per_pbwl(const Vectord& is_weights, const Vectord& pbwl_omegas) {
  if (is_weights.size() != pbwl_omegas.size()) {
    throw std::invalid_argument("importance weights and kernel weights differ in length");
  }
  return is_weights * pbwl_omegas;
}

}  // namespace rw
