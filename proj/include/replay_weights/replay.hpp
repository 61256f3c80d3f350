#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "replay_weights/rng.hpp"
#include "replay_weights/stats.hpp"
#include "replay_weights/sum_tree.hpp"

namespace rw {

struct Transition {
  Eigen::VectorXd state;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool terminal = false;
};

// FIFO ring buffer with uniform i.i.d. sampling (with replacement).
class UniformBuffer {
 public:
  explicit UniformBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t slot) const { return storage_[slot]; }

  std::vector<std::size_t> sample_indices(std::size_t n, Rng& rng) const;

  std::size_t write_cursor() const { return cursor_; }

 private:
  std::size_t capacity_;
  std::vector<Transition> storage_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;

  friend class SnapshotCodec;
};

struct PerConfig {
  double alpha = 0.6;            // priority exponent
  double beta_start = 0.4;       // IS exponent, annealed linearly to beta_end
  double beta_end = 1.0;
  double epsilon_priority = 1e-6;  // keeps every priority strictly positive
};

// beta after `steps_done` of `horizon` training steps
double beta_at(const PerConfig& cfg, std::uint64_t steps_done, std::uint64_t horizon);

struct PrioritizedSample {
  std::size_t slot = 0;
  std::uint64_t stamp = 0;  // serial of the stored transition, for staleness checks
  double is_weight = 1.0;
};

// Proportional prioritized buffer over a sum tree. The tree stores
// priority^alpha directly; sampling draws n independent masses over the root
// total and descends. New transitions enter at the current maximum stored
// priority (1 when empty) so they are sampled at least once.
class PrioritizedBuffer {
 public:
  PrioritizedBuffer(std::size_t capacity, PerConfig config);

  void push(Transition t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t slot) const { return storage_[slot]; }
  const PerConfig& config() const { return config_; }

  std::vector<PrioritizedSample> sample(std::size_t n, double beta, Rng& rng) const;

  // leaf_i := (|td_error_i| + epsilon)^alpha; entries whose slot has been
  // overwritten since sampling are skipped and counted
  void update_priorities(const std::vector<PrioritizedSample>& refs,
                         const Vectord& td_errors);

  double leaf_priority(std::size_t slot) const { return tree_.get(slot); }
  double total_priority() const { return tree_.total(); }
  std::uint64_t stale_update_count() const { return stale_updates_; }
  const SumTree& tree() const { return tree_; }

 private:
  std::size_t capacity_;
  PerConfig config_;
  std::vector<Transition> storage_;
  std::vector<std::uint64_t> stamps_;
  SumTree tree_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
  std::uint64_t next_stamp_ = 0;
  std::uint64_t stale_updates_ = 0;

  friend class SnapshotCodec;
};

// Element-wise product of PER importance weights and kernel weights; the
// combined multipliers feed the same weighted loss.
Vectord compose_per_pbwl(const Vectord& is_weights, const Vectord& pbwl_omegas);

}  // namespace rw
