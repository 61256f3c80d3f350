#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <vector>

#include "replay_weights/mlp.hpp"
#include "replay_weights/replay.hpp"
#include "replay_weights/rng.hpp"
#include "replay_weights/stats.hpp"

namespace rw {

using TransitionBatch = std::vector<const Transition*>;

// How the per-sample weight enters the loss gradient. The exact derivative
// of the weighted square loss carries the weight squared; the linear form is
// kept selectable for comparison runs.
enum class GradientWeighting { weight_squared, weight_linear };

struct TrainResult {
  double loss = 0.0;
  bool applied = true;  // false when a non-finite gradient rejected the step
};

// TD learners share the surface the training loop needs: signed TD errors
// for a batch, one weighted update, and an epsilon-greedy policy.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Vectord compute_td_errors(const TransitionBatch& batch) const = 0;
  virtual TrainResult train_step(const TransitionBatch& batch, const Vectord& weights) = 0;
  virtual int act_epsilon_greedy(const Eigen::VectorXd& state, double epsilon, Rng& rng) const = 0;
  virtual std::uint64_t rejected_steps() const = 0;
};

// greedy argmax with ties broken toward the lowest action index
int argmax_lowest(const Eigen::VectorXd& q);

struct TabularConfig {
  double discount = 0.95;
  double learning_rate = 0.5;
  GradientWeighting weighting = GradientWeighting::weight_squared;
};

// Dense Q table over integer states (the chain environments). The update is
// the classic per-sample rule Q(s,a) += lr * w^2 * delta, with all deltas
// taken against the pre-step table.
class TabularQLearner final : public Learner {
 public:
  TabularQLearner(int n_states, int n_actions, TabularConfig config);

  Vectord compute_td_errors(const TransitionBatch& batch) const override;
  TrainResult train_step(const TransitionBatch& batch, const Vectord& weights) override;
  int act_epsilon_greedy(const Eigen::VectorXd& state, double epsilon, Rng& rng) const override;
  std::uint64_t rejected_steps() const override { return rejected_; }

  const Eigen::MatrixXd& table() const { return table_; }
  Eigen::MatrixXd& table() { return table_; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }
  double learning_rate() const { return config_.learning_rate; }

 private:
  int state_index(const Eigen::VectorXd& state) const;

  TabularConfig config_;
  Eigen::MatrixXd table_;
  std::uint64_t rejected_ = 0;
};

struct DqnConfig {
  double discount = 0.99;
  double learning_rate = 1e-3;
  std::vector<int> hidden = {64, 64};
  int target_sync_period = 200;
  bool use_adam = true;
  GradientWeighting weighting = GradientWeighting::weight_squared;
};

// DQN with a periodically synced target copy. States are affinely mapped to
// [-1, 1] using the environment bounds before they reach the network.
class DqnLearner final : public Learner {
 public:
  DqnLearner(int state_dim, int n_actions, Eigen::VectorXd state_lower,
             Eigen::VectorXd state_upper, DqnConfig config, Rng& init_rng);

  Vectord compute_td_errors(const TransitionBatch& batch) const override;
  TrainResult train_step(const TransitionBatch& batch, const Vectord& weights) override;
  int act_epsilon_greedy(const Eigen::VectorXd& state, double epsilon, Rng& rng) const override;
  std::uint64_t rejected_steps() const override { return rejected_; }

  const MlpQNetwork& network() const { return net_; }
  MlpQNetwork& network() { return net_; }
  const MlpQNetwork& target_network() const { return target_; }
  void sync_target() { target_.set_parameters(net_.parameters()); }
  std::uint64_t train_steps_done() const { return train_steps_; }

  Eigen::MatrixXd normalize_states(const TransitionBatch& batch, bool next) const;
  Eigen::VectorXd normalize_state(const Eigen::VectorXd& state) const;

 private:
  DqnConfig config_;
  Eigen::VectorXd lower_, upper_;
  MlpQNetwork net_;
  MlpQNetwork target_;
  SgdOptimizer sgd_;
  AdamOptimizer adam_;
  std::uint64_t train_steps_ = 0;
  std::uint64_t rejected_ = 0;
};

}  // namespace rw
