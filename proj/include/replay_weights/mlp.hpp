#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "replay_weights/rng.hpp"

namespace rw {

// Small feedforward Q network: tanh hidden layers, linear output row per
// action. Parameters are exposed as one flat vector (per layer: the weight
// matrix in column-major order, then the bias) so optimizers and checkpoints
// can treat the network as a point in R^K.
class MlpQNetwork {
 public:
  MlpQNetwork(int input_dim, std::vector<int> hidden, int n_actions, Rng& init_rng);

  int input_dim() const { return input_dim_; }
  int n_actions() const { return n_actions_; }
  const std::vector<int>& layer_sizes() const { return sizes_; }

  Eigen::Index parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  Eigen::VectorXd forward(const Eigen::VectorXd& state) const;
  // states are columns; returns actions x N
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& states) const;

  // gradient of sum_j coeffs[j] * Q(state_j, action_j) w.r.t. the flat
  // parameter vector
  Eigen::VectorXd gradient(const Eigen::MatrixXd& states, const std::vector<int>& actions,
                           const Eigen::VectorXd& coeffs) const;

 private:
  int input_dim_;
  int n_actions_;
  std::vector<int> sizes_;  // input, hidden..., actions
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

// checkpoint: <prefix>.bin holds the flat parameters as little-endian
// doubles, <prefix>.json describes layer sizes so the file is self-contained
void save_checkpoint(const MlpQNetwork& net, const std::string& prefix);
MlpQNetwork load_checkpoint(const std::string& prefix);

class SgdOptimizer {
 public:
  explicit SgdOptimizer(double learning_rate) : lr_(learning_rate) {}
  void apply(Eigen::VectorXd& params, const Eigen::VectorXd& grad) { params -= lr_ * grad; }

 private:
  double lr_;
};

class AdamOptimizer {
 public:
  AdamOptimizer(double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                double epsilon = 1e-8)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

  void apply(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

 private:
  double lr_, beta1_, beta2_, eps_;
  Eigen::VectorXd m_, v_;
  long t_ = 0;
};

}  // namespace rw
