#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>

#include "replay_weights/rng.hpp"

namespace rw {

struct EnvStep {
  Eigen::VectorXd next_state;
  double reward = 0.0;
  bool terminal = false;
};

// Minimal environment surface the harness trains against. Environments are
// value objects; independent instances run in parallel workers freely.
class Env {
 public:
  virtual ~Env() = default;
  virtual int state_dim() const = 0;
  virtual int action_count() const = 0;
  virtual int max_episode_steps() const = 0;
  virtual Eigen::VectorXd reset(Rng& rng) = 0;
  virtual EnvStep step(int action) = 0;
  // whether the episode that just ended reached its goal (vs timing out)
  virtual bool episode_succeeded() const = 0;
  virtual Eigen::VectorXd state_lower_bounds() const = 0;
  virtual Eigen::VectorXd state_upper_bounds() const = 0;
};

// Deterministic chain of states with {left, right} actions. Right walks
// toward the terminal end, left walks back (saturating at state 0). Entering
// the terminal state pays goal_reward, every other move pays step_reward.
// With no terminal state the chain becomes a continuing MDP, which gives the
// value-iteration tests closed-form solutions.
class ChainMdp {
 public:
  static constexpr int kLeft = 0;
  static constexpr int kRight = 1;

  ChainMdp(int n_states, double discount, double step_reward = -0.01,
           double goal_reward = 1.0, std::optional<int> terminal_state = std::nullopt);

  int n_states() const { return n_states_; }
  int n_actions() const { return 2; }
  double discount() const { return discount_; }
  std::optional<int> terminal_state() const { return terminal_; }

  int next_state(int state, int action) const;
  double reward(int state, int action) const { return reward_table_(state, action); }
  bool is_terminal(int state) const { return terminal_ && *terminal_ == state; }

  // stateful episode interface
  int reset() { current_ = 0; return current_; }
  int current_state() const { return current_; }
  EnvStep step(int action);

 private:
  int n_states_;
  double discount_;
  std::optional<int> terminal_;
  Eigen::MatrixXd reward_table_;  // |S| x |A|
  int current_ = 0;
};

// Bellman-optimal Q table by value iteration, iterated until successive
// tables differ by less than tol * (1 - gamma) / gamma in sup norm, which
// bounds the distance to the fixed point by tol.
Eigen::MatrixXd value_iteration_oracle(const ChainMdp& mdp, double tol = 1e-10);

// Mountain car with dense shaping: -2 per step, +100 on reaching the goal
// position, plus the normalized mechanical energy of the new state. Energy
// is the mean of potential (hill height sin(3x) rescaled to [0,1] over the
// position bounds) and kinetic ((v/v_max)^2), so it always lies in [0,1].
class ShapedMountainCar {
 public:
  static constexpr double kMinPosition = -1.2;
  static constexpr double kMaxPosition = 0.6;
  static constexpr double kMaxSpeed = 0.07;
  static constexpr double kGoalPosition = 0.5;
  static constexpr double kForce = 0.001;
  static constexpr double kGravity = 0.0025;
  static constexpr int kEpisodeCap = 200;

  Eigen::VectorXd reset(Rng& rng);
  EnvStep step(int action);  // 0 push-left, 1 no-op, 2 push-right

  double position() const { return position_; }
  double velocity() const { return velocity_; }
  bool done() const { return done_; }
  bool reached_goal() const { return reached_goal_; }
  int steps_taken() const { return steps_; }

  static double normalized_energy(double position, double velocity);

 private:
  double position_ = -0.5;
  double velocity_ = 0.0;
  int steps_ = 0;
  bool done_ = true;
  bool reached_goal_ = false;
};

// Environment ids: "chain-N" (e.g. "chain-10") and "mountaincar-shaped".
std::unique_ptr<Env> make_env(const std::string& id, double chain_discount = 0.95);
bool is_known_env(const std::string& id);

}  // namespace rw
