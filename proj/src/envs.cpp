#include "replay_weights/envs.hpp"

#include <cmath>
#include <stdexcept>

namespace rw {

ChainMdp::ChainMdp(int n_states, double discount, double step_reward,
                   double goal_reward, std::optional<int> terminal_state)
    : n_states_(n_states), discount_(discount), terminal_(terminal_state) {
  if (n_states < 1) throw std::invalid_argument("chain needs at least one state");
  if (!(discount > 0.0 && discount < 1.0)) {
    throw std::invalid_argument("chain discount must lie in (0, 1)");
  }
  if (terminal_ && (*terminal_ < 0 || *terminal_ >= n_states)) {
    throw std::invalid_argument("terminal state out of range");
  }
  reward_table_.setConstant(n_states_, 2, step_reward);
  for (int s = 0; s < n_states_; ++s) {
    for (int a = 0; a < 2; ++a) {
      if (terminal_ && next_state(s, a) == *terminal_ && !is_terminal(s)) {
        reward_table_(s, a) = goal_reward;
      }
    }
  }
}

int ChainMdp::next_state(int state, int action) const {
  if (action == kRight) return std::min(state + 1, n_states_ - 1);
  return std::max(state - 1, 0);
}

EnvStep ChainMdp::step(int action) {
  if (is_terminal(current_)) throw std::logic_error("step on a finished chain episode");
  EnvStep out;
  out.reward = reward(current_, action);
  current_ = next_state(current_, action);
  out.terminal = is_terminal(current_);
  out.next_state = Eigen::VectorXd::Constant(1, static_cast<double>(current_));
  return out;
}

Eigen::MatrixXd value_iteration_oracle(const ChainMdp& mdp, double tol) {
  const int s_count = mdp.n_states();
  const double gamma = mdp.discount();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(s_count, 2);
  const double stop = tol * (1.0 - gamma) / gamma;
  double change = stop + 1.0;
  while (change >= stop) {
    change = 0.0;
    Eigen::MatrixXd next = q;
    for (int s = 0; s < s_count; ++s) {
      if (mdp.is_terminal(s)) {
        next.row(s).setZero();
        continue;
      }
      for (int a = 0; a < 2; ++a) {
        const int s2 = mdp.next_state(s, a);
        const double bootstrap = mdp.is_terminal(s2) ? 0.0 : q.row(s2).maxCoeff();
        next(s, a) = mdp.reward(s, a) + gamma * bootstrap;
      }
    }
    change = (next - q).cwiseAbs().maxCoeff();
    q = next;
  }
  return q;
}

Eigen::VectorXd ShapedMountainCar::reset(Rng& rng) {
  position_ = rng.uniform(-0.6, -0.4);
  velocity_ = 0.0;
  steps_ = 0;
  done_ = false;
  reached_goal_ = false;
  return Eigen::Vector2d(position_, velocity_);
}

double ShapedMountainCar::normalized_energy(double position, double velocity) {
  const double potential = 0.5 * (std::sin(3.0 * position) + 1.0);
  const double v = velocity / kMaxSpeed;
  const double kinetic = v * v;
  return 0.5 * (potential + kinetic);
}

EnvStep ShapedMountainCar::step(int action) {
  if (done_) throw std::logic_error("step on a finished mountain car episode");
  if (action < 0 || action > 2) throw std::invalid_argument("mountain car action must be 0, 1 or 2");

  velocity_ += kForce * static_cast<double>(action - 1) - kGravity * std::cos(3.0 * position_);
  velocity_ = std::clamp(velocity_, -kMaxSpeed, kMaxSpeed);
  position_ += velocity_;
  position_ = std::clamp(position_, kMinPosition, kMaxPosition);
  if (position_ <= kMinPosition && velocity_ < 0.0) velocity_ = 0.0;
  ++steps_;

  reached_goal_ = position_ >= kGoalPosition;
  done_ = reached_goal_ || steps_ >= kEpisodeCap;

  EnvStep out;
  out.next_state = Eigen::Vector2d(position_, velocity_);
  out.reward = -2.0 + (reached_goal_ ? 100.0 : 0.0) + normalized_energy(position_, velocity_);
  out.terminal = done_;
  return out;
}

namespace {

class ChainEnv final : public Env {
 public:
  ChainEnv(int n_states, double discount)
      : mdp_(n_states, discount, -0.01, 1.0, n_states - 1) {}

  int state_dim() const override { return 1; }
  int action_count() const override { return 2; }
  int max_episode_steps() const override { return 20 * mdp_.n_states(); }

  Eigen::VectorXd reset(Rng&) override {
    steps_ = 0;
    reached_goal_ = false;
    return Eigen::VectorXd::Constant(1, static_cast<double>(mdp_.reset()));
  }

  EnvStep step(int action) override {
    EnvStep out = mdp_.step(action);
    ++steps_;
    reached_goal_ = out.terminal;
    if (!out.terminal && steps_ >= max_episode_steps()) out.terminal = true;
    return out;
  }

  bool episode_succeeded() const override { return reached_goal_; }

  Eigen::VectorXd state_lower_bounds() const override {
    return Eigen::VectorXd::Constant(1, 0.0);
  }
  Eigen::VectorXd state_upper_bounds() const override {
    return Eigen::VectorXd::Constant(1, static_cast<double>(mdp_.n_states() - 1));
  }

  const ChainMdp& mdp() const { return mdp_; }

 private:
  ChainMdp mdp_;
  int steps_ = 0;
  bool reached_goal_ = false;
};

class MountainCarEnv final : public Env {
 public:
  int state_dim() const override { return 2; }
  int action_count() const override { return 3; }
  int max_episode_steps() const override { return ShapedMountainCar::kEpisodeCap; }

  Eigen::VectorXd reset(Rng& rng) override { return car_.reset(rng); }
  EnvStep step(int action) override { return car_.step(action); }
  bool episode_succeeded() const override { return car_.reached_goal(); }

  Eigen::VectorXd state_lower_bounds() const override {
    return Eigen::Vector2d(ShapedMountainCar::kMinPosition, -ShapedMountainCar::kMaxSpeed);
  }
  Eigen::VectorXd state_upper_bounds() const override {
    return Eigen::Vector2d(ShapedMountainCar::kMaxPosition, ShapedMountainCar::kMaxSpeed);
  }

 private:
  ShapedMountainCar car_;
};

bool parse_chain_id(const std::string& id, int& n_states) {
  if (id.rfind("chain-", 0) != 0) return false;
  const std::string tail = id.substr(6);
  if (tail.empty()) return false;
  for (char c : tail) {
    if (c < '0' || c > '9') return false;
  }
  n_states = std::stoi(tail);
  return n_states >= 2;
}

}  // namespace

std::unique_ptr<Env> make_env(const std::string& id, double chain_discount) {
  int n_states = 0;
  if (id == "mountaincar-shaped") return std::make_unique<MountainCarEnv>();
  if (parse_chain_id(id, n_states)) {
    return std::make_unique<ChainEnv>(n_states, chain_discount);
  }
  throw std::invalid_argument("unknown environment id: " + id);
}

bool is_known_env(const std::string& id) {
  int n = 0;
  return id == "mountaincar-shaped" || parse_chain_id(id, n);
}

}  // namespace rw
