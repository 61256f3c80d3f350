#include "replay_weights/mlp.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rw {

MlpQNetwork::MlpQNetwork(int input_dim, std::vector<int> hidden, int n_actions,
                         Rng& init_rng)
    : input_dim_(input_dim), n_actions_(n_actions) {
  if (input_dim < 1 || n_actions < 1) {
    throw std::invalid_argument("network needs at least one input and one action");
  }
  sizes_.push_back(input_dim);
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("hidden layer sizes must be positive");
    sizes_.push_back(h);
  }
  sizes_.push_back(n_actions);

  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      w.data()[j] = init_rng.uniform(-bound, bound);
    }
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(fan_out));
  }
}

Eigen::Index MlpQNetwork::parameter_count() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

Eigen::VectorXd MlpQNetwork::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    flat.segment(at, weights_[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(weights_[l].data(), weights_[l].size());
    at += weights_[l].size();
    flat.segment(at, biases_[l].size()) = biases_[l];
    at += biases_[l].size();
  }
  return flat;
}

void MlpQNetwork::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) {
    throw std::invalid_argument("flat parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(weights_[l].data(), weights_[l].size()) =
        flat.segment(at, weights_[l].size());
    at += weights_[l].size();
    biases_[l] = flat.segment(at, biases_[l].size());
    at += biases_[l].size();
  }
}

Eigen::MatrixXd MlpQNetwork::forward_batch(const Eigen::MatrixXd& states) const {
  if (states.rows() != input_dim_) {
    throw std::invalid_argument("state dimension does not match the network input");
  }
  Eigen::MatrixXd x = states;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = (weights_[l] * x).colwise() + biases_[l];
    if (l + 1 < weights_.size()) {
      x = z.array().tanh().matrix();
    } else {
      x = std::move(z);
    }
  }
  return x;
}

Eigen::VectorXd MlpQNetwork::forward(const Eigen::VectorXd& state) const {
  return forward_batch(state);
}

Eigen::VectorXd MlpQNetwork::gradient(const Eigen::MatrixXd& states,
                                      const std::vector<int>& actions,
                                      const Eigen::VectorXd& coeffs) const {
  const Eigen::Index n = states.cols();
  if (static_cast<Eigen::Index>(actions.size()) != n || coeffs.size() != n) {
    throw std::invalid_argument("gradient batch length mismatch");
  }
  if (states.rows() != input_dim_) {
    throw std::invalid_argument("state dimension does not match the network input");
  }

  // forward, keeping activations
  std::vector<Eigen::MatrixXd> activations;  // activations[0] = inputs
  activations.reserve(weights_.size() + 1);
  activations.push_back(states);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = (weights_[l] * activations.back()).colwise() + biases_[l];
    if (l + 1 < weights_.size()) {
      activations.push_back(z.array().tanh().matrix());
    } else {
      activations.push_back(std::move(z));
    }
  }

  // seed: d/dQ of sum_j c_j Q(s_j, a_j)
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(n_actions_, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (actions[j] < 0 || actions[j] >= n_actions_) {
      throw std::invalid_argument("action index out of range in gradient batch");
    }
    delta(actions[j], j) = coeffs[j];
  }

  Eigen::VectorXd flat = Eigen::VectorXd::Zero(parameter_count());
  Eigen::Index at = flat.size();
  for (std::size_t l = weights_.size(); l-- > 0;) {
    Eigen::MatrixXd dw = delta * activations[l].transpose();
    Eigen::VectorXd db = delta.rowwise().sum();
    at -= biases_[l].size();
    flat.segment(at, biases_[l].size()) = db;
    at -= weights_[l].size();
    flat.segment(at, weights_[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(dw.data(), dw.size());
    if (l > 0) {
      // tanh' = 1 - tanh^2, applied to the stored activation
      delta = ((weights_[l].transpose() * delta).array() *
               (1.0 - activations[l].array().square()))
                  .matrix();
    }
  }
  return flat;
}

void AdamOptimizer::apply(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (m_.size() != grad.size()) {
    m_ = Eigen::VectorXd::Zero(grad.size());
    v_ = Eigen::VectorXd::Zero(grad.size());
    t_ = 0;
  }
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.array().square().matrix();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -=
      lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

void save_checkpoint(const MlpQNetwork& net, const std::string& prefix) {
  const Eigen::VectorXd flat = net.parameters();
  std::ofstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + prefix + ".bin for writing");
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    const auto u = std::bit_cast<std::uint64_t>(flat[i]);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(u >> (8 * k));
    bin.write(reinterpret_cast<const char*>(b), 8);
  }

  nlohmann::json meta;
  meta["layer_sizes"] = net.layer_sizes();
  meta["parameter_count"] = net.parameter_count();
  meta["activation"] = "tanh";
  std::ofstream side(prefix + ".json");
  if (!side) throw std::runtime_error("cannot open " + prefix + ".json for writing");
  side << meta.dump(2) << "\n";
}

MlpQNetwork load_checkpoint(const std::string& prefix) {
  std::ifstream side(prefix + ".json");
  if (!side) throw std::runtime_error("cannot open " + prefix + ".json");
  nlohmann::json meta = nlohmann::json::parse(side);
  const std::vector<int> sizes = meta.at("layer_sizes").get<std::vector<int>>();
  if (sizes.size() < 2) throw std::runtime_error("checkpoint sidecar lists too few layers");

  Rng dummy(0);
  std::vector<int> hidden(sizes.begin() + 1, sizes.end() - 1);
  MlpQNetwork net(sizes.front(), hidden, sizes.back(), dummy);

  std::ifstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + prefix + ".bin");
  Eigen::VectorXd flat(net.parameter_count());
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    unsigned char b[8];
    bin.read(reinterpret_cast<char*>(b), 8);
    if (!bin) throw std::runtime_error("checkpoint truncated");
    std::uint64_t u = 0;
    for (int k = 0; k < 8; ++k) u |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    flat[i] = std::bit_cast<double>(u);
  }
  net.set_parameters(flat);
  return net;
}

}  // namespace rw
