#include "rydchain/model.hpp"

#include <cmath>

namespace rydchain {

LindbladModel::LindbladModel(Register reg, DecayRates rates) : reg_(std::move(reg)), rates_(rates) {
  rates_.validate();
  for (std::size_t i = 0; i < reg_.size(); ++i) {
    if (reg_.atom(i).kind == AtomKind::Qubit) {
      channels_.push_back({i, level::zero, level::r, rates_.gamma0});
      channels_.push_back({i, level::one, level::r, rates_.gamma1});
    } else {
      channels_.push_back({i, level::g, level::e, rates_.gammaA});
    }
  }
  interaction_ = interaction_energies(reg_);
  decay_ = Eigen::VectorXd::Zero(reg_.dimension());
  for (const auto& c : active_channels()) {
    for (Index x = 0; x < reg_.dimension(); ++x) {
      if (reg_.level_of(x, c.atom) == c.upper) decay_[x] += c.rate;
    }
  }
}

std::vector<JumpChannel> LindbladModel::active_channels() const {
  std::vector<JumpChannel> out;
  for (const auto& c : channels_) {
    if (c.rate > 0.0) out.push_back(c);
  }
  return out;
}

OperatorMatrix LindbladModel::jump_operator(const JumpChannel& channel) const {
  const int d = reg_.local_dim(channel.atom);
  Matrix local = Matrix::Zero(d, d);
  local(channel.lower, channel.upper) = std::sqrt(channel.rate);
  return embed_operator(local, channel.atom, reg_);
}

std::vector<OperatorMatrix> LindbladModel::jump_operators() const {
  std::vector<OperatorMatrix> out;
  out.reserve(channels_.size());
  for (const auto& c : channels_) out.push_back(jump_operator(c));
  return out;
}

OperatorMatrix LindbladModel::hamiltonian(const Pulse& pulse) const {
  return drive_hamiltonian(pulse, reg_) + interaction_hamiltonian(reg_);
}

}  // namespace rydchain
