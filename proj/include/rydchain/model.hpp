#pragma once

#include <vector>

#include "rydchain/register.hpp"

namespace rydchain {

/// sqrt(rate) |lower><upper| on one atom.
struct JumpChannel {
  std::size_t atom = 0;
  int lower = 0;
  int upper = 0;
  double rate = 0.0;
};

/// Register + decay rates + the jump operators of the master equation.
///
/// Channels are listed for every atom (two per qubit, one per ancilla) even when
/// their rate is zero; `active_channels` drops the zero-rate ones.
class LindbladModel {
 public:
  LindbladModel(Register reg, DecayRates rates);

  const Register& reg() const { return reg_; }
  const DecayRates& rates() const { return rates_; }
  const std::vector<JumpChannel>& channels() const { return channels_; }
  std::vector<JumpChannel> active_channels() const;

  OperatorMatrix jump_operator(const JumpChannel& channel) const;
  std::vector<OperatorMatrix> jump_operators() const;

  /// Diagonal of the interaction Hamiltonian.
  const Eigen::VectorXd& interaction() const { return interaction_; }
  /// Diagonal of sum_k L_k^dagger L_k.
  const Eigen::VectorXd& decay_profile() const { return decay_; }

  /// Full Hamiltonian during a pulse: drive on the addressed atom plus interaction.
  OperatorMatrix hamiltonian(const Pulse& pulse) const;

 private:
  Register reg_;
  DecayRates rates_;
  std::vector<JumpChannel> channels_;
  Eigen::VectorXd interaction_;
  Eigen::VectorXd decay_;
};

}  // namespace rydchain
