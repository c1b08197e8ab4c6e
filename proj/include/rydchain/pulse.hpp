#pragma once

#include <cstddef>
#include <string_view>
#include <variant>

namespace rydchain {

/// Laser transition addressed by a square pulse.
enum class Transition {
  Q0R,  ///< qubit |0> <-> |r>
  Q1R,  ///< qubit |1> <-> |r>
  GE,   ///< ancilla |g> <-> |e>
};

std::string_view to_string(Transition t);

/// Resonant square drive on one atom. Area and Rabi frequency are in units where Omega = 1.
struct Pulse {
  std::size_t atom = 0;
  Transition transition = Transition::GE;
  double area = 0.0;
  double rabi = 1.0;

  double duration() const { return area / rabi; }
};

enum class FrameKind { SigmaX };

/// Instantaneous ideal single-qubit frame change on the coding levels {|0>, |1>} of a qubit atom.
struct FrameOp {
  std::size_t atom = 0;
  FrameKind op = FrameKind::SigmaX;
};

using Step = std::variant<Pulse, FrameOp>;

}  // namespace rydchain
