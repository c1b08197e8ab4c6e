#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydchain/pulse.hpp"
#include "rydchain/register.hpp"
#include "rydchain/types.hpp"

namespace rydchain {

enum class GateKind { ModifiedCZ, CNOT };
enum class Variant { Direct, SigmaXWrapped };

std::string_view to_string(GateKind kind);
std::string_view to_string(Variant variant);
GateKind parse_gate_kind(std::string_view s);
Variant parse_variant(std::string_view s);

struct GateSpec {
  GateKind kind = GateKind::ModifiedCZ;
  int n_ancilla = 0;
  Variant variant = Variant::Direct;

  /// SigmaXWrapped for the modified CZ at odd n_ancilla, Direct otherwise.
  static GateSpec with_default_variant(GateKind kind, int n_ancilla);

  /// Laser pulses addressed to the target: 1 (a single 2pi pulse) for CZ, 3 for CNOT.
  int target_pulses() const { return kind == GateKind::ModifiedCZ ? 1 : 3; }
  /// Transition the control atom is driven on.
  Transition control_transition() const;
};

struct PulseSequence {
  Topology topology = Topology::distant_gate(0);
  std::vector<Step> steps;
  std::optional<GateSpec> gate;
  int target_pulses = 0;
  /// Half-open step range [cond_begin, cond_end) holding the target-conditioned block.
  std::size_t cond_begin = 0;
  std::size_t cond_end = 0;

  std::size_t laser_pulse_count() const;
  std::size_t frame_count() const;
  double total_duration() const;
};

/// Distant-qubit pulse sequence on the register C, A1..An, T.
PulseSequence compile_gate(const GateSpec& spec);

/// diag(1,-1,-1,-1) for the modified CZ; -CNOT for CNOT. Basis order |CT> = 00, 01, 10, 11.
Matrix4 ideal_unitary(const GateSpec& spec);
Matrix4 cnot_matrix();

/// Nearest-neighbour CNOTs (control, target) composing CNOT(q0 -> q{k+1}) on a chain of k + 2 qubits.
std::vector<std::pair<std::size_t, std::size_t>> nn_cnot_circuit(int k);

/// Each CNOT of nn_cnot_circuit(k) expanded into the five-pulse blockade CNOT on QubitChain(k + 2).
PulseSequence compile_nn_sequence(int k);

}  // namespace rydchain
