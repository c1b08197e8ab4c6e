#include "rydchain/protocol.hpp"

#include <algorithm>

namespace rydchain {

std::string_view to_string(GateKind kind) { return kind == GateKind::ModifiedCZ ? "cz" : "cnot"; }

std::string_view to_string(Variant variant) { return variant == Variant::Direct ? "direct" : "sigmax"; }

GateKind parse_gate_kind(std::string_view s) {
  if (s == "cz" || s == "CZ" || s == "modified_cz") return GateKind::ModifiedCZ;
  if (s == "cnot" || s == "CNOT") return GateKind::CNOT;
  throw ConfigError("unknown gate '" + std::string(s) + "'");
}

Variant parse_variant(std::string_view s) {
  if (s == "direct") return Variant::Direct;
  if (s == "sigmax" || s == "sigma_x" || s == "wrapped") return Variant::SigmaXWrapped;
  throw ConfigError("unknown variant '" + std::string(s) + "'");
}

GateSpec GateSpec::with_default_variant(GateKind kind, int n_ancilla) {
  const bool wrap = kind == GateKind::ModifiedCZ && n_ancilla % 2 == 1;
  return {kind, n_ancilla, wrap ? Variant::SigmaXWrapped : Variant::Direct};
}

Transition GateSpec::control_transition() const {
  const bool even = n_ancilla % 2 == 0;
  // Direct rule: CZ drives |1> for even chains, CNOT drives |0> for even chains.
  bool drive_one = kind == GateKind::ModifiedCZ ? even : !even;
  if (variant == Variant::SigmaXWrapped) drive_one = !drive_one;
  return drive_one ? Transition::Q1R : Transition::Q0R;
}

std::size_t PulseSequence::laser_pulse_count() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const Step& s) { return std::holds_alternative<Pulse>(s); }));
}

std::size_t PulseSequence::frame_count() const { return steps.size() - laser_pulse_count(); }

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const auto& s : steps) {
    if (const auto* p = std::get_if<Pulse>(&s)) t += p->duration();
  }
  return t;
}

PulseSequence compile_gate(const GateSpec& spec) {
  if (spec.n_ancilla < 0) throw ConfigError("ancilla count must be non-negative");
  if (spec.variant == Variant::SigmaXWrapped && spec.n_ancilla % 2 == 0) {
    throw ConfigError("the sigma_x wrapped variant needs an odd number of ancillas");
  }
  const std::size_t n = static_cast<std::size_t>(spec.n_ancilla);
  const std::size_t control = 0;
  const std::size_t target = n + 1;
  const Transition ctrl = spec.control_transition();
  auto pi_on = [](std::size_t atom, Transition t) { return Pulse{atom, t, kPi, 1.0}; };

  std::vector<Pulse> hop;
  hop.push_back(pi_on(control, ctrl));
  if (n >= 1) {
    hop.push_back(pi_on(1, Transition::GE));
    hop.push_back(pi_on(control, ctrl));
    for (std::size_t i = 1; i < n; ++i) {
      hop.push_back(pi_on(i + 1, Transition::GE));
      hop.push_back(pi_on(i, Transition::GE));
    }
  }

  PulseSequence seq;
  seq.topology = Topology::distant_gate(spec.n_ancilla);
  seq.gate = spec;
  seq.target_pulses = spec.target_pulses();

  const bool wrapped = spec.variant == Variant::SigmaXWrapped;
  if (wrapped) seq.steps.emplace_back(FrameOp{control, FrameKind::SigmaX});
  for (const auto& p : hop) seq.steps.emplace_back(p);
  seq.cond_begin = seq.steps.size();
  if (spec.kind == GateKind::ModifiedCZ) {
    seq.steps.emplace_back(Pulse{target, Transition::Q1R, 2.0 * kPi, 1.0});
  } else {
    seq.steps.emplace_back(pi_on(target, Transition::Q0R));
    seq.steps.emplace_back(pi_on(target, Transition::Q1R));
    seq.steps.emplace_back(pi_on(target, Transition::Q0R));
  }
  seq.cond_end = seq.steps.size();
  for (auto it = hop.rbegin(); it != hop.rend(); ++it) seq.steps.emplace_back(*it);
  if (wrapped) seq.steps.emplace_back(FrameOp{control, FrameKind::SigmaX});
  return seq;
}

Matrix4 cnot_matrix() {
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u(2, 3) = 1.0;
  u(3, 2) = 1.0;
  return u;
}

Matrix4 ideal_unitary(const GateSpec& spec) {
  if (spec.kind == GateKind::ModifiedCZ) {
    Matrix4 u = Matrix4::Zero();
    u.diagonal() << 1.0, -1.0, -1.0, -1.0;
    return u;
  }
  return -cnot_matrix();
}

std::vector<std::pair<std::size_t, std::size_t>> nn_cnot_circuit(int k) {
  if (k < 1) throw ConfigError("the nearest-neighbour circuit needs at least one intermediate qubit");
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<std::pair<std::size_t, std::size_t>> gates;
  for (std::size_t i = 0; i <= kk; ++i) gates.emplace_back(i, i + 1);
  for (std::size_t i = kk; i-- > 0;) gates.emplace_back(i, i + 1);
  for (std::size_t i = 1; i <= kk; ++i) gates.emplace_back(i, i + 1);
  for (std::size_t i = kk; i-- > 1;) gates.emplace_back(i, i + 1);
  return gates;
}

PulseSequence compile_nn_sequence(int k) {
  const auto circuit = nn_cnot_circuit(k);
  PulseSequence seq;
  seq.topology = Topology::qubit_chain(k + 2);
  for (const auto& [c, t] : circuit) {
    seq.steps.emplace_back(Pulse{c, Transition::Q0R, kPi, 1.0});
    seq.steps.emplace_back(Pulse{t, Transition::Q0R, kPi, 1.0});
    seq.steps.emplace_back(Pulse{t, Transition::Q1R, kPi, 1.0});
    seq.steps.emplace_back(Pulse{t, Transition::Q0R, kPi, 1.0});
    seq.steps.emplace_back(Pulse{c, Transition::Q0R, kPi, 1.0});
  }
  seq.target_pulses = 3 * static_cast<int>(circuit.size());
  seq.cond_begin = seq.cond_end = 0;
  return seq;
}

}  // namespace rydchain
