#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rydchain/fidelity.hpp"

namespace rydchain {

/// Reproducible uniform stream keyed by (seed_base, stream index).
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t seed_base, std::uint64_t stream);
  /// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
  double uniform();
  /// Uniform in (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }

 private:
  std::mt19937_64 engine_;
};

struct JumpEvent {
  double time = 0.0;
  std::size_t channel = 0;  ///< index into LindbladModel::channels()

  bool operator==(const JumpEvent&) const = default;
};

struct TrajectoryResult {
  Vector state;
  std::vector<JumpEvent> jumps;
  std::uint64_t seed_base = 0;
  std::uint64_t stream = 0;
};

struct EnsembleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_trajectories = 0;
  std::uint64_t seed_base = 0;
};

/// Waiting-time quantum-jump trajectory through every step of `seq`.
TrajectoryResult run_trajectory(const PulseSequence& seq, const LindbladModel& model, const Vector& psi0,
                                std::uint64_t seed_base, std::uint64_t stream = 0);

/// Classical fidelity (1/d) sum_i |<U i|psi_traj>|^2 averaged over n_traj trajectories per probe.
/// Probe i of this call draws streams (stream_offset + i) * n_traj + k.
EnsembleEstimate classical_fidelity_mc(const PulseSequence& seq, const LindbladModel& model,
                                       const std::vector<Vector4>& basis, const Matrix4& ideal, int n_traj,
                                       std::uint64_t seed_base, std::size_t stream_offset = 0,
                                       int workers = 0);

/// Hofmann bounds from computational (streams 0..3) and Fourier (streams 4..7) probes.
FidelityReport mcwf_report(const PulseSequence& seq, const LindbladModel& model, const Matrix4& ideal, int n_traj,
                           std::uint64_t seed_base, int workers = 0);

}  // namespace rydchain
