#pragma once

#include <vector>

#include "rydchain/model.hpp"
#include "rydchain/protocol.hpp"

namespace rydchain {

enum class Integrator {
  BlockExponential,  ///< exact per-class exponentials of the Lindblad generator
  RungeKutta4,       ///< fixed-step classical RK4 on the full operator
};

struct PropagationSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// RK4 only: refuse segments that would need more substeps than this.
  long max_substeps = 4'000'000;
  Integrator integrator = Integrator::BlockExponential;
  /// Block exponential only: relative magnitude below which a class is treated as empty.
  double prune = 1e-15;

  void validate() const;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);
  static DensityMatrix pure(const Vector& psi);

  const Matrix& matrix() const { return m_; }
  Index dimension() const { return m_.rows(); }
  cplx trace() const { return m_.trace(); }
  double purity() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  /// Unit trace, Hermitian, and positive semidefinite, each to `tol`.
  bool is_physical(double tol = 1e-9) const;

 private:
  Matrix m_;
};

/// rho(T) through every step of `seq`; throws NumericalError if the trace drifts beyond tolerance.
DensityMatrix propagate_density(const PulseSequence& seq, const LindbladModel& model, const DensityMatrix& rho0,
                                const PropagationSettings& settings = {});

/// E(A) for an arbitrary (not necessarily Hermitian) operator A.
Matrix propagate_operator(const PulseSequence& seq, const LindbladModel& model, const Matrix& op,
                          const PropagationSettings& settings = {});

/// Batched E(A_k); segments and their exponentials are shared across the batch.
std::vector<Matrix> propagate_operators(const PulseSequence& seq, const LindbladModel& model, std::vector<Matrix> ops,
                                        const PropagationSettings& settings = {});

/// Pure-state evolution under exp(-i H_eff t) per pulse (the unitary evolution when all rates vanish).
Vector propagate_state(const PulseSequence& seq, const LindbladModel& model, const Vector& psi0);

enum class PulseDirection { Exciting, Deexciting };

/// Target-state occupation after a resonant pi pulse on a two-level atom decaying e -> g.
double pi_pulse_survival(double gamma_over_omega, PulseDirection direction);

/// Effective Rydberg dwell time Omega t_eff = -ln(p) / (gamma / Omega) of a pi pulse.
double pi_pulse_effective_time(double gamma_over_omega, PulseDirection direction);

/// Largest population in states with two or more Rydberg excitations over `sample_count`
/// equally spaced times per pulse (pulse ends included).
double max_double_excitation(const PulseSequence& seq, const LindbladModel& model, const Vector& psi0,
                             int sample_count);

/// Applies a frame operation to a density-like operator or a state.
void apply_frame(const FrameOp& frame, const Register& reg, Matrix& op);
void apply_frame(const FrameOp& frame, const Register& reg, Vector& psi);

}  // namespace rydchain
