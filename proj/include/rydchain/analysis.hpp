#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rydchain/protocol.hpp"

namespace rydchain {

enum class Solver { Dense, Mcwf };

std::string_view to_string(Solver s);
Solver parse_solver(std::string_view s);

/// One simulated grid point. Dense records carry f_pro (and the bounds); MC records carry bounds with stderrs.
struct SweepRecord {
  std::string gate;  ///< "cz", "cnot", or "cnot_nn" for the nearest-neighbour baseline
  std::string variant;
  int n_A = 0;
  double u_over_omega = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  std::optional<double> gammaA;  ///< absent for the baseline chain
  Solver solver = Solver::Dense;
  std::optional<int> n_traj;
  std::optional<std::uint64_t> seed;
  std::optional<double> f_pro;
  std::optional<double> f_lower;
  std::optional<double> f_upper;
  std::optional<double> stderr_lower;
  std::optional<double> stderr_upper;
  double wall_time_s = 0.0;

  double gamma_q() const { return gamma0 + gamma1; }
  double gamma_a() const { return gammaA.value_or(0.0); }
  /// Throws ConfigError when the solver-dependent fields are inconsistent.
  void validate() const;
};

struct FitResult {
  std::string parameter;
  double value = 0.0;
  double half_width = 0.0;  ///< 95% normal-approximation half width
  double residual_rms = 0.0;
  double max_residual = 0.0;
  std::size_t records_used = 0;
  std::optional<double> loglog_slope;
};

/// 1 - F = alpha (U/Omega)^-2 by regression through the origin; also the log-log slope of 1 - F vs U/Omega.
FitResult fit_alpha(const std::vector<SweepRecord>& records);

/// Counting constants of the dissipation model. Effective Rydberg times (units 1/Omega):
///   qubits:   (2 pi + q * t) / 2, q = cz_qubit_teff or cnot_qubit_teff
///   ancillas: (4 pi n + extra + (4 n - 2) t) / 2, extra = 0 (CZ) or cnot_ancilla_extra_pi * pi (CNOT)
struct DissipationModel {
  double cz_qubit_teff = 6.0;
  double cnot_qubit_teff = 7.0;
  double cnot_ancilla_extra_pi = 1.0;

  double qubit_time(GateKind gate, double t_eff) const;
  double ancilla_time(GateKind gate, int n_A, double t_eff) const;
};

/// (1 - alpha (U/Omega)^-2) exp(-gamma_q t_q) exp(-gamma_A t_A(n_A)). Throws for n_A = 0.
double predict_fidelity(GateKind gate, int n_A, double gamma_q, double gamma_A, double u_over_omega, double t_eff,
                        double alpha, const DissipationModel& model = {});

/// Blockade coefficient by (gate, parity) used inside fit_teff: CZ 1.7 / 0.5, CNOT 2 / 0.1 (even / odd n_A).
double nominal_alpha(GateKind gate, int n_A);

/// One-parameter least squares of predict_fidelity over dense records with n_A >= 1.
/// The result value is Omega t_eff / pi.
FitResult fit_teff(const std::vector<SweepRecord>& records, GateKind gate, const DissipationModel& model = {});

/// exp([8 n (pi + 2 t) - 5 (3 pi + 5 t)] / 2 * gamma), t = Omega t_eff.
double gain_ratio(int n_A, double gamma, double t_eff);

}  // namespace rydchain
