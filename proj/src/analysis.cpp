#include "rydchain/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rydchain {

std::string_view to_string(Solver s) { return s == Solver::Dense ? "dense" : "mcwf"; }

Solver parse_solver(std::string_view s) {
  if (s == "dense") return Solver::Dense;
  if (s == "mcwf") return Solver::Mcwf;
  throw ConfigError("unknown solver '" + std::string(s) + "' (expected dense or mcwf)");
}

void SweepRecord::validate() const {
  if (solver == Solver::Dense) {
    if (!f_pro) throw ConfigError("dense record without f_pro");
    if (n_traj) throw ConfigError("dense record with n_traj");
    if (f_lower || f_upper || stderr_lower || stderr_upper) throw ConfigError("dense record with MC bounds");
  } else {
    if (f_pro) throw ConfigError("mcwf record with f_pro");
    if (!f_lower || !f_upper || !stderr_lower || !stderr_upper) throw ConfigError("mcwf record without bounds");
    if (!n_traj || *n_traj < 2 || !seed) throw ConfigError("mcwf record needs n_traj >= 2 and a seed");
  }
}

FitResult fit_alpha(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw ConfigError("fit_alpha needs records");
  const auto& first = records.front();
  std::set<double> distinct;
  for (const auto& r : records) {
    if (r.gate != first.gate || r.n_A != first.n_A) throw ConfigError("fit_alpha records mix gates or n_A");
    if (r.gamma0 != 0.0 || r.gamma1 != 0.0 || r.gamma_a() != 0.0) throw ConfigError("fit_alpha needs gamma = 0 records");
    if (!r.f_pro) throw ConfigError("fit_alpha needs dense records");
    distinct.insert(r.u_over_omega);
  }
  if (distinct.size() < 4) throw ConfigError("fit_alpha needs at least 4 distinct U/Omega values");

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& r : records) {
    const double x = 1.0 / (r.u_over_omega * r.u_over_omega);
    sxx += x * x;
    sxy += x * (1.0 - *r.f_pro);
  }
  FitResult fit;
  fit.parameter = "alpha";
  fit.value = sxy / sxx;
  fit.records_used = records.size();
  double rss = 0.0;
  for (const auto& r : records) {
    const double res = (1.0 - *r.f_pro) - fit.value / (r.u_over_omega * r.u_over_omega);
    rss += res * res;
    fit.max_residual = std::max(fit.max_residual, std::abs(res));
  }
  const auto n = static_cast<double>(records.size());
  fit.residual_rms = std::sqrt(rss / n);
  fit.half_width = 1.96 * std::sqrt(rss / (n - 1.0) / sxx);

  bool positive = true;
  double mx = 0.0;
  double my = 0.0;
  for (const auto& r : records) {
    const double err = 1.0 - *r.f_pro;
    if (!(err > 0.0)) positive = false;
    mx += std::log(r.u_over_omega);
    my += positive ? std::log(err) : 0.0;
  }
  if (positive) {
    mx /= n;
    my /= n;
    double cxx = 0.0;
    double cxy = 0.0;
    for (const auto& r : records) {
      const double dx = std::log(r.u_over_omega) - mx;
      cxx += dx * dx;
      cxy += dx * (std::log(1.0 - *r.f_pro) - my);
    }
    fit.loglog_slope = cxy / cxx;
  }
  return fit;
}

double DissipationModel::qubit_time(GateKind gate, double t_eff) const {
  const double q = gate == GateKind::ModifiedCZ ? cz_qubit_teff : cnot_qubit_teff;
  return (2.0 * kPi + q * t_eff) / 2.0;
}

double DissipationModel::ancilla_time(GateKind gate, int n_A, double t_eff) const {
  const double extra = gate == GateKind::ModifiedCZ ? 0.0 : cnot_ancilla_extra_pi * kPi;
  return (4.0 * kPi * n_A + extra + (4.0 * n_A - 2.0) * t_eff) / 2.0;
}

double predict_fidelity(GateKind gate, int n_A, double gamma_q, double gamma_A, double u_over_omega, double t_eff,
                        double alpha, const DissipationModel& model) {
  if (n_A < 1) throw ConfigError("dissipation model is out of scope for n_A = 0 (two control pulses only)");
  if (gamma_q < 0.0 || gamma_A < 0.0) throw ConfigError("decay rates must be non-negative");
  const double blockade = std::isinf(u_over_omega) ? 1.0 : 1.0 - alpha / (u_over_omega * u_over_omega);
  return blockade * std::exp(-gamma_q * model.qubit_time(gate, t_eff)) *
         std::exp(-gamma_A * model.ancilla_time(gate, n_A, t_eff));
}

double nominal_alpha(GateKind gate, int n_A) {
  const bool even = n_A % 2 == 0;
  if (gate == GateKind::ModifiedCZ) return even ? 1.7 : 0.5;
  return even ? 2.0 : 0.1;
}

FitResult fit_teff(const std::vector<SweepRecord>& records, GateKind gate, const DissipationModel& model) {
  const std::string label(to_string(gate));
  std::vector<const SweepRecord*> used;
  std::set<double> gammas;
  for (const auto& r : records) {
    if (r.gate != label || r.n_A < 1 || !r.f_pro) continue;
    used.push_back(&r);
    gammas.insert(std::max(r.gamma_q(), r.gamma_a()));
  }
  if (used.empty()) throw ConfigError("fit_teff found no dense records for " + label);
  if (gammas.size() < 2) throw ConfigError("fit_teff needs at least two decay rates");

  auto residual = [&](const SweepRecord& r, double t_over_pi) {
    return *r.f_pro - predict_fidelity(gate, r.n_A, r.gamma_q(), r.gamma_a(), r.u_over_omega, t_over_pi * kPi,
                                       nominal_alpha(gate, r.n_A), model);
  };
  auto objective = [&](double t) {
    double s = 0.0;
    for (const auto* r : used) {
      const double e = residual(*r, t);
      s += e * e;
    }
    return s;
  };

  // Coarse grid, then golden-section refinement inside the best bracket.
  constexpr int kGrid = 100;
  int best = 0;
  double best_val = objective(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = objective(static_cast<double>(i) / kGrid);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = std::max(0.0, (best - 1.0) / kGrid);
  double b = std::min(1.0, (best + 1.0) / kGrid);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > 1e-8) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = objective(d);
    }
  }
  const double t = 0.5 * (a + b);
  if (!std::isfinite(t)) throw NumericalError("fit_teff did not converge");

  FitResult fit;
  fit.parameter = "omega_t_eff_over_pi";
  fit.value = t;
  fit.records_used = used.size();
  double rss = 0.0;
  double jj = 0.0;
  constexpr double h = 1e-6;
  for (const auto* r : used) {
    const double e = residual(*r, t);
    rss += e * e;
    fit.max_residual = std::max(fit.max_residual, std::abs(e));
    const double deriv = (residual(*r, t + h) - residual(*r, t - h)) / (2.0 * h);
    jj += deriv * deriv;
  }
  const auto n = static_cast<double>(used.size());
  fit.residual_rms = std::sqrt(rss / n);
  fit.half_width = n > 1 && jj > 0.0 ? 1.96 * std::sqrt(rss / (n - 1.0) / jj) : 0.0;
  return fit;
}

double gain_ratio(int n_A, double gamma, double t_eff) {
  if (n_A < 1) throw ConfigError("gain ratio needs n_A >= 1");
  return std::exp((8.0 * n_A * (kPi + 2.0 * t_eff) - 5.0 * (3.0 * kPi + 5.0 * t_eff)) / 2.0 * gamma);
}

}  // namespace rydchain
