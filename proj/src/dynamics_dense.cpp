#include "rydchain/dynamics_dense.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <tuple>

#include <unsupported/Eigen/MatrixFunctions>

#include "rydchain/segment.hpp"

namespace rydchain {

void PropagationSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("propagation tolerances must be positive");
  if (max_substeps < 1) throw ConfigError("max_substeps must be positive");
  if (!(prune >= 0.0) || prune >= 1e-6) throw ConfigError("prune threshold must lie in [0, 1e-6)");
}

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw ConfigError("density matrix must be square and non-empty");
}

DensityMatrix DensityMatrix::pure(const Vector& psi) { return DensityMatrix(psi * psi.adjoint()); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(double tol) const {
  return std::abs(trace() - 1.0) <= tol && hermiticity_error() <= tol && min_eigenvalue() >= -tol;
}

void apply_frame(const FrameOp& frame, const Register& reg, Matrix& op) {
  const auto perm = sigma_x_permutation(reg, frame.atom);
  Matrix out(op.rows(), op.cols());
  for (Index c = 0; c < op.cols(); ++c)
    for (Index r = 0; r < op.rows(); ++r) out(r, c) = op(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]);
  op = std::move(out);
}

void apply_frame(const FrameOp& frame, const Register& reg, Vector& psi) {
  const auto perm = sigma_x_permutation(reg, frame.atom);
  Vector out(psi.size());
  for (Index r = 0; r < psi.size(); ++r) out[r] = psi[perm[static_cast<std::size_t>(r)]];
  psi = std::move(out);
}

namespace {

void check_register(const PulseSequence& seq, const LindbladModel& model) {
  if (seq.topology.atom_count() != model.reg().size()) {
    throw ConfigError("pulse sequence and register disagree on the atom count");
  }
  for (const auto& step : seq.steps) {
    const std::size_t atom = std::visit([](const auto& s) { return s.atom; }, step);
    if (atom >= model.reg().size()) throw ConfigError("step addresses an atom outside the register");
  }
}

using PulseKey = std::tuple<std::size_t, int, double, double>;

PulseKey key_of(const Pulse& p) { return {p.atom, static_cast<int>(p.transition), p.area, p.rabi}; }

// RK4 on d(rho)/dt = -i[H, rho] + sum_k (L rho L^+ - 1/2 {L^+ L, rho}).
class Rk4Segment {
 public:
  Rk4Segment(const LindbladModel& model, const Pulse& pulse, const PropagationSettings& settings)
      : h_(model.hamiltonian(pulse).sparse()) {
    for (const auto& c : model.active_channels()) {
      jumps_.push_back(model.jump_operator(c).sparse());
      jumps_dag_.push_back(SparseMatrix(jumps_.back().adjoint()));
    }
    decay_ = model.decay_profile();
    const double umax = model.reg().couplings().max_shift();
    const double tau = pulse.duration();
    // Global RK4 error ~ tau * lambda * (h * lambda)^4 / 120 with lambda the generator scale.
    const double lambda = std::max(1.0, umax);
    const double h_tol = std::pow(120.0 * settings.rel_tol / (tau * lambda), 0.25) / lambda;
    const double hmax = std::min({0.05, 0.05 / lambda, h_tol});
    steps_ = static_cast<long>(std::ceil(tau / hmax - 1e-12));
    if (steps_ > settings.max_substeps) {
      throw NumericalError("RK4 segment needs " + std::to_string(steps_) + " substeps, above max_substeps");
    }
    dt_ = tau / static_cast<double>(steps_);
  }

  void apply(Matrix& rho) const {
    Matrix k1, k2, k3, k4;
    for (long s = 0; s < steps_; ++s) {
      rhs(rho, k1);
      rhs(rho + 0.5 * dt_ * k1, k2);
      rhs(rho + 0.5 * dt_ * k2, k3);
      rhs(rho + dt_ * k3, k4);
      rho += (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }

 private:
  void rhs(const Matrix& rho, Matrix& out) const {
    out = -kI * (h_ * rho);
    out += kI * (rho * h_);
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      out += jumps_[k] * (rho * jumps_dag_[k]);
    }
    for (Index c = 0; c < rho.cols(); ++c)
      for (Index r = 0; r < rho.rows(); ++r) out(r, c) -= 0.5 * (decay_[r] + decay_[c]) * rho(r, c);
  }

  SparseMatrix h_;
  std::vector<SparseMatrix> jumps_;
  std::vector<SparseMatrix> jumps_dag_;
  Eigen::VectorXd decay_;
  long steps_ = 0;
  double dt_ = 0.0;
};

}  // namespace

std::vector<Matrix> propagate_operators(const PulseSequence& seq, const LindbladModel& model, std::vector<Matrix> ops,
                                        const PropagationSettings& settings) {
  settings.validate();
  check_register(seq, model);
  const Index dim = model.reg().dimension();
  for (const auto& op : ops) {
    if (op.rows() != dim || op.cols() != dim) throw ConfigError("operator dimension does not match the register");
  }
  std::map<PulseKey, std::unique_ptr<LiouvilleSegment>> exact;
  std::map<PulseKey, std::unique_ptr<Rk4Segment>> rk4;
  for (const auto& step : seq.steps) {
    if (const auto* frame = std::get_if<FrameOp>(&step)) {
      for (auto& op : ops) apply_frame(*frame, model.reg(), op);
      continue;
    }
    const auto& pulse = std::get<Pulse>(step);
    if (pulse.duration() == 0.0) continue;
    const auto key = key_of(pulse);
    if (settings.integrator == Integrator::BlockExponential) {
      auto& seg = exact[key];
      if (!seg) seg = std::make_unique<LiouvilleSegment>(model, pulse, settings.prune);
      seg->apply(ops);
    } else {
      auto& seg = rk4[key];
      if (!seg) seg = std::make_unique<Rk4Segment>(model, pulse, settings);
      for (auto& op : ops) seg->apply(op);
    }
  }
  return ops;
}

Matrix propagate_operator(const PulseSequence& seq, const LindbladModel& model, const Matrix& op,
                          const PropagationSettings& settings) {
  return propagate_operators(seq, model, {op}, settings).front();
}

DensityMatrix propagate_density(const PulseSequence& seq, const LindbladModel& model, const DensityMatrix& rho0,
                                const PropagationSettings& settings) {
  DensityMatrix out(propagate_operator(seq, model, rho0.matrix(), settings));
  const cplx t0 = rho0.trace();
  if (std::abs(out.trace() - t0) > settings.rel_tol * std::abs(t0) + settings.abs_tol) {
    throw NumericalError("trace not preserved within tolerance");
  }
  return out;
}

Vector propagate_state(const PulseSequence& seq, const LindbladModel& model, const Vector& psi0) {
  check_register(seq, model);
  if (psi0.size() != model.reg().dimension()) throw ConfigError("state dimension does not match the register");
  std::map<PulseKey, std::unique_ptr<NoJumpSegment>> cache;
  Vector psi = psi0;
  for (const auto& step : seq.steps) {
    if (const auto* frame = std::get_if<FrameOp>(&step)) {
      apply_frame(*frame, model.reg(), psi);
      continue;
    }
    const auto& pulse = std::get<Pulse>(step);
    if (pulse.duration() == 0.0) continue;
    auto& seg = cache[key_of(pulse)];
    if (!seg) seg = std::make_unique<NoJumpSegment>(model, pulse);
    psi = seg->apply_full(psi);
  }
  return psi;
}

double pi_pulse_survival(double gamma_over_omega, PulseDirection direction) {
  if (!(gamma_over_omega >= 0.0) || gamma_over_omega > 0.1) {
    throw ConfigError("two-level oracle is defined for 0 <= gamma/Omega <= 0.1");
  }
  if (gamma_over_omega == 0.0) return 1.0;
  // Vectorised rho = (rho_gg, rho_ge, rho_eg, rho_ee), H = (1/2)(|g><e| + |e><g|), L = sqrt(gamma)|g><e|.
  const double g = gamma_over_omega;
  const cplx h = 0.5;
  Eigen::Matrix4cd gen = Eigen::Matrix4cd::Zero();
  // d rho_gg = -i(h rho_eg - rho_ge h) + g rho_ee
  gen(0, 2) += -kI * h;
  gen(0, 1) += kI * h;
  gen(0, 3) += g;
  // d rho_ge = -i(h rho_ee - rho_gg h) - g/2 rho_ge
  gen(1, 3) += -kI * h;
  gen(1, 0) += kI * h;
  gen(1, 1) += -0.5 * g;
  // d rho_eg = -i(h rho_gg - rho_ee h) - g/2 rho_eg
  gen(2, 0) += -kI * h;
  gen(2, 3) += kI * h;
  gen(2, 2) += -0.5 * g;
  // d rho_ee = -i(h rho_ge - rho_eg h) - g rho_ee
  gen(3, 1) += -kI * h;
  gen(3, 2) += kI * h;
  gen(3, 3) += -g;
  const Eigen::Matrix4cd prop = (gen * kPi).exp();
  Eigen::Vector4cd rho0 = Eigen::Vector4cd::Zero();
  if (direction == PulseDirection::Exciting) {
    rho0[0] = 1.0;
    return (prop * rho0)[3].real();
  }
  rho0[3] = 1.0;
  return (prop * rho0)[0].real();
}

double pi_pulse_effective_time(double gamma_over_omega, PulseDirection direction) {
  if (gamma_over_omega <= 0.0) throw ConfigError("effective time needs a positive decay rate");
  return -std::log(pi_pulse_survival(gamma_over_omega, direction)) / gamma_over_omega;
}

double max_double_excitation(const PulseSequence& seq, const LindbladModel& model, const Vector& psi0,
                             int sample_count) {
  check_register(seq, model);
  if (sample_count < 1) throw ConfigError("sample_count must be positive");
  const Register& reg = model.reg();
  std::vector<char> multi(static_cast<std::size_t>(reg.dimension()));
  for (Index x = 0; x < reg.dimension(); ++x) multi[static_cast<std::size_t>(x)] = reg.rydberg_count(x) >= 2;
  auto population = [&](const Vector& psi) {
    double p = 0.0;
    for (Index x = 0; x < psi.size(); ++x) {
      if (multi[static_cast<std::size_t>(x)]) p += std::norm(psi[x]);
    }
    return p / psi.squaredNorm();
  };

  std::map<PulseKey, std::unique_ptr<NoJumpSegment>> cache;
  Vector psi = psi0;
  double worst = population(psi);
  for (const auto& step : seq.steps) {
    if (const auto* frame = std::get_if<FrameOp>(&step)) {
      apply_frame(*frame, reg, psi);
      continue;
    }
    const auto& pulse = std::get<Pulse>(step);
    if (pulse.duration() == 0.0) continue;
    auto& seg = cache[key_of(pulse)];
    if (!seg) seg = std::make_unique<NoJumpSegment>(model, pulse);
    for (int s = 1; s < sample_count; ++s) {
      const double t = seg->duration() * static_cast<double>(s) / static_cast<double>(sample_count);
      worst = std::max(worst, population(seg->apply(psi, t)));
    }
    psi = seg->apply_full(psi);
    worst = std::max(worst, population(psi));
  }
  return worst;
}

}  // namespace rydchain
