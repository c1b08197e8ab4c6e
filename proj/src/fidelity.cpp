#include "rydchain/fidelity.hpp"

#include <algorithm>
#include <cmath>

namespace rydchain {

std::array<Index, 4> code_indices(const Register& reg) {
  const std::size_t last = reg.size() - 1;
  if (reg.size() < 2 || reg.atom(0).kind != AtomKind::Qubit || reg.atom(last).kind != AtomKind::Qubit) {
    throw ConfigError("coding subspace needs qubit atoms at both ends of the register");
  }
  std::array<Index, 4> out{};
  for (int c = 0; c < 2; ++c)
    for (int t = 0; t < 2; ++t) out[static_cast<std::size_t>(2 * c + t)] = c * reg.stride(0) + t * reg.stride(last);
  return out;
}

Vector embed_code_state(const Register& reg, const Vector4& psi) {
  const auto idx = code_indices(reg);
  Vector out = Vector::Zero(reg.dimension());
  for (int m = 0; m < 4; ++m) out[idx[static_cast<std::size_t>(m)]] = psi[m];
  return out;
}

Matrix embed_code_operator(const Register& reg, const Matrix4& op) {
  const auto idx = code_indices(reg);
  Matrix out = Matrix::Zero(reg.dimension(), reg.dimension());
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) out(idx[static_cast<std::size_t>(m)], idx[static_cast<std::size_t>(n)]) = op(m, n);
  return out;
}

Matrix4 project_code(const Register& reg, const Matrix& op) {
  if (op.rows() != reg.dimension() || op.cols() != reg.dimension()) {
    throw ConfigError("operator dimension does not match the register");
  }
  const auto idx = code_indices(reg);
  Matrix4 out;
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) out(m, n) = op(idx[static_cast<std::size_t>(m)], idx[static_cast<std::size_t>(n)]);
  return out;
}

OperatorBasis OperatorBasis::pauli() {
  Eigen::Matrix2cd p[4];
  p[0] << 1, 0, 0, 1;
  p[1] << 0, 1, 1, 0;
  p[2] << 0, -kI, kI, 0;
  p[3] << 1, 0, 0, -1;
  OperatorBasis basis;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      Matrix4 m;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = p[a](i, j) * p[b](k, l);
      basis.elements.push_back(m);
    }
  }
  return basis;
}

OperatorBasis OperatorBasis::remixed(const TransferMatrix& v) const {
  if (elements.size() != 16) throw ConfigError("remixing needs a complete basis of 16 elements");
  if (!(v * v.adjoint()).isApprox(TransferMatrix::Identity(), 1e-12)) throw ConfigError("remixing matrix must be unitary");
  OperatorBasis out;
  out.d = d;
  for (int k = 0; k < 16; ++k) {
    Matrix4 b = Matrix4::Zero();
    for (int j = 0; j < 16; ++j) b += v(k, j) * elements[static_cast<std::size_t>(j)];
    out.elements.push_back(b);
  }
  return out;
}

double OperatorBasis::orthonormality_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < elements.size(); ++j) {
      const cplx g = (elements[i].adjoint() * elements[j]).trace();
      worst = std::max(worst, std::abs(g - (i == j ? static_cast<double>(d) : 0.0)));
    }
  }
  return worst;
}

CodeChannel CodeChannel::from_map(const std::function<Matrix4(const Matrix4&)>& map) {
  TransferMatrix t;
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 4; ++m) {
      Matrix4 unit = Matrix4::Zero();
      unit(m, n) = 1.0;
      const Matrix4 out = map(unit);
      t.col(m + 4 * n) = Eigen::Map<const Eigen::Matrix<cplx, 16, 1>>(out.data());
    }
  }
  return CodeChannel(t);
}

CodeChannel CodeChannel::unitary(const Matrix4& u) {
  return from_map([&](const Matrix4& a) -> Matrix4 { return u * a * u.adjoint(); });
}

CodeChannel CodeChannel::depolarizing() {
  return from_map([](const Matrix4& a) -> Matrix4 { return a.trace() * Matrix4::Identity() / 4.0; });
}

Matrix4 CodeChannel::apply(const Matrix4& a) const {
  const Eigen::Matrix<cplx, 16, 1> v = t_ * Eigen::Map<const Eigen::Matrix<cplx, 16, 1>>(a.data());
  Matrix4 out;
  Eigen::Map<Eigen::Matrix<cplx, 16, 1>>(out.data()) = v;
  return out;
}

CodeChannel simulate_channel(const PulseSequence& seq, const LindbladModel& model,
                             const PropagationSettings& settings) {
  const Register& reg = model.reg();
  std::vector<Matrix> units;
  units.reserve(16);
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 4; ++m) {
      Matrix4 unit = Matrix4::Zero();
      unit(m, n) = 1.0;
      units.push_back(embed_code_operator(reg, unit));
    }
  }
  const auto out = propagate_operators(seq, model, std::move(units), settings);
  TransferMatrix t;
  for (int k = 0; k < 16; ++k) {
    const Matrix4 p = project_code(reg, out[static_cast<std::size_t>(k)]);
    t.col(k) = Eigen::Map<const Eigen::Matrix<cplx, 16, 1>>(p.data());
  }
  return CodeChannel(t);
}

double process_fidelity(const CodeChannel& channel, const Matrix4& ideal, const OperatorBasis& basis) {
  if (basis.d != kCodeDim || basis.elements.size() != 16) throw ConfigError("operator basis must span the 4-dim code space");
  cplx sum = 0.0;
  for (const auto& a : basis.elements) sum += (ideal * a.adjoint() * ideal.adjoint() * channel.apply(a)).trace();
  return sum.real() / 64.0;
}

double average_fidelity(double f_pro, int d) {
  if (d < 2) throw ConfigError("average fidelity needs d >= 2");
  return (d * f_pro + 1.0) / (d + 1.0);
}

std::vector<Vector4> computational_basis() {
  std::vector<Vector4> out;
  for (int n = 0; n < 4; ++n) out.push_back(Vector4::Unit(n));
  return out;
}

std::vector<Vector4> complementary_basis(const std::vector<Vector4>& basis) {
  const int d = static_cast<int>(basis.size());
  if (d != kCodeDim) throw ConfigError("complementary basis needs 4 states");
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const cplx g = basis[static_cast<std::size_t>(i)].dot(basis[static_cast<std::size_t>(j)]);
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-10) throw ConfigError("input basis is not orthonormal");
    }
  }
  std::vector<Vector4> out;
  for (int k = 1; k <= d; ++k) {
    Vector4 phi = Vector4::Zero();
    for (int n = 0; n < d; ++n) phi += std::polar(1.0, -2.0 * kPi * k * n / d) * basis[static_cast<std::size_t>(n)];
    out.push_back(phi / std::sqrt(static_cast<double>(d)));
  }
  return out;
}

double classical_fidelity(const CodeChannel& channel, const Matrix4& ideal, const std::vector<Vector4>& basis) {
  if (basis.empty()) throw ConfigError("classical fidelity needs probe states");
  double sum = 0.0;
  for (const auto& psi : basis) {
    const Vector4 target = ideal * psi;
    sum += target.dot(channel.apply(psi * psi.adjoint()) * target).real();
  }
  return sum / static_cast<double>(basis.size());
}

std::pair<double, double> hofmann_bounds(double f_psi, double f_phi) { return {f_psi + f_phi - 1.0, std::min(f_psi, f_phi)}; }

void FidelityReport::validate(double eps) const {
  if (lower > upper + eps) throw NumericalError("Hofmann lower bound exceeds upper bound");
  if (f_pro && (*f_pro < lower - eps || *f_pro > upper + eps)) {
    throw NumericalError("process fidelity outside its Hofmann bounds");
  }
}

void to_json(nlohmann::json& j, const FidelityReport& r) {
  j = nlohmann::json{{"f_pro", r.f_pro ? nlohmann::json(*r.f_pro) : nlohmann::json(nullptr)},
                     {"f_psi", r.f_psi},
                     {"f_phi", r.f_phi},
                     {"lower", r.lower},
                     {"upper", r.upper},
                     {"probe_basis", r.probe_basis}};
  auto opt = [&](const char* key, const std::optional<double>& v) { j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  opt("stderr_psi", r.stderr_psi);
  opt("stderr_phi", r.stderr_phi);
  opt("stderr_lower", r.stderr_lower);
  opt("stderr_upper", r.stderr_upper);
}

void from_json(const nlohmann::json& j, FidelityReport& r) {
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
  };
  r.f_pro = opt("f_pro");
  r.f_psi = j.at("f_psi").get<double>();
  r.f_phi = j.at("f_phi").get<double>();
  r.lower = j.at("lower").get<double>();
  r.upper = j.at("upper").get<double>();
  r.probe_basis = j.value("probe_basis", std::string(kProbeBasisId));
  r.stderr_psi = opt("stderr_psi");
  r.stderr_phi = opt("stderr_phi");
  r.stderr_lower = opt("stderr_lower");
  r.stderr_upper = opt("stderr_upper");
}

FidelityReport dense_report(const CodeChannel& channel, const Matrix4& ideal) {
  FidelityReport r;
  const auto psi = computational_basis();
  r.f_pro = process_fidelity(channel, ideal);
  r.f_psi = classical_fidelity(channel, ideal, psi);
  r.f_phi = classical_fidelity(channel, ideal, complementary_basis(psi));
  std::tie(r.lower, r.upper) = hofmann_bounds(r.f_psi, r.f_phi);
  return r;
}

}  // namespace rydchain
