#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "rydchain/dynamics_dense.hpp"

namespace rydchain {

inline constexpr int kCodeDim = 4;

using TransferMatrix = Eigen::Matrix<cplx, 16, 16>;

/// Basis states |c t> of the coding subspace, index 2c + t, every other atom in level 0.
std::array<Index, 4> code_indices(const Register& reg);
Vector embed_code_state(const Register& reg, const Vector4& psi);
Matrix embed_code_operator(const Register& reg, const Matrix4& op);
/// Pi X Pi restricted to the coding subspace.
Matrix4 project_code(const Register& reg, const Matrix& op);

/// d^2 operators with Tr(A_i^dagger A_j) = d delta_ij.
struct OperatorBasis {
  int d = kCodeDim;
  std::vector<Matrix4> elements;

  /// Two-qubit Pauli products P_a (x) P_b, index 4a + b with (I, X, Y, Z).
  static OperatorBasis pauli();
  /// B_k = sum_j V_kj A_j for a unitary 16 x 16 V.
  OperatorBasis remixed(const TransferMatrix& v) const;
  /// Largest deviation of the Gram matrix from d * identity.
  double orthonormality_error() const;
};

/// Linear map on coding-subspace operators: column m + 4n holds vec(Pi E(|m><n|) Pi).
class CodeChannel {
 public:
  CodeChannel() : t_(TransferMatrix::Zero()) {}
  explicit CodeChannel(const TransferMatrix& t) : t_(t) {}

  static CodeChannel from_map(const std::function<Matrix4(const Matrix4&)>& map);
  static CodeChannel unitary(const Matrix4& u);
  static CodeChannel depolarizing();

  const TransferMatrix& transfer() const { return t_; }
  Matrix4 apply(const Matrix4& a) const;

 private:
  TransferMatrix t_;
};

/// Runs the 16 matrix units |m><n| (ancillas in the ground state) through the sequence.
CodeChannel simulate_channel(const PulseSequence& seq, const LindbladModel& model,
                             const PropagationSettings& settings = {});

/// (1/d^3) sum_j Tr(U A_j^dagger U^dagger E(A_j)).
double process_fidelity(const CodeChannel& channel, const Matrix4& ideal,
                        const OperatorBasis& basis = OperatorBasis::pauli());

double average_fidelity(double f_pro, int d);

std::vector<Vector4> computational_basis();
/// |phi_k> = d^{-1/2} sum_n exp(-2 pi i k n / d) |psi_n>, k = 1..d.
std::vector<Vector4> complementary_basis(const std::vector<Vector4>& basis);

/// (1/d) sum_i <i|U^dagger E(|i><i|) U|i>.
double classical_fidelity(const CodeChannel& channel, const Matrix4& ideal, const std::vector<Vector4>& basis);

/// (f_psi + f_phi - 1, min(f_psi, f_phi)).
std::pair<double, double> hofmann_bounds(double f_psi, double f_phi);

inline constexpr const char* kProbeBasisId = "computational+fourier";

struct FidelityReport {
  std::optional<double> f_pro;
  double f_psi = 0.0;
  double f_phi = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> stderr_psi;
  std::optional<double> stderr_phi;
  std::optional<double> stderr_lower;
  std::optional<double> stderr_upper;
  std::string probe_basis = kProbeBasisId;

  void validate(double eps = 1e-9) const;
};

void to_json(nlohmann::json& j, const FidelityReport& r);
void from_json(const nlohmann::json& j, FidelityReport& r);

/// Exact process fidelity plus classical fidelities in the computational and Fourier bases.
FidelityReport dense_report(const CodeChannel& channel, const Matrix4& ideal);

}  // namespace rydchain
