#include "doctest.h"
#include "oracles.hpp"

#include "rydchain/fidelity.hpp"
#include "rydchain/protocol.hpp"

using namespace rydchain;

namespace {

// Choi state (1/d) sum_mn |m><n| (x) E(|m><n|) and its overlap with the ideal maximally entangled image.
double choi_fidelity(const CodeChannel& ch, const Matrix4& u) {
  Eigen::Matrix<cplx, 16, 16> choi = Eigen::Matrix<cplx, 16, 16>::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      Matrix4 e = Matrix4::Zero();
      e(m, n) = 1.0;
      const Matrix4 out = ch.apply(e);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) choi(4 * m + a, 4 * n + b) = out(a, b) / 4.0;
    }
  Eigen::Matrix<cplx, 16, 1> phi = Eigen::Matrix<cplx, 16, 1>::Zero();
  for (int m = 0; m < 4; ++m)
    for (int a = 0; a < 4; ++a) phi(4 * m + a) = u(a, m) / 2.0;
  return (phi.adjoint() * choi * phi)(0, 0).real();
}

Matrix4 haar_state_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vector4 v;
  for (int i = 0; i < 4; ++i) v(i) = cplx(n(rng), n(rng));
  v.normalize();
  return v * v.adjoint();
}

CodeChannel noisy(const Matrix4& u, double p) {
  // Mixture of the ideal unitary, a coherent error and amplitude loss out of |11>.
  const Matrix4 w = oracle::random_unitary(4, 77);
  return CodeChannel::from_map([&](const Matrix4& a) {
    Matrix4 out = (1 - p) * u * a * u.adjoint() + 0.5 * p * w * a * w.adjoint();
    Matrix4 keep = Matrix4::Identity();
    keep(3, 3) = 0.0;
    out += 0.5 * p * keep * a * keep;
    return out;
  });
}

}  // namespace

TEST_CASE("process fidelity of reference channels") {
  const Matrix4 cz = ideal_unitary(GateSpec{GateKind::ModifiedCZ, 0, Variant::Direct});
  const Matrix4 cx = ideal_unitary(GateSpec{GateKind::CNOT, 0, Variant::Direct});
  CHECK(process_fidelity(CodeChannel::unitary(cz), cz) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(process_fidelity(CodeChannel::unitary(cx), cx) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(process_fidelity(CodeChannel::depolarizing(), cx) == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(process_fidelity(CodeChannel::unitary(cz), cx) == doctest::Approx(choi_fidelity(CodeChannel::unitary(cz), cx)));
}

TEST_CASE("process fidelity agrees with the Choi overlap") {
  const Matrix4 cx = cnot_matrix();
  for (double p : {0.0, 0.01, 0.2, 0.7}) {
    const auto ch = noisy(cx, p);
    CHECK(process_fidelity(ch, cx) == doctest::Approx(choi_fidelity(ch, cx)).epsilon(1e-12));
  }
}

TEST_CASE("phase and basis invariance") {
  const Matrix4 cx = cnot_matrix();
  const auto ch = noisy(cx, 0.1);
  const double f = process_fidelity(ch, cx);
  CHECK(std::abs(process_fidelity(ch, std::exp(cplx(0, 1.234)) * cx) - f) < 1e-12);

  const auto pauli = OperatorBasis::pauli();
  CHECK(pauli.orthonormality_error() < 1e-14);
  const TransferMatrix v = oracle::random_unitary(16, 5);
  const auto remixed = pauli.remixed(v);
  CHECK(remixed.orthonormality_error() < 1e-12);
  CHECK(std::abs(process_fidelity(ch, cx, remixed) - f) < 1e-9);
}

TEST_CASE("average fidelity") {
  CHECK(average_fidelity(1.0, 4) == doctest::Approx(1.0));
  CHECK(average_fidelity(0.0, 4) == doctest::Approx(0.2));
  CHECK(average_fidelity(1.0 / 16, 4) == doctest::Approx(0.25));

  // Haar average of <psi|U^dag E(psi) U|psi> over 200 random states.
  const Matrix4 cx = cnot_matrix();
  // Trace-preserving: ideal unitary, coherent error and depolarization.
  const Matrix4 w = oracle::random_unitary(4, 78);
  const auto ch = CodeChannel::from_map([&](const Matrix4& a) -> Matrix4 {
    return 0.6 * cx * a * cx.adjoint() + 0.2 * w * a * w.adjoint() + 0.2 * a.trace() * Matrix4::Identity() / 4.0;
  });
  std::mt19937_64 rng(2024);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200;
  for (int k = 0; k < n; ++k) {
    const Matrix4 rho = haar_state_matrix(rng);
    const double f = (cx * rho * cx.adjoint() * ch.apply(rho)).trace().real();
    sum += f;
    sq += f * f;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / (n - 1));
  CHECK(std::abs(mean - average_fidelity(process_fidelity(ch, cx), 4)) < 3 * se);
}

TEST_CASE("complementary basis") {
  const auto comp = computational_basis();
  const auto fourier = complementary_basis(comp);
  REQUIRE(fourier.size() == 4);
  CHECK((fourier[3] - Vector4::Constant(0.5)).norm() < 1e-15);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(fourier[i].dot(fourier[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
      CHECK(std::norm(fourier[i].dot(comp[j])) == doctest::Approx(0.25));
    }
}

TEST_CASE("classical fidelities and bounds") {
  const Matrix4 cz = ideal_unitary(GateSpec{GateKind::ModifiedCZ, 0, Variant::Direct});
  const auto comp = computational_basis();
  const auto fourier = complementary_basis(comp);
  CHECK(classical_fidelity(CodeChannel::unitary(cz), cz, comp) == doctest::Approx(1.0));
  CHECK(classical_fidelity(CodeChannel::unitary(Matrix4::Identity()), cz, comp) == doctest::Approx(1.0));
  CHECK(classical_fidelity(CodeChannel::unitary(Matrix4::Identity()), cz, fourier) < 0.9);
  CHECK(classical_fidelity(CodeChannel::depolarizing(), cz, comp) == doctest::Approx(0.25));
  CHECK(classical_fidelity(CodeChannel::depolarizing(), cz, fourier) == doctest::Approx(0.25));

  const auto [lo1, up1] = hofmann_bounds(1.0, 1.0);
  CHECK(lo1 == 1.0);
  CHECK(up1 == 1.0);
  const auto [lo, up] = hofmann_bounds(0.99, 0.98);
  CHECK(lo == doctest::Approx(0.97));
  CHECK(up == doctest::Approx(0.98));

  for (double p : {0.01, 0.1, 0.4}) {
    const auto r = dense_report(noisy(cnot_matrix(), p), cnot_matrix());
    CHECK(r.lower <= *r.f_pro + 1e-9);
    CHECK(*r.f_pro <= r.upper + 1e-9);
    CHECK_NOTHROW(r.validate());
  }
}

TEST_CASE("report serialization and validation") {
  FidelityReport r;
  r.f_pro = 0.98;
  r.f_psi = 0.99;
  r.f_phi = 0.985;
  r.lower = 0.975;
  r.upper = 0.985;
  r.stderr_lower = 1e-3;
  nlohmann::json j = r;
  CHECK(j["probe_basis"] == kProbeBasisId);
  const auto back = j.get<FidelityReport>();
  CHECK(back.f_pro == r.f_pro);
  CHECK(back.stderr_lower == r.stderr_lower);
  CHECK_FALSE(back.stderr_upper.has_value());

  FidelityReport bad = r;
  bad.lower = 0.99;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("simulated channels") {
  const auto spec = GateSpec::with_default_variant(GateKind::ModifiedCZ, 0);
  const auto seq = compile_gate(spec);
  const LindbladModel model(build_register(seq.topology, 200.0), DecayRates{});
  const auto ch = simulate_channel(seq, model);
  CHECK(1.0 - process_fidelity(ch, ideal_unitary(spec)) < 1e-4);

  const auto cx = GateSpec::with_default_variant(GateKind::CNOT, 2);
  const auto seq2 = compile_gate(cx);
  const LindbladModel lossy(build_register(seq2.topology, 200.0), DecayRates{64e-5, 64e-5, 128e-5});
  const auto rep = dense_report(simulate_channel(seq2, lossy), ideal_unitary(cx));
  CHECK(rep.lower <= *rep.f_pro);
  CHECK(*rep.f_pro <= rep.upper);
  CHECK(*rep.f_pro < 0.99);
  CHECK(*rep.f_pro > 0.95);

  // Code embedding on the baseline chain keeps intermediates in |0>.
  const auto chain = build_register(Topology::qubit_chain(4), 200.0);
  const auto idx = code_indices(chain);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 1);
  CHECK(idx[2] == 27);
  CHECK(idx[3] == 28);
}
