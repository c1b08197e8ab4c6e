#include "doctest.h"
#include "oracles.hpp"

#include "rydchain/model.hpp"
#include "rydchain/register.hpp"

using namespace rydchain;

namespace {

Register distant(int n_A, double u = 200.0, std::optional<double> nnn = std::nullopt) {
  return build_register(Topology::distant_gate(n_A), u, nnn);
}

}  // namespace

TEST_CASE("register dimensions and default couplings") {
  const auto r0 = distant(0);
  CHECK(r0.dimension() == 9);
  REQUIRE(r0.couplings().pairs().size() == 1);
  CHECK(r0.couplings().contains(0, 1));
  CHECK(r0.couplings().shift(1, 0) == 200.0);

  const auto r2 = distant(2);
  CHECK(r2.dimension() == 36);
  const auto p = r2.couplings().pairs();
  REQUIRE(p.size() == 3);
  CHECK(p[0].i == 0);
  CHECK(p[0].j == 1);
  CHECK(p[1].i == 1);
  CHECK(p[1].j == 2);
  CHECK(p[2].i == 2);
  CHECK(p[2].j == 3);
  CHECK(r2.atom(0).label == "C");
  CHECK(r2.atom(1).label == "A1");
  CHECK(r2.atom(3).label == "T");

  const auto c3 = build_register(Topology::qubit_chain(3), 200.0);
  CHECK(c3.dimension() == 27);
  CHECK(c3.couplings().pairs().size() == 2);
  CHECK(c3.qubit_count() == 3);

  for (int n = 0; n <= 9; ++n) CHECK(distant(n).dimension() == 9L << n);
}

TEST_CASE("next-nearest couplings are opt-in") {
  const auto r = distant(2, 200.0, 25.0);
  const auto p = r.couplings().pairs();
  CHECK(p.size() == 5);
  CHECK(r.couplings().shift(0, 2) == 25.0);
  CHECK(r.couplings().shift(1, 3) == 25.0);
  CHECK(r.couplings().shift(0, 1) == 200.0);
  CHECK_FALSE(r.couplings().contains(0, 3));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(Topology::distant_gate(-1), ConfigError);
  CHECK_THROWS_AS(Topology::qubit_chain(1), ConfigError);
  CouplingMap m;
  CHECK_THROWS_AS(m.add(1, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(m.add(0, 1, -1.0), ConfigError);
  m.add(0, 5, 1.0);
  CHECK_THROWS_AS(build_register(Topology::distant_gate(1), m), ConfigError);
  CHECK_THROWS_AS((DecayRates{-1e-3, 0, 0}.validate()), ConfigError);
}

TEST_CASE("embedding against explicit Kronecker products") {
  const auto reg = distant(2);
  const auto sites = oracle::distant(2);
  const Matrix q = oracle::random_matrix(3, 7);
  const Matrix a = oracle::random_matrix(2, 8);
  CHECK((embed_operator(q, 0, reg).dense() - oracle::kron_embed(sites, 0, q)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((embed_operator(a, 2, reg).dense() - oracle::kron_embed(sites, 2, a)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((embed_operator(q, 3, reg).dense() - oracle::kron_embed(sites, 3, q)).cwiseAbs().maxCoeff() < 1e-14);

  const auto id = embed_operator(Matrix::Identity(2, 2), 1, reg).dense();
  CHECK(id.isIdentity(0.0));

  CHECK_THROWS_AS(embed_operator(q, 1, reg), ConfigError);
  CHECK_THROWS_AS(embed_operator(a, 9, reg), ConfigError);
}

TEST_CASE("excited projector on A1 has trace 9") {
  const auto reg = distant(1);
  Matrix pe = Matrix::Zero(2, 2);
  pe(1, 1) = 1.0;
  const auto p = embed_operator(pe, 1, reg).dense();
  // Count basis states with A1 excited by decoding base-(3,2,3) digits.
  int count = 0;
  for (int s = 0; s < 18; ++s) count += (s / 3) % 2 == 1;
  CHECK(count == 9);
  CHECK(p.trace().real() == doctest::Approx(count));
}

TEST_CASE("embedding is multiplicative and commutes across atoms") {
  const auto reg = distant(1);
  const Matrix x = oracle::random_matrix(3, 1);
  const Matrix y = oracle::random_matrix(3, 2);
  const Matrix z = oracle::random_matrix(2, 3);
  const auto ex = embed_operator(x, 0, reg);
  const auto ey = embed_operator(y, 0, reg);
  const auto ez = embed_operator(z, 1, reg);
  CHECK((embed_operator(x * y, 0, reg).dense() - (ex * ey).dense()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(((ex * ez).dense() - (ez * ex).dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interaction Hamiltonian") {
  const auto r0 = distant(0);
  const auto h0 = interaction_hamiltonian(r0).dense();
  CHECK(h0(8, 8).real() == 200.0);
  CHECK((h0.cwiseAbs().array() > 0).count() == 1);

  const Register empty({{"C", AtomKind::Qubit}, {"T", AtomKind::Qubit}}, CouplingMap{});
  CHECK(interaction_hamiltonian(empty).dense().isZero(0.0));

  for (int n : {1, 3}) {
    const auto sites = oracle::distant(n);
    auto pairs = oracle::nearest(sites.size(), 200.0);
    const Matrix ref = oracle::interaction(sites, pairs);
    CHECK((interaction_hamiltonian(distant(n)).dense() - ref).cwiseAbs().maxCoeff() < 1e-12);

    for (std::size_t i = 0; i + 2 < sites.size(); ++i)
      pairs.emplace_back(static_cast<int>(i), static_cast<int>(i + 2), 25.0);
    const Matrix ref_nnn = oracle::interaction(sites, pairs);
    CHECK((interaction_hamiltonian(distant(n, 200.0, 25.0)).dense() - ref_nnn).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("drive Hamiltonian") {
  const auto reg = distant(1);
  const auto sites = oracle::distant(1);
  CHECK(drive_hamiltonian(Pulse{0, Transition::Q0R, kPi, 0.0}, reg).dense().isZero(0.0));
  CHECK((drive_hamiltonian(Pulse{0, Transition::Q1R, kPi, 1.0}, reg).dense() - oracle::drive(sites, 0, 1, 1.0))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((drive_hamiltonian(Pulse{1, Transition::GE, kPi, 1.0}, reg).dense() - oracle::drive(sites, 1, 0, 1.0))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((drive_hamiltonian(Pulse{2, Transition::Q0R, kPi, 1.0}, reg).dense() - oracle::drive(sites, 2, 0, 1.0))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK_THROWS_AS(drive_hamiltonian(Pulse{1, Transition::Q0R, kPi, 1.0}, reg), ConfigError);
  CHECK_THROWS_AS(drive_hamiltonian(Pulse{0, Transition::GE, kPi, 1.0}, reg), ConfigError);
  CHECK_THROWS_AS(drive_hamiltonian(Pulse{7, Transition::GE, kPi, 1.0}, reg), ConfigError);

  const LindbladModel model(reg, DecayRates{});
  for (auto p : {Pulse{0, Transition::Q0R, kPi, 1.0}, Pulse{1, Transition::GE, kPi, 1.0}})
    CHECK(model.hamiltonian(p).is_hermitian());
}

TEST_CASE("two-level rotations of the local drive") {
  const Matrix h = local_drive(AtomKind::Ancilla, Transition::GE, 1.0);
  const Matrix u_pi = (cplx(0, -kPi) * h).exp();
  CHECK(std::abs(u_pi(1, 0) - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(u_pi(0, 0)) < 1e-14);
  const Matrix u_2pi = (cplx(0, -2 * kPi) * h).exp();
  CHECK(std::abs(u_2pi(0, 0) + 1.0) < 1e-14);
}

TEST_CASE("jump channels of the model") {
  const LindbladModel model(distant(1), DecayRates{1e-3, 2e-3, 3e-3});
  CHECK(model.channels().size() == 5);
  CHECK(model.active_channels().size() == 5);
  const LindbladModel only0(distant(1), DecayRates{1e-3, 0, 0});
  CHECK(only0.active_channels().size() == 2);

  const auto sites = oracle::distant(1);
  const auto ref = oracle::jumps(sites, 1e-3, 2e-3, 3e-3);
  Matrix sum_ref = Matrix::Zero(18, 18);
  for (const auto& l : ref) sum_ref += l.adjoint() * l;
  CHECK((model.decay_profile() - sum_ref.diagonal().real()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sum_ref - Matrix(sum_ref.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}
