#pragma once
// Brute-force reference constructions shared by the unit tests. Nothing here calls
// the library's embedding, interaction or propagation code.

#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "rydchain/types.hpp"

namespace oracle {

using rydchain::cplx;
using rydchain::Matrix;
using rydchain::Vector;

struct Site {
  int dim;        // 3 for a qubit, 2 for an ancilla
  int rydberg;    // index of the Rydberg level
};

inline std::vector<Site> distant(int n_A) {
  std::vector<Site> s{{3, 2}};
  for (int i = 0; i < n_A; ++i) s.push_back({2, 1});
  s.push_back({3, 2});
  return s;
}

inline std::vector<Site> chain(int m) { return std::vector<Site>(static_cast<std::size_t>(m), Site{3, 2}); }

inline long total_dim(const std::vector<Site>& s) {
  long d = 1;
  for (const auto& x : s) d *= x.dim;
  return d;
}

/// I x ... x op x ... x I by explicit Kronecker products.
inline Matrix kron_embed(const std::vector<Site>& sites, std::size_t at, const Matrix& op) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const Matrix f = i == at ? op : Matrix(Matrix::Identity(sites[i].dim, sites[i].dim));
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

inline Matrix unit(int dim, int row, int col) {
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

/// Sum of shift * P_i P_j over the given pairs, as a product of embedded projectors.
inline Matrix interaction(const std::vector<Site>& sites, const std::vector<std::tuple<int, int, double>>& pairs) {
  const long d = total_dim(sites);
  Matrix h = Matrix::Zero(d, d);
  for (const auto& [i, j, u] : pairs) {
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(j);
    h += u * kron_embed(sites, a, unit(sites[a].dim, sites[a].rydberg, sites[a].rydberg)) *
         kron_embed(sites, b, unit(sites[b].dim, sites[b].rydberg, sites[b].rydberg));
  }
  return h;
}

inline std::vector<std::tuple<int, int, double>> nearest(std::size_t n, double u) {
  std::vector<std::tuple<int, int, double>> p;
  for (std::size_t i = 0; i + 1 < n; ++i) p.emplace_back(static_cast<int>(i), static_cast<int>(i + 1), u);
  return p;
}

/// Drive (rabi/2)(|k><r| + h.c.) on one site; k = lower level.
inline Matrix drive(const std::vector<Site>& sites, std::size_t at, int k, double rabi) {
  const auto& s = sites[at];
  Matrix local = 0.5 * rabi * (unit(s.dim, k, s.rydberg) + unit(s.dim, s.rydberg, k));
  return kron_embed(sites, at, local);
}

/// sqrt(g0)|0><r|, sqrt(g1)|1><r| on qubits; sqrt(gA)|g><e| on ancillas.
inline std::vector<Matrix> jumps(const std::vector<Site>& sites, double g0, double g1, double gA) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].dim == 3) {
      if (g0 > 0) out.push_back(std::sqrt(g0) * kron_embed(sites, i, unit(3, 0, 2)));
      if (g1 > 0) out.push_back(std::sqrt(g1) * kron_embed(sites, i, unit(3, 1, 2)));
    } else if (gA > 0) {
      out.push_back(std::sqrt(gA) * kron_embed(sites, i, unit(2, 0, 1)));
    }
  }
  return out;
}

/// Column-stacking Lindblad superoperator: vec(L[rho]) = S vec(rho).
inline Matrix liouvillian(const Matrix& h, const std::vector<Matrix>& ls) {
  const long d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix s = -cplx(0, 1) * (Eigen::kroneckerProduct(id, h).eval() - Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& l : ls) {
    const Matrix ldl = l.adjoint() * l;
    s += Eigen::kroneckerProduct(l.conjugate(), l).eval();
    s -= 0.5 * Eigen::kroneckerProduct(id, ldl).eval();
    s -= 0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval();
  }
  return s;
}

inline Matrix evolve(const Matrix& super, double t, const Matrix& rho) {
  const long d = rho.rows();
  const Matrix prop = (super * t).exp();
  Vector v = Eigen::Map<const Vector>(rho.data(), d * d);
  Vector out = prop * v;
  return Eigen::Map<Matrix>(out.data(), d, d);
}

/// Lindblad right-hand side in matrix form.
inline Matrix lindblad_rhs(const Matrix& h, const std::vector<Matrix>& ls, const Matrix& rho) {
  const cplx i(0, 1);
  Matrix out = -i * (h * rho - rho * h);
  for (const auto& l : ls) {
    const Matrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

/// exp(t L) rho by a Taylor series on short substeps; for registers too large for `evolve`.
inline Matrix evolve_taylor(const Matrix& h, const std::vector<Matrix>& ls, double t, const Matrix& rho) {
  const double scale = h.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  const int steps = static_cast<int>(std::ceil(t * scale / 0.25));
  const double dt = t / steps;
  Matrix x = rho;
  for (int s = 0; s < steps; ++s) {
    Matrix term = x;
    Matrix sum = x;
    for (int k = 1; k <= 30; ++k) {
      term = lindblad_rhs(h, ls, term) * (dt / k);
      sum += term;
      if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    x = sum;
  }
  return x;
}

inline Matrix random_matrix(long d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Matrix m(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

inline Matrix random_density(long d, std::uint64_t seed) {
  const Matrix a = random_matrix(d, seed);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline Matrix random_unitary(long d, std::uint64_t seed) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(d, seed));
  return qr.householderQ() * Matrix::Identity(d, d);
}

}  // namespace oracle
