#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydchain/pulse.hpp"
#include "rydchain/types.hpp"

namespace rydchain {

/// Qubit atoms carry levels (|0>, |1>, |r>) -> (0, 1, 2); ancillas carry (|g>, |e>) -> (0, 1).
enum class AtomKind { Qubit, Ancilla };

constexpr int local_dimension(AtomKind kind) { return kind == AtomKind::Qubit ? 3 : 2; }
constexpr int rydberg_level(AtomKind kind) { return kind == AtomKind::Qubit ? 2 : 1; }

namespace level {
inline constexpr int zero = 0;
inline constexpr int one = 1;
inline constexpr int r = 2;
inline constexpr int g = 0;
inline constexpr int e = 1;
}  // namespace level

struct Atom {
  std::string label;
  AtomKind kind = AtomKind::Ancilla;
};

struct Coupling {
  std::size_t i = 0;
  std::size_t j = 0;
  double shift = 0.0;
};

/// Symmetric set of doubly-excited energy shifts U_ij (units of Omega).
class CouplingMap {
 public:
  /// Inserts (i, j) and (j, i). Throws on i == j or a negative shift.
  void add(std::size_t i, std::size_t j, double shift);

  double shift(std::size_t i, std::size_t j) const;
  bool contains(std::size_t i, std::size_t j) const;
  bool empty() const { return entries_.empty(); }

  /// Unique pairs with i < j, in lexicographic order.
  std::vector<Coupling> pairs() const;
  double max_shift() const;

 private:
  std::map<std::pair<std::size_t, std::size_t>, double> entries_;
};

class Topology {
 public:
  enum class Kind { DistantGate, QubitChain };

  /// Control, n_ancilla ancillas, target.
  static Topology distant_gate(int n_ancilla);
  /// m three-level qubit atoms q0..q{m-1}.
  static Topology qubit_chain(int m);

  Kind kind() const { return kind_; }
  int count() const { return count_; }
  std::size_t atom_count() const;

 private:
  Topology(Kind kind, int count) : kind_(kind), count_(count) {}
  Kind kind_;
  int count_;
};

/// Adjacency couplings at strength u along the canonical chain; optional
/// next-nearest-neighbour entries at strength next_nearest.
CouplingMap chain_couplings(const Topology& topology, double u,
                            std::optional<double> next_nearest = std::nullopt);

/// Ordered atoms with the leftmost factor most significant in basis indexing.
class Register {
 public:
  Register(std::vector<Atom> atoms, CouplingMap couplings);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }
  std::size_t size() const { return atoms_.size(); }
  Index dimension() const { return dimension_; }
  int local_dim(std::size_t i) const { return local_dimension(atoms_.at(i).kind); }
  Index stride(std::size_t i) const { return strides_.at(i); }
  const CouplingMap& couplings() const { return couplings_; }

  /// Level of atom i in global basis state `state`.
  int level_of(Index state, std::size_t i) const { return static_cast<int>((state / strides_[i]) % local_dim(i)); }
  Index with_level(Index state, std::size_t i, int lvl) const {
    return state + (lvl - level_of(state, i)) * strides_[i];
  }
  bool is_rydberg(Index state, std::size_t i) const { return level_of(state, i) == rydberg_level(atoms_[i].kind); }
  int rydberg_count(Index state) const;

  std::optional<std::size_t> find(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;

  std::size_t qubit_count() const;
  std::size_t ancilla_count() const;

 private:
  std::vector<Atom> atoms_;
  CouplingMap couplings_;
  std::vector<Index> strides_;
  Index dimension_ = 1;
};

Register build_register(const Topology& topology, const CouplingMap& couplings);
Register build_register(const Topology& topology, double u, std::optional<double> next_nearest = std::nullopt);

/// Decay rates in units of Omega: qubit |r> -> |0>, |r> -> |1>, ancilla |e> -> |g>.
struct DecayRates {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gammaA = 0.0;

  double gamma_q() const { return gamma0 + gamma1; }
  bool zero() const { return gamma0 == 0.0 && gamma1 == 0.0 && gammaA == 0.0; }
  void validate() const;
};

/// Sparse operator on the register Hilbert space.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(SparseMatrix m) : matrix_(std::move(m)) { matrix_.makeCompressed(); }

  Index dimension() const { return matrix_.rows(); }
  const SparseMatrix& sparse() const { return matrix_; }
  Matrix dense() const { return Matrix(matrix_); }
  bool is_hermitian(double rel_tol = 1e-12) const;

  OperatorMatrix operator*(const OperatorMatrix& o) const { return OperatorMatrix(SparseMatrix(matrix_ * o.matrix_)); }
  OperatorMatrix operator+(const OperatorMatrix& o) const { return OperatorMatrix(SparseMatrix(matrix_ + o.matrix_)); }

 private:
  SparseMatrix matrix_;
};

/// I (x) ... (x) local_op (x) ... (x) I in canonical atom order.
OperatorMatrix embed_operator(const Matrix& local_op, std::size_t atom_index, const Register& reg);

/// Diagonal of the doubly-excited shift Hamiltonian.
Eigen::VectorXd interaction_energies(const Register& reg);
OperatorMatrix interaction_hamiltonian(const Register& reg);

/// (rabi/2)(|k><r| + |r><k|) or (rabi/2)(|g><e| + |e><g|) as a local matrix.
Matrix local_drive(AtomKind kind, Transition transition, double rabi);
OperatorMatrix drive_hamiltonian(const Pulse& pulse, const Register& reg);

}  // namespace rydchain
