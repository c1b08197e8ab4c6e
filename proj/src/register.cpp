#include "rydchain/register.hpp"

#include <algorithm>
#include <cmath>

namespace rydchain {

std::string_view to_string(Transition t) {
  switch (t) {
    case Transition::Q0R: return "Q0R";
    case Transition::Q1R: return "Q1R";
    case Transition::GE: return "GE";
  }
  return "?";
}

void CouplingMap::add(std::size_t i, std::size_t j, double shift) {
  if (i == j) throw ConfigError("coupling between an atom and itself");
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw ConfigError("coupling shifts must be finite and non-negative");
  entries_[{i, j}] = shift;
  entries_[{j, i}] = shift;
}

double CouplingMap::shift(std::size_t i, std::size_t j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? 0.0 : it->second;
}

bool CouplingMap::contains(std::size_t i, std::size_t j) const { return entries_.count({i, j}) != 0; }

std::vector<Coupling> CouplingMap::pairs() const {
  std::vector<Coupling> out;
  for (const auto& [key, u] : entries_) {
    if (key.first < key.second) out.push_back({key.first, key.second, u});
  }
  return out;
}

double CouplingMap::max_shift() const {
  double m = 0.0;
  for (const auto& [key, u] : entries_) m = std::max(m, u);
  return m;
}

Topology Topology::distant_gate(int n_ancilla) {
  if (n_ancilla < 0) throw ConfigError("ancilla count must be non-negative");
  return Topology(Kind::DistantGate, n_ancilla);
}

Topology Topology::qubit_chain(int m) {
  if (m < 2) throw ConfigError("a qubit chain needs at least two atoms");
  return Topology(Kind::QubitChain, m);
}

std::size_t Topology::atom_count() const {
  return kind_ == Kind::DistantGate ? static_cast<std::size_t>(count_) + 2 : static_cast<std::size_t>(count_);
}

CouplingMap chain_couplings(const Topology& topology, double u, std::optional<double> next_nearest) {
  CouplingMap map;
  const std::size_t n = topology.atom_count();
  for (std::size_t i = 0; i + 1 < n; ++i) map.add(i, i + 1, u);
  if (next_nearest) {
    for (std::size_t i = 0; i + 2 < n; ++i) map.add(i, i + 2, *next_nearest);
  }
  return map;
}

Register::Register(std::vector<Atom> atoms, CouplingMap couplings)
    : atoms_(std::move(atoms)), couplings_(std::move(couplings)) {
  if (atoms_.empty()) throw ConfigError("register needs at least one atom");
  for (const auto& c : couplings_.pairs()) {
    if (c.j >= atoms_.size()) throw ConfigError("coupling names an atom absent from the register");
  }
  strides_.assign(atoms_.size(), 1);
  dimension_ = 1;
  for (std::size_t k = atoms_.size(); k-- > 0;) {
    strides_[k] = dimension_;
    dimension_ *= local_dimension(atoms_[k].kind);
  }
}

int Register::rydberg_count(Index state) const {
  int n = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) n += is_rydberg(state, i) ? 1 : 0;
  return n;
}

std::optional<std::size_t> Register::find(const std::string& label) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].label == label) return i;
  }
  return std::nullopt;
}

std::size_t Register::index_of(const std::string& label) const {
  auto i = find(label);
  if (!i) throw ConfigError("no atom labelled " + label);
  return *i;
}

std::size_t Register::qubit_count() const {
  return static_cast<std::size_t>(
      std::count_if(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.kind == AtomKind::Qubit; }));
}

std::size_t Register::ancilla_count() const { return atoms_.size() - qubit_count(); }

Register build_register(const Topology& topology, const CouplingMap& couplings) {
  std::vector<Atom> atoms;
  if (topology.kind() == Topology::Kind::DistantGate) {
    atoms.push_back({"C", AtomKind::Qubit});
    for (int i = 1; i <= topology.count(); ++i) atoms.push_back({"A" + std::to_string(i), AtomKind::Ancilla});
    atoms.push_back({"T", AtomKind::Qubit});
  } else {
    for (int i = 0; i < topology.count(); ++i) atoms.push_back({"q" + std::to_string(i), AtomKind::Qubit});
  }
  return Register(std::move(atoms), couplings);
}

Register build_register(const Topology& topology, double u, std::optional<double> next_nearest) {
  return build_register(topology, chain_couplings(topology, u, next_nearest));
}

void DecayRates::validate() const {
  for (double g : {gamma0, gamma1, gammaA}) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("decay rates must be finite and non-negative");
  }
}

bool OperatorMatrix::is_hermitian(double rel_tol) const {
  const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double scale = 0.0;
  double worst = 0.0;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst <= rel_tol * scale;
}

OperatorMatrix embed_operator(const Matrix& local_op, std::size_t atom_index, const Register& reg) {
  if (atom_index >= reg.size()) throw ConfigError("atom index out of range");
  const int d = reg.local_dim(atom_index);
  if (local_op.rows() != d || local_op.cols() != d) throw ConfigError("local operator dimension mismatch");
  std::vector<Eigen::Triplet<cplx>> triplets;
  const Index dim = reg.dimension();
  for (Index col = 0; col < dim; ++col) {
    const int b = reg.level_of(col, atom_index);
    for (int a = 0; a < d; ++a) {
      const cplx v = local_op(a, b);
      if (v != cplx(0.0)) triplets.emplace_back(reg.with_level(col, atom_index, a), col, v);
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return OperatorMatrix(std::move(m));
}

Eigen::VectorXd interaction_energies(const Register& reg) {
  const auto pairs = reg.couplings().pairs();
  Eigen::VectorXd energies = Eigen::VectorXd::Zero(reg.dimension());
  for (Index x = 0; x < reg.dimension(); ++x) {
    double e = 0.0;
    for (const auto& c : pairs) {
      if (reg.is_rydberg(x, c.i) && reg.is_rydberg(x, c.j)) e += c.shift;
    }
    energies[x] = e;
  }
  return energies;
}

OperatorMatrix interaction_hamiltonian(const Register& reg) {
  const Eigen::VectorXd energies = interaction_energies(reg);
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (Index x = 0; x < energies.size(); ++x) {
    if (energies[x] != 0.0) triplets.emplace_back(x, x, energies[x]);
  }
  SparseMatrix m(reg.dimension(), reg.dimension());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return OperatorMatrix(std::move(m));
}

Matrix local_drive(AtomKind kind, Transition transition, double rabi) {
  const int d = local_dimension(kind);
  Matrix h = Matrix::Zero(d, d);
  int lower = 0;
  int upper = 0;
  if (kind == AtomKind::Qubit) {
    if (transition == Transition::GE) throw ConfigError("GE transition addressed to a qubit atom");
    lower = transition == Transition::Q0R ? level::zero : level::one;
    upper = level::r;
  } else {
    if (transition != Transition::GE) throw ConfigError("qubit transition addressed to an ancilla atom");
    lower = level::g;
    upper = level::e;
  }
  h(lower, upper) = 0.5 * rabi;
  h(upper, lower) = 0.5 * rabi;
  return h;
}

OperatorMatrix drive_hamiltonian(const Pulse& pulse, const Register& reg) {
  if (pulse.atom >= reg.size()) throw ConfigError("pulse addresses an atom outside the register");
  return embed_operator(local_drive(reg.atom(pulse.atom).kind, pulse.transition, pulse.rabi), pulse.atom, reg);
}

}  // namespace rydchain
