#pragma once

// Exact propagators for one constant-Hamiltonian pulse segment.
//
// During a pulse only one atom is driven and the interaction is diagonal, so
// H_eff = H - (i/2) sum L^dagger L is block diagonal with one s x s block per
// configuration of the undriven atoms. The Lindblad generator inherits a
// coarser structure: density-matrix entries split into closed classes, where a
// class collects all entries reachable from a "top" entry by jumps of the
// undriven atoms. Each class is exponentiated on its own.

#include <memory>
#include <unordered_map>
#include <vector>

#include "rydchain/model.hpp"

namespace rydchain {

/// Permutation of basis indices implementing sigma_x on the coding levels of a qubit atom.
std::vector<Index> sigma_x_permutation(const Register& reg, std::size_t atom);

/// Pure-state no-jump propagator exp(-i H_eff t) for one pulse.
class NoJumpSegment {
 public:
  NoJumpSegment(const LindbladModel& model, const Pulse& pulse);

  double duration() const { return duration_; }
  /// exp(-i H_eff t) psi for 0 <= t; the full-duration exponential is cached.
  Vector apply(const Vector& psi, double t) const;
  Vector apply_full(const Vector& psi) const;

 private:
  std::vector<Matrix> exponentials(double t) const;
  Vector apply_with(const std::vector<Matrix>& exps, const Vector& psi) const;

  double duration_ = 0.0;
  int local_dim_ = 0;
  std::vector<Index> block_base_;  // first global index of each block
  std::vector<int> block_kind_;    // index into distinct_
  Index stride_ = 1;
  std::vector<Matrix> distinct_;   // distinct H_eff blocks
  std::vector<Matrix> full_exps_;
};

/// Exact Lindblad propagator for one pulse, applied blockwise to batches of operators.
///
/// Inside a class the undriven atoms that sit on the diagonal in a decaying level
/// ("collapsed" atoms) only ever jump downwards. Those not coupled to the driven atom
/// enter the generator through additive scalars, so the class propagator factorizes
/// into a core exponential (driven atom x coupled collapsed atoms) tensored with one
/// small decay-chain exponential per remaining collapsed atom.
class LiouvilleSegment {
 public:
  /// Classes whose entries are all below prune * max|entry| of every operator are zeroed.
  LiouvilleSegment(const LindbladModel& model, const Pulse& pulse, double prune = 1e-15);

  /// In-place propagation of each (dim x dim) operator through the pulse.
  void apply(std::vector<Matrix>& ops) const;

  std::size_t class_count() const { return classes_.size(); }
  std::size_t exponentials_computed() const { return cache_.size(); }

 private:
  struct Mode {
    Matrix propagator;  // exp(M_j T) on the states of one collapsed atom
  };
  struct Class {
    std::vector<Index> members;  // flat x + y * dim, core index fastest, then modes in order
    const Matrix* core = nullptr;
    Index core_dim = 0;
    std::vector<Mode> modes;
    cplx scale = 1.0;  // exp(sigma T) of the class-constant part of the generator
  };

  void build_class(Index top_x, Index top_y, Class& c);

  const LindbladModel* model_;
  std::size_t atom_;
  int local_dim_;
  Matrix local_h_;
  double duration_;
  double prune_;
  Index dim_;
  std::vector<JumpChannel> active_;
  std::vector<int> upper_;                 // decaying level per undriven atom, -1 if none
  std::vector<std::vector<int>> states_;   // collapsed-state ladder per undriven atom: upper, then lowers
  std::vector<std::vector<double>> rates_; // decay rate into each lower of states_
  std::vector<Class> classes_;
  std::unordered_map<std::string, std::unique_ptr<Matrix>> cache_;
};

}  // namespace rydchain
