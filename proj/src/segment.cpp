#include "rydchain/segment.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace rydchain {

namespace {

std::string matrix_key(const Matrix& m) {
  std::string key(sizeof(Index), '\0');
  const Index n = m.rows();
  std::memcpy(key.data(), &n, sizeof(Index));
  key.append(reinterpret_cast<const char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(cplx));
  return key;
}

Matrix pulse_local_hamiltonian(const LindbladModel& model, const Pulse& pulse) {
  if (pulse.atom >= model.reg().size()) throw ConfigError("pulse addresses an atom outside the register");
  if (!(pulse.rabi > 0.0) || !(pulse.area > 0.0)) throw ConfigError("pulses need positive area and Rabi frequency");
  return local_drive(model.reg().atom(pulse.atom).kind, pulse.transition, pulse.rabi);
}

}  // namespace

std::vector<Index> sigma_x_permutation(const Register& reg, std::size_t atom) {
  if (atom >= reg.size() || reg.atom(atom).kind != AtomKind::Qubit) {
    throw ConfigError("sigma_x frame applies to qubit atoms only");
  }
  std::vector<Index> perm(static_cast<std::size_t>(reg.dimension()));
  for (Index x = 0; x < reg.dimension(); ++x) {
    const int l = reg.level_of(x, atom);
    perm[static_cast<std::size_t>(x)] = l == level::r ? x : reg.with_level(x, atom, 1 - l);
  }
  return perm;
}

NoJumpSegment::NoJumpSegment(const LindbladModel& model, const Pulse& pulse) {
  const Register& reg = model.reg();
  const Matrix h = pulse_local_hamiltonian(model, pulse);
  duration_ = pulse.duration();
  local_dim_ = reg.local_dim(pulse.atom);
  stride_ = reg.stride(pulse.atom);

  std::unordered_map<std::string, int> index;
  for (Index x = 0; x < reg.dimension(); ++x) {
    if (reg.level_of(x, pulse.atom) != 0) continue;
    Matrix block = h;
    for (int l = 0; l < local_dim_; ++l) {
      const Index xl = x + l * stride_;
      block(l, l) += cplx(model.interaction()[xl], -0.5 * model.decay_profile()[xl]);
    }
    auto key = matrix_key(block);
    auto [it, inserted] = index.try_emplace(key, static_cast<int>(distinct_.size()));
    if (inserted) distinct_.push_back(block);
    block_base_.push_back(x);
    block_kind_.push_back(it->second);
  }
  full_exps_ = exponentials(duration_);
}

std::vector<Matrix> NoJumpSegment::exponentials(double t) const {
  std::vector<Matrix> out;
  out.reserve(distinct_.size());
  for (const auto& b : distinct_) out.push_back(Matrix((cplx(0.0, -t) * b).exp()));
  return out;
}

Vector NoJumpSegment::apply_with(const std::vector<Matrix>& exps, const Vector& psi) const {
  Vector out(psi.size());
  Vector local(local_dim_);
  for (std::size_t b = 0; b < block_base_.size(); ++b) {
    const Index base = block_base_[b];
    for (int l = 0; l < local_dim_; ++l) local[l] = psi[base + l * stride_];
    const Vector res = exps[static_cast<std::size_t>(block_kind_[b])] * local;
    for (int l = 0; l < local_dim_; ++l) out[base + l * stride_] = res[l];
  }
  return out;
}

Vector NoJumpSegment::apply(const Vector& psi, double t) const {
  if (t == duration_) return apply_with(full_exps_, psi);
  return apply_with(exponentials(t), psi);
}

Vector NoJumpSegment::apply_full(const Vector& psi) const { return apply_with(full_exps_, psi); }

LiouvilleSegment::LiouvilleSegment(const LindbladModel& model, const Pulse& pulse, double prune)
    : model_(&model),
      atom_(pulse.atom),
      local_dim_(model.reg().local_dim(pulse.atom)),
      local_h_(pulse_local_hamiltonian(model, pulse)),
      duration_(pulse.duration()),
      prune_(prune),
      dim_(model.reg().dimension()),
      active_(model.active_channels()) {
  const Register& reg = model.reg();
  upper_.assign(reg.size(), -1);
  states_.resize(reg.size());
  rates_.resize(reg.size());
  for (const auto& c : active_) {
    if (c.atom == atom_) continue;
    if (upper_[c.atom] != -1 && upper_[c.atom] != c.upper) {
      throw ConfigError("one decaying level per atom is supported");
    }
    if (upper_[c.atom] == -1) states_[c.atom].push_back(c.upper);
    upper_[c.atom] = c.upper;
    states_[c.atom].push_back(c.lower);
    rates_[c.atom].push_back(c.rate);
  }

  std::unordered_map<Index, std::size_t> seen;
  std::vector<std::pair<Index, Index>> tops;
  for (Index y = 0; y < dim_; ++y) {
    if (reg.level_of(y, atom_) != 0) continue;
    for (Index x = 0; x < dim_; ++x) {
      if (reg.level_of(x, atom_) != 0) continue;
      Index tx = x;
      Index ty = y;
      for (std::size_t j = 0; j < reg.size(); ++j) {
        if (upper_[j] < 0) continue;
        const int lx = reg.level_of(x, j);
        if (lx != reg.level_of(y, j)) continue;
        if (std::find(states_[j].begin(), states_[j].end(), lx) != states_[j].end()) {
          tx = reg.with_level(tx, j, upper_[j]);
          ty = reg.with_level(ty, j, upper_[j]);
        }
      }
      if (seen.emplace(tx + ty * dim_, tops.size()).second) tops.emplace_back(tx, ty);
    }
  }
  classes_.resize(tops.size());
  for (std::size_t k = 0; k < tops.size(); ++k) build_class(tops[k].first, tops[k].second, classes_[k]);
}

void LiouvilleSegment::build_class(Index tx, Index ty, Class& c) {
  const Register& reg = model_->reg();
  const auto& energy = model_->interaction();
  const auto& decay = model_->decay_profile();
  const int d = local_dim_;

  std::vector<std::size_t> core_atoms;
  std::vector<std::size_t> mode_atoms;
  for (std::size_t j = 0; j < reg.size(); ++j) {
    if (j == atom_ || upper_[j] < 0) continue;
    if (reg.level_of(tx, j) != upper_[j] || reg.level_of(ty, j) != upper_[j]) continue;
    if (reg.couplings().shift(j, atom_) != 0.0) core_atoms.push_back(j);
    else mode_atoms.push_back(j);
  }

  auto diag = [&](Index x, Index y) {
    const int xa = reg.level_of(x, atom_);
    const int ya = reg.level_of(y, atom_);
    return -kI * (energy[x] + local_h_(xa, xa) - energy[y] - local_h_(ya, ya)) - 0.5 * (decay[x] + decay[y]);
  };

  // Core index: xa + d * ya, then the state of each core atom (mixed radix).
  Index core_dim = d * d;
  for (auto k : core_atoms) core_dim *= static_cast<Index>(states_[k].size());
  auto core_state = [&](Index i, Index& x, Index& y) {
    x = reg.with_level(tx, atom_, static_cast<int>(i % d));
    i /= d;
    y = reg.with_level(ty, atom_, static_cast<int>(i % d));
    i /= d;
    for (auto k : core_atoms) {
      const auto n = static_cast<Index>(states_[k].size());
      const int lvl = states_[k][static_cast<std::size_t>(i % n)];
      x = reg.with_level(x, k, lvl);
      y = reg.with_level(y, k, lvl);
      i /= n;
    }
  };
  auto core_index = [&](Index x, Index y) {
    Index i = 0;
    Index radix = 1;
    i += reg.level_of(x, atom_) * radix;
    radix *= d;
    i += reg.level_of(y, atom_) * radix;
    radix *= d;
    for (auto k : core_atoms) {
      const auto& st = states_[k];
      const auto pos = std::find(st.begin(), st.end(), reg.level_of(x, k)) - st.begin();
      i += static_cast<Index>(pos) * radix;
      radix *= static_cast<Index>(st.size());
    }
    return i;
  };

  // Class constant: the generator diagonal at core index 0 with every mode atom in its upper level.
  Index x0;
  Index y0;
  core_state(0, x0, y0);
  const cplx sigma = diag(x0, y0);

  Matrix gen = Matrix::Zero(core_dim, core_dim);
  for (Index i = 0; i < core_dim; ++i) {
    Index x;
    Index y;
    core_state(i, x, y);
    gen(i, i) += diag(x, y) - sigma;
    const int xa = reg.level_of(x, atom_);
    const int ya = reg.level_of(y, atom_);
    for (int l = 0; l < d; ++l) {
      if (l != xa && local_h_(xa, l) != cplx(0.0)) gen(i, core_index(reg.with_level(x, atom_, l), y)) += -kI * local_h_(xa, l);
      if (l != ya && local_h_(l, ya) != cplx(0.0)) gen(i, core_index(x, reg.with_level(y, atom_, l))) += kI * local_h_(l, ya);
    }
    for (const auto& ch : active_) {
      const bool core_atom = ch.atom == atom_ || std::find(core_atoms.begin(), core_atoms.end(), ch.atom) != core_atoms.end();
      if (!core_atom) continue;
      if (reg.level_of(x, ch.atom) != ch.upper || reg.level_of(y, ch.atom) != ch.upper) continue;
      gen(core_index(reg.with_level(x, ch.atom, ch.lower), reg.with_level(y, ch.atom, ch.lower)), i) += ch.rate;
    }
  }
  auto key = matrix_key(gen);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(std::move(key), std::make_unique<Matrix>((gen * duration_).exp())).first;
  }
  c.core = it->second.get();
  c.core_dim = core_dim;
  c.scale = std::exp(sigma * duration_);

  // Mode j: diagonal shift of each state relative to the upper level, plus decay inflow.
  std::vector<std::vector<cplx>> shifts;
  for (auto j : mode_atoms) {
    const auto& st = states_[j];
    const auto n = static_cast<Index>(st.size());
    Matrix m = Matrix::Zero(n, n);
    std::vector<cplx> shift(st.size());
    for (Index s = 0; s < n; ++s) {
      const Index xs = reg.with_level(x0, j, st[static_cast<std::size_t>(s)]);
      const Index ys = reg.with_level(y0, j, st[static_cast<std::size_t>(s)]);
      shift[static_cast<std::size_t>(s)] = diag(xs, ys) - sigma;
      m(s, s) = shift[static_cast<std::size_t>(s)];
      if (s > 0) m(s, 0) += rates_[j][static_cast<std::size_t>(s - 1)];
    }
    shifts.push_back(std::move(shift));
    c.modes.push_back({Matrix((m * duration_).exp())});
  }

  // Members in tensor order, checking that the diagonal really separates.
  Index total = core_dim;
  for (auto j : mode_atoms) total *= static_cast<Index>(states_[j].size());
  c.members.resize(static_cast<std::size_t>(total));
  for (Index f = 0; f < total; ++f) {
    Index x;
    Index y;
    core_state(f % core_dim, x, y);
    Index rest = f / core_dim;
    cplx expected = gen(f % core_dim, f % core_dim) + sigma;
    for (std::size_t q = 0; q < mode_atoms.size(); ++q) {
      const auto j = mode_atoms[q];
      const auto n = static_cast<Index>(states_[j].size());
      const auto s = static_cast<std::size_t>(rest % n);
      x = reg.with_level(x, j, states_[j][s]);
      y = reg.with_level(y, j, states_[j][s]);
      expected += shifts[q][s];
      rest /= n;
    }
    if (std::abs(diag(x, y) - expected) > 1e-9 * (1.0 + std::abs(expected))) {
      throw NumericalError("Liouvillian class does not factorize");
    }
    c.members[static_cast<std::size_t>(f)] = x + y * dim_;
  }
}

void LiouvilleSegment::apply(std::vector<Matrix>& ops) const {
  std::vector<double> threshold;
  threshold.reserve(ops.size());
  for (const auto& op : ops) {
    if (op.rows() != dim_ || op.cols() != dim_) throw ConfigError("operator dimension does not match the register");
    threshold.push_back(prune_ * op.cwiseAbs().maxCoeff());
  }
  const Index nops = static_cast<Index>(ops.size());
  Matrix gathered;
  Matrix work;
  Vector local;
  for (const auto& c : classes_) {
    bool populated = false;
    for (std::size_t o = 0; o < ops.size() && !populated; ++o) {
      const cplx* data = ops[o].data();
      for (Index f : c.members) {
        if (std::abs(data[f]) > threshold[o]) {
          populated = true;
          break;
        }
      }
    }
    if (!populated) {
      for (auto& op : ops)
        for (Index f : c.members) op.data()[f] = 0.0;
      continue;
    }
    const Index n = static_cast<Index>(c.members.size());
    gathered.resize(n, nops);
    for (Index o = 0; o < nops; ++o) {
      const cplx* data = ops[static_cast<std::size_t>(o)].data();
      for (Index p = 0; p < n; ++p) gathered(p, o) = data[c.members[static_cast<std::size_t>(p)]];
    }
    const Index cols = n / c.core_dim * nops;
    work.noalias() = *c.core * Eigen::Map<const Matrix>(gathered.data(), c.core_dim, cols);
    Eigen::Map<Matrix>(gathered.data(), c.core_dim, cols) = work;

    Index inner = c.core_dim;
    for (const auto& mode : c.modes) {
      const Index k = mode.propagator.rows();
      const Index outer = n * nops / (inner * k);
      local.resize(k);
      cplx* data = gathered.data();
      for (Index o = 0; o < outer; ++o) {
        for (Index i = 0; i < inner; ++i) {
          cplx* base = data + o * k * inner + i;
          for (Index s = 0; s < k; ++s) local[s] = base[s * inner];
          for (Index s = 0; s < k; ++s) {
            cplx acc = 0.0;
            for (Index t = 0; t < k; ++t) acc += mode.propagator(s, t) * local[t];
            base[s * inner] = acc;
          }
        }
      }
      inner *= k;
    }

    for (Index o = 0; o < nops; ++o) {
      cplx* data = ops[static_cast<std::size_t>(o)].data();
      for (Index p = 0; p < n; ++p) data[c.members[static_cast<std::size_t>(p)]] = c.scale * gathered(p, o);
    }
  }
}

}  // namespace rydchain
