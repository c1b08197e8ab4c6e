#include "rydchain/mcwf.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <tuple>

#include "rydchain/parallel.hpp"
#include "rydchain/segment.hpp"

namespace rydchain {

TrajectoryRng::TrajectoryRng(std::uint64_t seed_base, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_base), static_cast<std::uint32_t>(seed_base >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x72796463u};
  engine_.seed(seq);
}

double TrajectoryRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kUnderflow = 1e-200;

void apply_jump(const LindbladModel& model, const JumpChannel& ch, Vector& psi) {
  const Register& reg = model.reg();
  Vector out = Vector::Zero(psi.size());
  const double amp = std::sqrt(ch.rate);
  for (Index x = 0; x < psi.size(); ++x) {
    if (reg.level_of(x, ch.atom) == ch.upper) out[reg.with_level(x, ch.atom, ch.lower)] += amp * psi[x];
  }
  psi = std::move(out);
}

double jump_weight(const LindbladModel& model, const JumpChannel& ch, const Vector& psi) {
  const Register& reg = model.reg();
  double w = 0.0;
  for (Index x = 0; x < psi.size(); ++x) {
    if (reg.level_of(x, ch.atom) == ch.upper) w += std::norm(psi[x]);
  }
  return ch.rate * w;
}

// Jump after the no-jump evolution brought |psi|^2 down to `r`.
void do_jump(const LindbladModel& model, Vector& psi, TrajectoryRng& rng, double time,
             std::vector<JumpEvent>& jumps) {
  const auto& channels = model.channels();
  std::vector<double> weights(channels.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (channels[k].rate > 0.0) weights[k] = jump_weight(model, channels[k], psi);
    total += weights[k];
  }
  if (!(total > 0.0)) throw NumericalError("jump requested with no decaying population");
  const double pick = rng.uniform() * total;
  double acc = 0.0;
  std::size_t chosen = channels.size();
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    chosen = k;
    if (pick < acc) break;
  }
  apply_jump(model, channels[chosen], psi);
  const double n = psi.norm();
  if (n < kUnderflow) throw NumericalError("state norm underflow after jump");
  psi /= n;
  if (!jumps.empty() && !(time > jumps.back().time)) throw NumericalError("jump times are not strictly increasing");
  jumps.push_back({time, chosen});
}

}  // namespace

TrajectoryResult run_trajectory(const PulseSequence& seq, const LindbladModel& model, const Vector& psi0,
                                std::uint64_t seed_base, std::uint64_t stream) {
  const Register& reg = model.reg();
  if (psi0.size() != reg.dimension()) throw ConfigError("state dimension does not match the register");
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-9) throw ConfigError("initial state must be normalized");
  if (seq.topology.atom_count() != reg.size()) throw ConfigError("pulse sequence and register disagree on the atom count");

  TrajectoryRng rng(seed_base, stream);
  TrajectoryResult result;
  result.seed_base = seed_base;
  result.stream = stream;
  Vector psi = psi0;
  double r = rng.uniform_open_zero();
  double clock = 0.0;
  std::map<std::tuple<std::size_t, int, double, double>, std::unique_ptr<NoJumpSegment>> cache;

  for (const auto& step : seq.steps) {
    if (const auto* frame = std::get_if<FrameOp>(&step)) {
      apply_frame(*frame, reg, psi);
      continue;
    }
    const auto& pulse = std::get<Pulse>(step);
    if (pulse.duration() == 0.0) continue;
    auto& seg = cache[{pulse.atom, static_cast<int>(pulse.transition), pulse.area, pulse.rabi}];
    if (!seg) seg = std::make_unique<NoJumpSegment>(model, pulse);

    double t0 = 0.0;
    const double tau = seg->duration();
    while (true) {
      // psi is the unnormalised no-jump state; r is the norm^2 at which the next jump fires.
      Vector end = t0 == 0.0 ? seg->apply_full(psi) : seg->apply(psi, tau - t0);
      const double n_end = end.squaredNorm();
      if (n_end > r) {
        psi = std::move(end);
        break;
      }
      double lo = 0.0;
      double hi = tau - t0;
      Vector at;
      int iter = 0;
      while (true) {
        const double mid = 0.5 * (lo + hi);
        at = seg->apply(psi, mid);
        const double n_mid = at.squaredNorm();
        if (std::abs(n_mid - r) <= kNormTol || hi - lo < 1e-15 * tau) {
          t0 += mid;
          break;
        }
        if (n_mid > r) lo = mid;
        else hi = mid;
        if (++iter > 200) throw NumericalError("jump-time bisection did not converge");
      }
      psi = std::move(at);
      do_jump(model, psi, rng, clock + t0, result.jumps);
      r = rng.uniform_open_zero();
      if (t0 >= tau) break;
    }
    clock += tau;
    if (psi.squaredNorm() < kUnderflow) throw NumericalError("state norm underflow");
  }
  const double n = psi.norm();
  if (n < kUnderflow) throw NumericalError("state norm underflow");
  result.state = psi / n;
  return result;
}

EnsembleEstimate classical_fidelity_mc(const PulseSequence& seq, const LindbladModel& model,
                                       const std::vector<Vector4>& basis, const Matrix4& ideal, int n_traj,
                                       std::uint64_t seed_base, std::size_t stream_offset, int workers) {
  if (n_traj < 2) throw ConfigError("Monte Carlo estimates need n_traj >= 2");
  if (basis.empty()) throw ConfigError("classical fidelity needs probe states");
  const Register& reg = model.reg();
  const std::size_t d = basis.size();
  const std::size_t per = static_cast<std::size_t>(n_traj);
  std::vector<Vector> inputs;
  std::vector<Vector> targets;
  for (const auto& p : basis) {
    inputs.push_back(embed_code_state(reg, p.normalized()));
    targets.push_back(embed_code_state(reg, ideal * p.normalized()));
  }
  std::vector<double> samples(d * per);
  parallel_for(
      d * per,
      [&](std::size_t i) {
        const std::size_t probe = i / per;
        const std::uint64_t stream = (stream_offset + probe) * per + i % per;
        const auto traj = run_trajectory(seq, model, inputs[probe], seed_base, stream);
        samples[i] = std::norm(targets[probe].dot(traj.state));
      },
      workers > 0 ? workers : worker_count());

  // Equal allocation per probe: the estimator is the mean of per-probe means.
  EnsembleEstimate est;
  est.seed_base = seed_base;
  est.n_trajectories = d * per;
  double var_sum = 0.0;
  for (std::size_t p = 0; p < d; ++p) {
    double mean = 0.0;
    for (std::size_t k = 0; k < per; ++k) mean += samples[p * per + k];
    mean /= static_cast<double>(per);
    double ss = 0.0;
    for (std::size_t k = 0; k < per; ++k) ss += (samples[p * per + k] - mean) * (samples[p * per + k] - mean);
    var_sum += ss / static_cast<double>(per - 1) / static_cast<double>(per);
    est.mean += mean;
  }
  est.mean /= static_cast<double>(d);
  est.std_error = std::sqrt(var_sum) / static_cast<double>(d);
  return est;
}

FidelityReport mcwf_report(const PulseSequence& seq, const LindbladModel& model, const Matrix4& ideal, int n_traj,
                           std::uint64_t seed_base, int workers) {
  const auto psi = computational_basis();
  const auto phi = complementary_basis(psi);
  const auto a = classical_fidelity_mc(seq, model, psi, ideal, n_traj, seed_base, 0, workers);
  const auto b = classical_fidelity_mc(seq, model, phi, ideal, n_traj, seed_base, psi.size(), workers);
  FidelityReport r;
  r.f_psi = a.mean;
  r.f_phi = b.mean;
  r.stderr_psi = a.std_error;
  r.stderr_phi = b.std_error;
  std::tie(r.lower, r.upper) = hofmann_bounds(a.mean, b.mean);
  r.stderr_lower = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  r.stderr_upper = a.mean <= b.mean ? a.std_error : b.std_error;
  return r;
}

}  // namespace rydchain
