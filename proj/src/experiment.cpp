#include "rydchain/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "rydchain/mcwf.hpp"
#include "rydchain/parallel.hpp"

namespace rydchain {

namespace {

const std::vector<std::string>& grid_keys() {
  static const std::vector<std::string> keys = {"gate",   "variant", "n_A",    "u_over_omega", "next_nearest",
                                                "gamma0", "gamma1",  "gammaA", "gamma",        "splitting",
                                                "solver", "n_traj",  "seed",   "force"};
  return keys;
}

bool is_ignored_key(const std::string& k) { return k == kOutputKey || k == "description" || k == "name"; }

template <class T>
T get_as(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config field '" + key + "' has the wrong type: " + v.dump());
  }
}

double get_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config field '" + key + "' must be a number, got " + v.dump());
  return v.get<double>();
}

int get_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config field '" + key + "' must be an integer, got " + v.dump());
  return v.get<int>();
}

void expand_object(const nlohmann::json& cfg, std::vector<RunPoint>& out) {
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object or an array of objects");
  for (const auto& [k, v] : cfg.items()) {
    if (is_ignored_key(k)) continue;
    if (std::find(grid_keys().begin(), grid_keys().end(), k) == grid_keys().end()) {
      throw ConfigError("unknown config field '" + k + "'");
    }
  }
  const bool explicit_rates = cfg.contains("gamma0") || cfg.contains("gamma1") || cfg.contains("gammaA");
  const bool split_rates = cfg.contains("gamma") || cfg.contains("splitting");
  if (explicit_rates && split_rates) throw ConfigError("use either gamma0/gamma1/gammaA or gamma + splitting, not both");
  if (cfg.contains("gamma") != cfg.contains("splitting")) throw ConfigError("gamma and splitting must be given together");

  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
  for (const auto& k : grid_keys()) {
    if (!cfg.contains(k)) continue;
    const auto& v = cfg.at(k);
    std::vector<nlohmann::json> values;
    if (v.is_array()) {
      if (v.empty()) throw ConfigError("config field '" + k + "' is an empty list");
      for (const auto& e : v) values.push_back(e);
    } else {
      values.push_back(v);
    }
    axes.emplace_back(k, std::move(values));
  }

  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    RunPoint p;
    std::optional<double> gamma;
    std::optional<std::string> splitting;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& key = axes[a].first;
      const auto& v = axes[a].second[idx[a]];
      if (key == "gate") p.gate = get_as<std::string>(v, key);
      else if (key == "variant") p.variant = get_as<std::string>(v, key);
      else if (key == "n_A") p.n_A = get_int(v, key);
      else if (key == "u_over_omega") p.u_over_omega = get_number(v, key);
      else if (key == "next_nearest") {
        if (!v.is_null()) p.next_nearest = get_number(v, key);
      } else if (key == "gamma0") p.gamma0 = get_number(v, key);
      else if (key == "gamma1") p.gamma1 = get_number(v, key);
      else if (key == "gammaA") p.gammaA = get_number(v, key);
      else if (key == "gamma") gamma = get_number(v, key);
      else if (key == "splitting") splitting = get_as<std::string>(v, key);
      else if (key == "solver") p.solver = parse_solver(get_as<std::string>(v, key));
      else if (key == "n_traj") {
        if (!v.is_null()) p.n_traj = get_int(v, key);
      } else if (key == "seed") {
        if (!v.is_null()) {
          if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError("config field 'seed' must be a non-negative integer");
          p.seed = v.get<std::uint64_t>();
        }
      } else if (key == "force") p.force = get_as<bool>(v, key);
    }
    if (gamma) {
      if (*splitting == "qubit") {
        p.gamma0 = p.gamma1 = *gamma / 2.0;
        p.gammaA = 0.0;
      } else if (*splitting == "ancilla") {
        p.gamma0 = p.gamma1 = 0.0;
        p.gammaA = *gamma;
      } else if (*splitting == "equal") {
        p.gamma0 = p.gamma1 = *gamma / 2.0;
        p.gammaA = *gamma;
      } else {
        throw ConfigError("unknown splitting '" + *splitting + "' (expected qubit, ancilla, or equal)");
      }
    }
    if (p.gate == "cnot_nn") p.gammaA = 0.0;
    p.validate();
    out.push_back(p);

    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return;
    }
    if (axes.empty()) return;
  }
}

}  // namespace

void RunPoint::validate() const {
  if (gate != "cz" && gate != "cnot" && gate != "cnot_nn") {
    throw ConfigError("unknown gate '" + gate + "' (expected cz, cnot, or cnot_nn)");
  }
  if (variant != "auto" && variant != "direct" && variant != "sigmax") {
    throw ConfigError("unknown variant '" + variant + "' (expected auto, direct, or sigmax)");
  }
  if (n_A < 0) throw ConfigError("n_A must be non-negative");
  if (gate == "cnot_nn" && n_A < 2) throw ConfigError("the nearest-neighbour baseline needs n_A >= 2");
  if (gate == "cnot_nn" && variant == "sigmax") throw ConfigError("the baseline has no sigma_x variant");
  if (!(u_over_omega > 0.0)) throw ConfigError("u_over_omega must be positive");
  if (next_nearest && *next_nearest < 0.0) throw ConfigError("next_nearest must be non-negative");
  DecayRates{gamma0, gamma1, gammaA}.validate();
  if (solver == Solver::Dense) {
    if (n_traj) throw ConfigError("the dense solver does not take n_traj");
    if (n_A > 5 && !force) throw ConfigError("dense solver refused above n_A = 5 (set force to override)");
  } else {
    if (!n_traj || *n_traj < 2) throw ConfigError("mcwf needs n_traj >= 2");
    if (!seed) throw ConfigError("mcwf needs a seed");
  }
}

std::string RunPoint::resolved_variant() const {
  if (gate == "cnot_nn") return "direct";
  if (variant != "auto") return variant;
  const auto spec = GateSpec::with_default_variant(parse_gate_kind(gate), n_A);
  return std::string(to_string(spec.variant));
}

void to_json(nlohmann::json& j, const RunPoint& p) {
  j = nlohmann::json{{"gate", p.gate},
                     {"variant", p.resolved_variant()},
                     {"n_A", p.n_A},
                     {"u_over_omega", p.u_over_omega},
                     {"next_nearest", p.next_nearest ? nlohmann::json(*p.next_nearest) : nlohmann::json(nullptr)},
                     {"gamma0", p.gamma0},
                     {"gamma1", p.gamma1},
                     {"gammaA", p.gate == "cnot_nn" ? nlohmann::json(nullptr) : nlohmann::json(p.gammaA)},
                     {"solver", std::string(to_string(p.solver))},
                     {"n_traj", p.n_traj ? nlohmann::json(*p.n_traj) : nlohmann::json(nullptr)},
                     {"seed", p.seed ? nlohmann::json(*p.seed) : nlohmann::json(nullptr)},
                     {"force", p.force}};
}

std::vector<RunPoint> expand_config(const nlohmann::json& config) {
  std::vector<RunPoint> out;
  if (config.is_array()) {
    for (const auto& c : config) expand_object(c, out);
  } else {
    expand_object(config, out);
  }
  return out;
}

PulseSequence sequence_for(const RunPoint& p) {
  if (p.gate == "cnot_nn") return compile_nn_sequence(p.n_A - 1);
  const GateKind kind = parse_gate_kind(p.gate);
  GateSpec spec = GateSpec::with_default_variant(kind, p.n_A);
  if (p.variant != "auto") spec.variant = parse_variant(p.variant);
  return compile_gate(spec);
}

Matrix4 ideal_for(const RunPoint& p) {
  if (p.gate == "cnot_nn") return cnot_matrix();
  return ideal_unitary(GateSpec{parse_gate_kind(p.gate), p.n_A, parse_variant(p.resolved_variant())});
}

RunResult run_point(const RunPoint& point, int workers) {
  point.validate();
  const auto start = std::chrono::steady_clock::now();
  const PulseSequence seq = sequence_for(point);
  const LindbladModel model(build_register(seq.topology, point.u_over_omega, point.next_nearest),
                            DecayRates{point.gamma0, point.gamma1, point.gammaA});
  const Matrix4 ideal = ideal_for(point);

  RunResult res;
  res.point = point;
  SweepRecord& r = res.record;
  r.gate = point.gate;
  r.variant = point.resolved_variant();
  r.n_A = point.n_A;
  r.u_over_omega = point.u_over_omega;
  r.gamma0 = point.gamma0;
  r.gamma1 = point.gamma1;
  if (point.gate != "cnot_nn") r.gammaA = point.gammaA;
  r.solver = point.solver;
  if (point.solver == Solver::Dense) {
    res.report = dense_report(simulate_channel(seq, model), ideal);
    r.f_pro = res.report.f_pro;
  } else {
    r.n_traj = point.n_traj;
    r.seed = point.seed;
    res.report = mcwf_report(seq, model, ideal, *point.n_traj, *point.seed, workers);
    r.f_lower = res.report.lower;
    r.f_upper = res.report.upper;
    r.stderr_lower = res.report.stderr_lower;
    r.stderr_upper = res.report.stderr_upper;
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<RunResult> run_all(const std::vector<RunPoint>& points, int workers) {
  const int w = workers > 0 ? workers : worker_count();
  std::vector<RunResult> out(points.size());
  if (points.size() >= static_cast<std::size_t>(w) || w == 1) {
    parallel_for(points.size(), [&](std::size_t i) { out[i] = run_point(points[i], 1); }, w);
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = run_point(points[i], w);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_row(const SweepRecord& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::ostringstream os;
  os << r.gate << ',' << r.variant << ',' << r.n_A << ',' << format_number(r.u_over_omega) << ','
     << format_number(r.gamma0) << ',' << format_number(r.gamma1) << ',' << opt(r.gammaA) << ','
     << to_string(r.solver) << ',' << (r.n_traj ? std::to_string(*r.n_traj) : "") << ','
     << (r.seed ? std::to_string(*r.seed) : "") << ',' << opt(r.f_pro) << ',' << opt(r.f_lower) << ','
     << opt(r.f_upper) << ',' << opt(r.stderr_lower) << ',' << opt(r.stderr_upper) << ','
     << format_number(r.wall_time_s);
  return os.str();
}

namespace {

double parse_double(const std::string& s, const char* field) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string("bad number in CSV field ") + field + ": '" + s + "'");
  }
  return v;
}

std::optional<double> parse_opt(const std::string& s, const char* field) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, field);
}

}  // namespace

SweepRecord parse_csv_row(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  f.push_back(cur);
  if (f.size() != 16) throw ConfigError("CSV row must have 16 fields: " + line);
  SweepRecord r;
  r.gate = f[0];
  r.variant = f[1];
  r.n_A = static_cast<int>(parse_double(f[2], "n_A"));
  r.u_over_omega = parse_double(f[3], "u_over_omega");
  r.gamma0 = parse_double(f[4], "gamma0");
  r.gamma1 = parse_double(f[5], "gamma1");
  r.gammaA = parse_opt(f[6], "gammaA");
  r.solver = parse_solver(f[7]);
  if (!f[8].empty()) r.n_traj = static_cast<int>(parse_double(f[8], "n_traj"));
  if (!f[9].empty()) r.seed = std::stoull(f[9]);
  r.f_pro = parse_opt(f[10], "f_pro");
  r.f_lower = parse_opt(f[11], "f_lower");
  r.f_upper = parse_opt(f[12], "f_upper");
  r.stderr_lower = parse_opt(f[13], "stderr_lower");
  r.stderr_upper = parse_opt(f[14], "stderr_upper");
  r.wall_time_s = parse_double(f[15], "wall_time_s");
  r.validate();
  return r;
}

std::vector<SweepRecord> read_csv(std::istream& in) {
  std::vector<SweepRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw ConfigError("unexpected CSV header: " + line);
      header = false;
      continue;
    }
    out.push_back(parse_csv_row(line));
  }
  return out;
}

std::vector<SweepRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return read_csv(in);
}

std::string sidecar_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".jsonl").string();
}

void append_results(const std::string& csv_path, const std::vector<RunResult>& results) {
  static std::mutex write_lock;
  std::lock_guard lock(write_lock);
  namespace fs = std::filesystem;
  const bool fresh = !fs::exists(csv_path) || fs::file_size(csv_path) == 0;
  std::ofstream csv(csv_path, std::ios::app);
  std::ofstream side(sidecar_path(csv_path), std::ios::app);
  if (!csv || !side) throw ConfigError("cannot open output " + csv_path);
  if (fresh) csv << kCsvHeader << '\n';
  for (const auto& r : results) {
    csv << csv_row(r.record) << '\n';
    nlohmann::json line = {{"config", r.point}, {"report", r.report}, {"wall_time_s", r.record.wall_time_s}};
    side << line.dump() << '\n';
  }
}

std::vector<std::string> preset_names() {
  return {"fig-cz-dissipation", "fig-cnot-dissipation", "fig-blockade-scan", "fig-nn-compare", "fig-gain"};
}

nlohmann::json preset(const std::string& name) {
  using nlohmann::json;
  const json gammas = {4e-5, 32e-5, 128e-5, 512e-5};
  const json splits = {"qubit", "ancilla", "equal"};
  auto dissipation = [&](const char* gate) {
    return json::array({
        {{"gate", gate}, {"n_A", {0, 1, 2, 3, 4, 5}}, {"u_over_omega", 200}, {"gamma", gammas},
         {"splitting", splits}, {"solver", "dense"}},
        {{"gate", gate}, {"n_A", {6, 7, 8, 9}}, {"u_over_omega", 200}, {"gamma", gammas},
         {"splitting", splits}, {"solver", "mcwf"}, {"n_traj", 500}, {"seed", 20170101}},
    });
  };
  if (name == "fig-cz-dissipation") return dissipation("cz");
  if (name == "fig-cnot-dissipation") return dissipation("cnot");
  if (name == "fig-blockade-scan") {
    return json{{"gate", {"cz", "cnot"}},
                {"n_A", {0, 1, 2, 3, 4, 5}},
                {"u_over_omega", {1, 2, 5, 10, 25, 50, 100, 200}},
                {"solver", "dense"}};
  }
  const json nn_gammas = {0.0, 1e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2};
  if (name == "fig-nn-compare") {
    return json{{"gate", {"cnot", "cnot_nn"}}, {"n_A", {2, 3}}, {"u_over_omega", 200},
                {"gamma", nn_gammas},         {"splitting", "equal"}, {"solver", "dense"}};
  }
  if (name == "fig-gain") {
    return json{{"gate", {"cnot", "cnot_nn"}}, {"n_A", {2, 3, 4, 5}}, {"u_over_omega", 200},
                {"gamma", nn_gammas},         {"splitting", "equal"}, {"solver", "dense"}};
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<NnComparison> compare_nn(const std::vector<int>& n_values, const std::vector<double>& gammas,
                                     double u_over_omega, double t_eff, std::vector<RunResult>* runs, int workers) {
  std::vector<RunPoint> points;
  for (int n : n_values) {
    for (double g : gammas) {
      for (const char* gate : {"cnot", "cnot_nn"}) {
        RunPoint p;
        p.gate = gate;
        p.n_A = n;
        p.u_over_omega = u_over_omega;
        p.gamma0 = p.gamma1 = g / 2.0;
        p.gammaA = p.gate == "cnot_nn" ? 0.0 : g;
        p.validate();
        points.push_back(p);
      }
    }
  }
  auto results = run_all(points, workers);
  std::vector<NnComparison> out;
  for (std::size_t i = 0; i < results.size(); i += 2) {
    NnComparison c;
    c.n_A = results[i].point.n_A;
    c.gamma = results[i].point.gammaA;
    c.f_ours = *results[i].record.f_pro;
    c.f_nn = *results[i + 1].record.f_pro;
    c.ratio = c.f_ours / c.f_nn;
    c.predicted = gain_ratio(c.n_A, c.gamma, t_eff);
    out.push_back(c);
  }
  if (runs) *runs = std::move(results);
  return out;
}

}  // namespace rydchain
