// Command-line front end: simulate, sweep, fit, compare-nn, protocol dump, verify.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rydchain/acceptance.hpp"
#include "rydchain/experiment.hpp"
#include "rydchain/parallel.hpp"

using nlohmann::json;
using namespace rydchain;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;

struct Overrides {
  std::optional<std::string> gate;
  std::optional<std::string> variant;
  std::optional<int> n_A;
  std::optional<double> u;
  std::optional<double> next_nearest;
  std::optional<double> gamma0;
  std::optional<double> gamma1;
  std::optional<double> gammaA;
  std::optional<double> gamma;
  std::optional<std::string> splitting;
  std::optional<std::string> solver;
  std::optional<int> n_traj;
  std::optional<std::uint64_t> seed;
  bool force = false;

  void attach(CLI::App* app) {
    app->add_option("--gate", gate, "cz, cnot, or cnot_nn");
    app->add_option("--variant", variant, "auto, direct, or sigmax");
    app->add_option("--n-a", n_A, "number of ancilla atoms");
    app->add_option("--u", u, "blockade shift U/Omega");
    app->add_option("--next-nearest", next_nearest, "next-nearest-neighbour shift");
    app->add_option("--gamma0", gamma0, "qubit decay r -> 0");
    app->add_option("--gamma1", gamma1, "qubit decay r -> 1");
    app->add_option("--gamma-a", gammaA, "ancilla decay e -> g");
    app->add_option("--gamma", gamma, "total rate, used with --splitting");
    app->add_option("--splitting", splitting, "qubit, ancilla, or equal");
    app->add_option("--solver", solver, "dense or mcwf");
    app->add_option("--n-traj", n_traj, "trajectories per probe state");
    app->add_option("--seed", seed, "MC seed");
    app->add_flag("--force", force, "allow dense runs above n_A = 5");
  }

  void apply(json& obj) const {
    auto set = [&](const char* key, const auto& v) {
      if (v) obj[key] = *v;
    };
    set("gate", gate);
    set("variant", variant);
    set("n_A", n_A);
    set("u_over_omega", u);
    set("next_nearest", next_nearest);
    set("gamma0", gamma0);
    set("gamma1", gamma1);
    set("gammaA", gammaA);
    set("gamma", gamma);
    set("splitting", splitting);
    set("solver", solver);
    set("n_traj", n_traj);
    set("seed", seed);
    if (force) obj["force"] = true;
    if (gamma) {
      obj.erase("gamma0");
      obj.erase("gamma1");
      obj.erase("gammaA");
    }
    if (gamma0 || gamma1 || gammaA) {
      obj.erase("gamma");
      obj.erase("splitting");
    }
    if (solver && *solver == "dense") {
      obj.erase("n_traj");
      obj.erase("seed");
    }
  }
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json build_config(const std::string& config_path, const std::string& preset_name, const Overrides& ov) {
  json cfg = json::object();
  if (!config_path.empty() && !preset_name.empty()) throw ConfigError("use either --config or --preset");
  if (!config_path.empty()) cfg = load_json(config_path);
  if (!preset_name.empty()) cfg = preset(preset_name);
  if (cfg.is_array()) {
    for (auto& c : cfg) ov.apply(c);
  } else {
    ov.apply(cfg);
  }
  return cfg;
}

std::string output_from(const json& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (cfg.is_object() && cfg.contains(kOutputKey)) return cfg[kOutputKey].get<std::string>();
  return {};
}

json result_json(const RunResult& r) {
  json j;
  j["config"] = r.point;
  j["report"] = r.report;
  j["wall_time_s"] = r.record.wall_time_s;
  return j;
}

json step_json(std::size_t index, const Step& step) {
  if (const auto* p = std::get_if<Pulse>(&step)) {
    return {{"step", index},
            {"atom", p->atom},
            {"transition", std::string(to_string(p->transition))},
            {"area_over_pi", p->area / kPi},
            {"duration_omega_t", p->duration()}};
  }
  const auto& f = std::get<FrameOp>(step);
  return {{"step", index}, {"atom", f.atom}, {"transition", "SIGMA_X"}, {"area_over_pi", 0.0}, {"duration_omega_t", 0.0}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distant two-qubit gates on Rydberg chains"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one configuration (or a small grid) and print reports");
  Overrides sim_ov;
  std::string sim_config;
  std::string sim_output;
  sim->add_option("--config", sim_config, "JSON config file");
  sim->add_option("--output", sim_output, "append records to this CSV");
  sim_ov.attach(sim);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "expand a config grid and append records to a CSV");
  Overrides sweep_ov;
  std::string sweep_config;
  std::string sweep_preset;
  std::string sweep_output;
  bool list_presets = false;
  sweep->add_option("--config", sweep_config, "JSON config file");
  sweep->add_option("--preset", sweep_preset, "named figure preset");
  sweep->add_option("--output", sweep_output, "CSV path (overrides the config's output)");
  sweep->add_flag("--list-presets", list_presets, "print preset names and exit");
  sweep_ov.attach(sweep);

  // fit
  auto* fit = app.add_subcommand("fit", "fit alpha or t_eff from a records CSV");
  std::string fit_what;
  std::string fit_input;
  std::string fit_gate;
  std::optional<int> fit_n;
  fit->add_option("parameter", fit_what, "alpha or teff")->required()->check(CLI::IsMember({"alpha", "teff"}));
  fit->add_option("--input", fit_input, "records CSV")->required();
  fit->add_option("--gate", fit_gate, "cz or cnot");
  fit->add_option("--n-a", fit_n, "restrict alpha fits to one n_A");

  // compare-nn
  auto* cmp = app.add_subcommand("compare-nn", "distant CNOT against the nearest-neighbour chain");
  std::vector<int> cmp_n{2, 3};
  std::vector<double> cmp_gamma{1e-4, 5e-4, 1e-3, 5e-3};
  double cmp_u = 200.0;
  double cmp_teff = 0.379;
  std::string cmp_output;
  cmp->add_option("--n-a", cmp_n, "ancilla counts");
  cmp->add_option("--gamma", cmp_gamma, "decay rates (gamma_q = gamma_A)");
  cmp->add_option("--u", cmp_u, "blockade shift U/Omega");
  cmp->add_option("--teff", cmp_teff, "Omega t_eff / pi used for the predicted ratio");
  cmp->add_option("--output", cmp_output, "append the underlying records to this CSV");

  // protocol dump
  auto* proto = app.add_subcommand("protocol", "inspect compiled pulse sequences");
  proto->require_subcommand(1);
  auto* dump = proto->add_subcommand("dump", "print a sequence as JSON records");
  std::string dump_gate = "cz";
  std::string dump_variant = "auto";
  int dump_n = 0;
  dump->add_option("--gate", dump_gate, "cz, cnot, or cnot_nn");
  dump->add_option("--variant", dump_variant, "auto, direct, or sigmax");
  dump->add_option("--n-a", dump_n, "ancilla count (cnot_nn: chain with n_A - 1 intermediate qubits)");

  // verify
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  std::string verify_report = "verify_report.json";
  std::vector<int> verify_only;
  int verify_traj = 2000;
  verify->add_option("--report", verify_report, "JSON report path");
  verify->add_option("--only", verify_only, "criterion ids to run");
  verify->add_option("--trajectories", verify_traj, "MC trajectories per probe for criterion 7");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const int workers = worker_count();

    if (*sim || *sweep) {
      if (*sweep && list_presets) {
        for (const auto& n : preset_names()) std::cout << n << "\n";
        return 0;
      }
      const bool is_sim = static_cast<bool>(*sim);
      const json cfg = is_sim ? build_config(sim_config, "", sim_ov) : build_config(sweep_config, sweep_preset, sweep_ov);
      const std::string out = output_from(cfg, is_sim ? sim_output : sweep_output);
      if (!is_sim && out.empty()) throw ConfigError("sweep needs --output or an 'output' key");
      const auto points = expand_config(cfg);
      for (const auto& p : points) p.validate();
      const auto results = run_all(points, workers);
      if (!out.empty()) append_results(out, results);
      if (is_sim) {
        json arr = json::array();
        for (const auto& r : results) arr.push_back(result_json(r));
        std::cout << (arr.size() == 1 ? arr[0] : arr).dump(2) << "\n";
      } else {
        std::cout << results.size() << " records appended to " << out << "\n";
      }
      return 0;
    }

    if (*fit) {
      const auto records = read_csv(fit_input);
      json out = json::array();
      if (fit_what == "alpha") {
        std::map<std::pair<std::string, int>, std::vector<SweepRecord>> groups;
        for (const auto& r : records) {
          if (r.solver != Solver::Dense || r.gamma0 != 0.0 || r.gamma1 != 0.0 || r.gamma_a() != 0.0) continue;
          if (!fit_gate.empty() && r.gate != fit_gate) continue;
          if (fit_n && r.n_A != *fit_n) continue;
          groups[{r.gate, r.n_A}].push_back(r);
        }
        if (groups.empty()) throw ConfigError("no gamma = 0 dense records to fit");
        for (const auto& [key, recs] : groups) {
          const auto f = fit_alpha(recs);
          out.push_back({{"gate", key.first},
                         {"n_A", key.second},
                         {"alpha", f.value},
                         {"half_width", f.half_width},
                         {"loglog_slope", f.loglog_slope ? json(*f.loglog_slope) : json()},
                         {"residual_rms", f.residual_rms},
                         {"records", f.records_used}});
        }
      } else {
        std::vector<GateKind> kinds;
        if (fit_gate.empty()) kinds = {GateKind::ModifiedCZ, GateKind::CNOT};
        else kinds = {parse_gate_kind(fit_gate)};
        for (auto k : kinds) {
          const auto f = fit_teff(records, k, DissipationModel{});
          out.push_back({{"gate", std::string(to_string(k))},
                         {"omega_t_eff_over_pi", f.value},
                         {"half_width", f.half_width},
                         {"residual_rms", f.residual_rms},
                         {"max_residual", f.max_residual},
                         {"records", f.records_used}});
        }
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*cmp) {
      std::vector<RunResult> runs;
      const auto rows = compare_nn(cmp_n, cmp_gamma, cmp_u, cmp_teff * kPi, &runs, workers);
      if (!cmp_output.empty()) append_results(cmp_output, runs);
      json out = json::array();
      for (const auto& r : rows) {
        out.push_back({{"n_A", r.n_A},
                       {"gamma", r.gamma},
                       {"f_ours", r.f_ours},
                       {"f_nn", r.f_nn},
                       {"ratio", r.ratio},
                       {"predicted", r.predicted}});
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*dump) {
      RunPoint p;
      p.gate = dump_gate;
      p.variant = dump_variant;
      p.n_A = dump_n;
      p.validate();
      const auto seq = sequence_for(p);
      json out = json::array();
      for (std::size_t i = 0; i < seq.steps.size(); ++i) out.push_back(step_json(i, seq.steps[i]));
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*verify) {
      AcceptanceOptions opt;
      opt.workers = workers;
      opt.only = verify_only;
      opt.mc_trajectories = verify_traj;
      opt.on_result = [](const CriterionResult& c) {
        std::cout << (c.passed ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << c.summary << " ("
                  << c.seconds << " s)" << std::endl;
      };
      const auto report = run_acceptance(opt);
      std::ofstream f(verify_report);
      if (!f) throw ConfigError("cannot write " + verify_report);
      f << report.to_json().dump(2) << "\n";
      return report.all_passed() ? 0 : kExitVerify;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
