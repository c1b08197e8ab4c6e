#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rydchain/analysis.hpp"
#include "rydchain/fidelity.hpp"

namespace rydchain {

/// One fully resolved grid point.
struct RunPoint {
  std::string gate = "cz";       ///< cz, cnot, or cnot_nn (baseline with n_A - 1 intermediate qubits)
  std::string variant = "auto";  ///< auto, direct, or sigmax
  int n_A = 0;
  double u_over_omega = 200.0;
  std::optional<double> next_nearest;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gammaA = 0.0;
  Solver solver = Solver::Dense;
  std::optional<int> n_traj;
  std::optional<std::uint64_t> seed;
  bool force = false;

  void validate() const;
  /// Variant actually compiled ("direct" for the baseline).
  std::string resolved_variant() const;
};

void to_json(nlohmann::json& j, const RunPoint& p);

/// Expands a config document (an object, or an array of objects) into its Cartesian grid.
/// Any scalar field may be given as a list. `gamma` + `splitting` (qubit | ancilla | equal)
/// is an alternative to explicit gamma0 / gamma1 / gammaA.
std::vector<RunPoint> expand_config(const nlohmann::json& config);

/// Keys that are not part of the grid (e.g. output paths) are ignored by expand_config.
inline constexpr const char* kOutputKey = "output";

struct RunResult {
  RunPoint point;
  SweepRecord record;
  FidelityReport report;
};

RunResult run_point(const RunPoint& point, int workers = 0);

/// Runs every point; grid points execute concurrently, results come back in grid order.
std::vector<RunResult> run_all(const std::vector<RunPoint>& points, int workers = 0);

PulseSequence sequence_for(const RunPoint& point);
Matrix4 ideal_for(const RunPoint& point);

inline constexpr const char* kCsvHeader =
    "gate,variant,n_A,u_over_omega,gamma0,gamma1,gammaA,solver,n_traj,seed,f_pro,f_lower,f_upper,"
    "stderr_lower,stderr_upper,wall_time_s";

std::string format_number(double v);
std::string csv_row(const SweepRecord& r);
SweepRecord parse_csv_row(const std::string& line);
std::vector<SweepRecord> read_csv(const std::string& path);
std::vector<SweepRecord> read_csv(std::istream& in);

/// Appends rows to `csv_path` (writing the header for a new file) and one JSON line per
/// result to the sidecar `csv_path` with its extension replaced by ".jsonl".
void append_results(const std::string& csv_path, const std::vector<RunResult>& results);
std::string sidecar_path(const std::string& csv_path);

std::vector<std::string> preset_names();
nlohmann::json preset(const std::string& name);

struct NnComparison {
  int n_A = 0;
  double gamma = 0.0;
  double f_ours = 0.0;
  double f_nn = 0.0;
  double ratio = 0.0;
  double predicted = 0.0;
};

/// Distant CNOT vs nearest-neighbour chain at equal rates (gamma_q = gamma_A = gamma, gamma0 = gamma1).
std::vector<NnComparison> compare_nn(const std::vector<int>& n_values, const std::vector<double>& gammas,
                                     double u_over_omega, double t_eff, std::vector<RunResult>* runs = nullptr,
                                     int workers = 0);

}  // namespace rydchain
