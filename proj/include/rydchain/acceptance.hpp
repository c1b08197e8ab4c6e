#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rydchain/experiment.hpp"

namespace rydchain {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  nlohmann::json details;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  DissipationModel model;
  int workers = 0;
  int mc_trajectories = 2000;
  std::uint64_t mc_seed = 1234;
  /// Criterion ids to run; empty runs all ten.
  std::vector<int> only;
  std::function<void(const CriterionResult&)> on_result;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

AcceptanceReport run_acceptance(const AcceptanceOptions& options = {});

/// Dense dissipation grid used by the fit: both gates, n_A 0..4, gamma {4,32,128,512}e-5, three splittings.
std::vector<RunPoint> dissipation_grid();

/// Criterion 3 on precomputed dissipation runs; exposed for the mutation check.
CriterionResult check_dissipation_law(const std::vector<RunResult>& runs, const DissipationModel& model);

/// Classical simulation of a CNOT list on the bit string `bits` (bit i = qubit i).
unsigned apply_classical_cnots(const std::vector<std::pair<std::size_t, std::size_t>>& gates, unsigned bits);

}  // namespace rydchain
