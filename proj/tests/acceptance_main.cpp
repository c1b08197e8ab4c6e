// Acceptance suite: one PASS/FAIL line per criterion, then a mutation check on the dissipation fit.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "rydchain/acceptance.hpp"
#include "rydchain/parallel.hpp"

using namespace rydchain;

int main() {
  AcceptanceOptions opt;
  opt.workers = worker_count();
  opt.on_result = [](const CriterionResult& c) {
    std::cout << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << c.summary
              << "  [" << c.seconds << " s]" << std::endl;
  };
  const auto report = run_acceptance(opt);

  // The tampered qubit constant must break the dissipation fit.
  DissipationModel tampered;
  tampered.cz_qubit_teff = 7.0;
  const auto mutated = check_dissipation_law(run_all(dissipation_grid(), opt.workers), tampered);
  const bool mutation_caught = !mutated.passed;
  std::cout << (mutation_caught ? "PASS" : "FAIL") << "  mutation (qubit constant 6 -> 7 rejected): "
            << mutated.summary << std::endl;

  std::ofstream("acceptance_report.json") << report.to_json().dump(2) << "\n";
  return report.all_passed() && mutation_caught ? EXIT_SUCCESS : EXIT_FAILURE;
}
