#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "setdual/lattice_check.hpp"
#include "setdual/problem.hpp"

namespace setdual {

// Process exit codes shared by every command.
enum ExitCode : int { kPass = 0, kCheckFailed = 1, kNonConvergence = 2, kInputError = 3 };

struct GlobalOptions {
  std::optional<double> tol;
  std::optional<std::vector<double>> eps_schedule;
  std::optional<std::uint64_t> seed;
};

void apply_globals(ProblemSpec& spec, const GlobalOptions& g);

// "problem" (the file's grid, auto when absent), "auto", or a path to a JSON array of m-vectors.
std::vector<Vec> choose_dual_grid(const ProblemSpec& spec, const std::string& choice);

// Every piece slope of the model appears in the grid.
bool grid_has_slopes(const SetValuedFn& f, const std::vector<Vec>& grid);

// Summary JSON on `out`; a failing identity adds its counterexample.
int cmd_lattice_check(const LatticeCheckConfig& config, std::ostream& out);

// Level-set table (CSV to `report` when set) and inverse-consistency summary.
int cmd_invert(const ProblemSpec& spec, const std::string& report, std::ostream& out);

// Direct, qc and fm membership on the (x, z) grid (1D) or seeded samples,
// α columns per dual-grid point, frontier error for 1D models.
int cmd_dualize(const ProblemSpec& spec, const std::string& dual_grid, const std::string& report,
                std::ostream& out);

// Conjugate thresholds per (x*, direction) pair and R vs R̃ memberships.
int cmd_conjugate(const ProblemSpec& spec, const std::string& pairs_path, const std::string& report,
                  std::ostream& out);

// Oracle names: direct, qc, fm.
int cmd_compare(const ProblemSpec& spec, const std::string& oracle, const std::string& against,
                const std::string& dual_grid, const std::string& report, std::ostream& out);

// Cell text for an extended value: "inf", "-inf" or the shortest round-trip decimal.
std::string format_ext(const ExtReal& v);

}  // namespace setdual
