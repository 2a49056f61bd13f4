#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "setdual/duality.hpp"

namespace setdual {

struct SchemaError {
  std::string pointer;  // JSON pointer into the problem file, "" for the document
  std::string message;
};

// Schema violations, collected rather than stopping at the first one.
class ProblemError : public std::runtime_error {
 public:
  explicit ProblemError(std::vector<SchemaError> errors);
  ProblemError(std::string pointer, std::string message)
      : ProblemError(std::vector<SchemaError>{{std::move(pointer), std::move(message)}}) {}
  const std::vector<SchemaError>& errors() const { return errors_; }

 private:
  std::vector<SchemaError> errors_;
};

using Box = std::vector<std::pair<double, double>>;

struct ProblemSpec {
  std::string name;
  std::uint64_t seed = 0;
  std::shared_ptr<const SetValuedFn> model;
  Box domain_box;
  Box z_box;                              // default [-5, 5]^n
  std::optional<std::vector<Vec>> dual_grid;  // absent: auto
  int auto_count = 41;                    // sphere-sweep size for the auto grid
  int samples = 500;
  int grid = 101;                         // points per axis for 1D tabulations
  double tol = 1e-9;
  double agree_tol = 1e-6;
  ProbeSchedule schedule;
};

// Throws ProblemError listing every violation with its JSON pointer.
ProblemSpec parse_problem(const nlohmann::json& doc);
// I/O and JSON syntax errors are reported as ProblemError at pointer "".
ProblemSpec load_problem(const std::string& path);

// Problem grid when given, else the sphere sweep plus model slopes.
std::vector<Vec> problem_dual_grid(const ProblemSpec& spec);

// "1e-3,1e-6" style lists; throws std::invalid_argument.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace setdual
