#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "setdual/discrete.hpp"

namespace setdual {

struct LatticeCheckConfig {
  std::uint64_t seed = 0;
  int instances = 500;
  int dim_x = 1;
  int dim_z = 1;
  int box = 9;  // side of the generated box; at least 7
  double density = -1.0;  // negative: about six generators per instance
};

struct IdentityTally {
  std::string name;
  long checked = 0;
  long violations = 0;
};

struct LatticeCounterexample {
  std::string identity;
  int instance = 0;
  std::uint64_t instance_seed = 0;
  std::string detail;
};

struct LatticeReport {
  LatticeCheckConfig config;
  std::vector<IdentityTally> tallies;
  std::optional<LatticeCounterexample> first_failure;
  bool ok() const { return !first_failure.has_value(); }
};

// Seed of instance i; shared by the checker and anyone replaying a counterexample.
std::uint64_t instance_seed(std::uint64_t seed, int i);

// Exact identities on seeded random instances: bullet closure laws, closed-set
// lattice laws, left/right version identities, and the inversion theorem with
// its two relations and the order-reversal law. Throws std::invalid_argument
// for a box side below 7 or dimensions outside [1, 3].
LatticeReport lattice_check(const LatticeCheckConfig& config);

std::string format_point(const IPoint& p);
std::string format_set(const GridMonotoneSet& a);

}  // namespace setdual
