#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "setdual/setfun.hpp"

namespace setdual {

// z-probe schedule for one-sided limits in z: values at z ± eps_i·k0.
struct ProbeSchedule {
  // Two entries get a geometric midpoint; three are used as given (decreasing).
  std::vector<double> eps = {1e-3, 1e-6};
  Vec k0;  // empty: (1, ..., 1)/sqrt(n)
  int max_shrinks = 2;
};

// Probes disagree with a one-sided linear limit even after shrinking.
class ProbeNonConvergence : public std::runtime_error {
 public:
  ProbeNonConvergence(const std::string& what, Vec z, Vec xstar, std::vector<ExtReal> values)
      : std::runtime_error(what), z(std::move(z)), xstar(std::move(xstar)), values(std::move(values)) {}
  Vec z, xstar;
  std::vector<ExtReal> values;  // last round of probe values
};

// σ of F⁻¹(z) at x*: −∞ iff the level set is empty.
ExtReal penalty_sigma(const SetValuedFn& f, std::span<const double> z, std::span<const double> xstar);

struct AlphaValue {
  ExtReal value;
  // σ at z itself differs from the one-sided limit.
  bool near_boundary = false;
};

// α(x*, z) = lim σ(z + eps·k0) as eps ↓ 0. The three probe values must lie on
// one line (within 1e-9 relative) or share one infinite value; the limit is
// the line's intercept. Otherwise the schedule shrinks by 1e-3, and after
// max_shrinks rounds ProbeNonConvergence is thrown.
AlphaValue penalty_alpha(const SetValuedFn& f, std::span<const double> z, std::span<const double> xstar,
                         const ProbeSchedule& schedule = {});

// Left limit lim σ(z − eps·k0), which is σ of H(z) = {x : F(x) ⩽ z̃ for some z̃ < z}.
AlphaValue penalty_alpha_left(const SetValuedFn& f, std::span<const double> z, std::span<const double> xstar,
                              const ProbeSchedule& schedule = {});

// σ of H(z) computed directly: a Slater LP decides H(z) ≠ ∅, and then
// σ(cl H(z)) = σ(F⁻¹(z)). 1D general models use strict sublevel intervals.
ExtReal penalty_alpha_left_direct(const SetValuedFn& f, std::span<const double> z,
                                  std::span<const double> xstar);

// α in exact arithmetic for convex-mode models, k0 = (1, ..., 1), probes at
// 1/10^3, 1/10^5 and 1/10^6 with exact collinearity. Model coefficients are
// taken as exact binary values. Throws UnsupportedOperation in general mode.
ExtRational penalty_alpha_exact(const SetValuedFn& f, std::span<const Rational> z,
                                std::span<const Rational> xstar);

// Memo of α values keyed by (x*, z); safe for concurrent use.
class PenaltyTable {
 public:
  PenaltyTable(std::shared_ptr<const SetValuedFn> f, ProbeSchedule schedule = {});

  const SetValuedFn& model() const { return *f_; }
  const ProbeSchedule& schedule() const { return schedule_; }
  AlphaValue alpha(std::span<const double> xstar, std::span<const double> z) const;
  std::size_t cached() const;

 private:
  std::shared_ptr<const SetValuedFn> f_;
  ProbeSchedule schedule_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<Vec, Vec>, AlphaValue> memo_;
};

// z ∈ R(x*, s) ⇔ s ≤ α(x*, z) + tol, with +∞ accepting and −∞ rejecting every s.
bool risk_contains(const PenaltyTable& table, std::span<const double> xstar, double s,
                   std::span<const double> z, double tol = 0.0);

// z in ⋂_{x* in grid} R(x*, <x*, x>): the grid's outer approximation of F(x).
bool qc_reconstruct_contains(const PenaltyTable& table, const std::vector<Vec>& dual_grid,
                             std::span<const double> x, std::span<const double> z, double tol = 0.0);

// Threshold c of −G(x*, d) = S(d, c), c = −χ*(x*, −d) = −sup_x {<x*, x> − g_d(x)}.
// −∞ means −G(x*, d) is the whole space. Throws UnsupportedOperation in general mode.
ExtReal fm_conjugate(const SetValuedFn& f, std::span<const double> xstar, std::size_t d);

// Conjugate thresholds for every (x*, d) pair of a dual grid.
class FmTable {
 public:
  FmTable(const SetValuedFn& f, std::vector<Vec> dual_grid);

  const std::vector<Vec>& dual_grid() const { return grid_; }
  // Thresholds for x* = dual_grid()[i], one per direction of F's grid.
  const std::vector<ExtReal>& thresholds(std::size_t i) const { return c_[i]; }
  // z ∈ R̃(x*_i, s) = ⋂_d {z : <d, z> >= s + c(x*_i, d)}; whole-space pairs drop out.
  bool risk_contains(std::size_t i, double s, std::span<const double> z, double tol = 0.0) const;
  // z in ⋂_i R̃(x*_i, <x*_i, x>).
  bool reconstruct_contains(std::span<const double> x, std::span<const double> z, double tol = 0.0) const;

 private:
  const SetValuedFn* f_;
  std::vector<Vec> grid_;
  std::vector<std::vector<ExtReal>> c_;
};

bool fm_reconstruct_contains(const SetValuedFn& f, const std::vector<Vec>& dual_grid,
                             std::span<const double> x, std::span<const double> z, double tol = 0.0);

// count directions on the unit sphere of R^m (m = 1: linspace over [−1, 1])
// followed by every piece slope of the model not already present.
std::vector<Vec> auto_dual_grid(const SetValuedFn& f, int count);

// Boundary of a predicate that is false at lo and true at hi, to within tol.
double frontier_bisect(const std::function<bool(double)>& member, double lo, double hi, double tol = 1e-12);

using RiskMembership = std::function<bool(std::span<const double> xstar, double s, std::span<const double> z)>;

struct RiskSample {
  Vec xstar;
  double s = 0.0;
  Vec z;
};

struct CompareReport {
  long checked = 0;
  long violations = 0;
  std::optional<RiskSample> witness;
  bool ok() const { return violations == 0; }
};

// R_a ⩽ R_b on the samples: every z accepted by R_b is accepted by R_a.
CompareReport maximality_compare(const RiskMembership& ra, const RiskMembership& rb,
                                 const std::vector<RiskSample>& samples);

struct ConditionTally {
  long checked = 0;
  long violations = 0;
  std::string first_failure;
  bool ok() const { return violations == 0; }
};

struct ConditionsConfig {
  int samples = 100;
  std::uint64_t seed = 0;
  std::vector<Vec> dual_grid;                    // x* pool; random unit vectors are added
  std::vector<std::pair<double, double>> z_box;  // empty: [-5, 5]^n
  std::vector<double> radii = {1e-3, 1e-5};
  double agree_tol = 1e-6;
};

struct ConditionsReport {
  ConditionTally homogeneity;       // R(λx*, s) = R(x*, s/λ), plus exact α homogeneity in convex mode
  ConditionTally quasiconcavity;    // {(x*, s) : s > α(x*, z)} convex
  ConditionTally openness;          // strict witnesses survive x* perturbations
  ConditionTally range;             // {z : α(x*, z) > −∞} independent of x*
  ConditionTally two_route;         // left limit by probing vs. the direct H(z) route
  bool ok() const {
    return homogeneity.ok() && quasiconcavity.ok() && openness.ok() && range.ok() && two_route.ok();
  }
};

ConditionsReport maximal_conditions_check(const PenaltyTable& table, const ConditionsConfig& config);

}  // namespace setdual
