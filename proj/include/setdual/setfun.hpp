#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "setdual/suppset.hpp"

namespace setdual {

struct UnsupportedOperation : std::logic_error {
  using std::logic_error::logic_error;
};

// Quasiconvex piecewise-linear g: R -> R through (xs[i], ys[i]), extended by
// the two outer slopes. Throws std::invalid_argument unless xs is strictly
// increasing and no rising piece is followed by a falling one.
class PiecewiseLinear1D {
 public:
  PiecewiseLinear1D(std::vector<double> xs, std::vector<double> ys, double left_slope,
                    double right_slope);

  double operator()(double x) const;
  // {x : g(x) <= c} as [lo, hi] with infinite ends allowed; nullopt when empty.
  std::optional<std::pair<double, double>> sublevel(double c) const;
  // {x : g(x) < c}, an open interval (lo, hi) with lo < hi; nullopt when empty.
  std::optional<std::pair<double, double>> strict_sublevel(double c) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  double left_slope() const { return left_; }
  double right_slope() const { return right_; }
  // Every piece slope, outer ones included.
  std::vector<double> slopes() const;

 private:
  std::vector<double> xs_, ys_;
  double left_, right_;
};

using ScalarModel = std::variant<MaxAffine, PiecewiseLinear1D>;

// F(x) = {z : <d, z> >= g_d(x) for every grid direction d}.
class SetValuedFn {
 public:
  // Throws std::invalid_argument on dimension mismatches or a general-mode
  // model with m != 1.
  SetValuedFn(PolyCone k, GridPtr grid, int m, std::vector<ScalarModel> g);

  int m() const { return m_; }
  int n() const { return grid_->dim(); }
  const PolyCone& cone() const { return k_; }
  const GridPtr& grid() const { return grid_; }
  const std::vector<ScalarModel>& g() const { return g_; }
  // Every g_d max-affine.
  bool convex_mode() const { return convex_; }
  double g_at(std::size_t d, std::span<const double> x) const;

 private:
  PolyCone k_;
  GridPtr grid_;
  int m_;
  std::vector<ScalarModel> g_;
  bool convex_ = true;
};

SupportedUpperSet fn_eval(const SetValuedFn& f, std::span<const double> x);

// {x : z ∈ F(x)}. Convex mode: rows <a_j, x> <= <d, z> − b_j for every piece of
// every g_d. 1D general mode: the interval from piece inspection (an explicit
// empty row when empty). Other models throw UnsupportedOperation.
Polyhedron fn_level_set(const SetValuedFn& f, std::span<const double> z);

bool polyhedron_contains(const Polyhedron& p, std::span<const double> x, double tol = 0.0);

enum class Property { Increasing, Quasiconvex, Convex, Quasiconcave, Concave };

const char* property_name(Property p);
// Throws std::invalid_argument on an unknown name.
Property parse_property(const std::string& name);

struct Sampler {
  std::vector<std::pair<double, double>> box;  // one range per x coordinate
  int pairs = 500;
  std::uint64_t seed = 0;
  std::vector<double> lambdas = {0.25, 0.5, 0.75};
  double tol = 1e-9;
};

struct CheckWitness {
  Vec x, y;
  double lambda = 0.0;
  std::string detail;
};

struct CheckReport {
  Property property = Property::Convex;
  long checked = 0;
  long violations = 0;
  // Quasiconvex only: midpoint convexity of sampled level sets.
  long level_checked = 0;
  long level_violations = 0;
  std::optional<CheckWitness> witness;
  bool ok() const { return violations == 0 && level_violations == 0; }
};

// Sampled defining inequality of the property under the ⩽ order, on (x, y)
// pairs from the box (y >= x componentwise for Increasing). A failing raw
// comparison is retried on tightened supports before it counts.
CheckReport fn_check(const SetValuedFn& f, Property property, const Sampler& sampler);

// Finite cloud of evaluated points; checks use only pairs whose combination
// point also appears in the cloud (within 1e-12).
struct ScenarioFn {
  int m = 1;
  std::vector<std::pair<Vec, SupportedUpperSet>> samples;
};

CheckReport fn_check(const ScenarioFn& f, Property property, const Sampler& sampler);

struct InverseReport {
  long graph_checked = 0, graph_violations = 0;
  long monotone_checked = 0, monotone_violations = 0;
  long cone_checked = 0, cone_violations = 0;
  std::optional<std::string> witness;
  bool ok() const { return graph_violations == 0 && monotone_violations == 0 && cone_violations == 0; }
};

// Graph flip z ∈ F(x) ⇔ x ∈ F⁻¹(z) (both tests exact), monotonicity of
// F⁻¹ in z under K, and stability of each level set under −R^m_+.
// z is drawn from z_box (one range per coordinate; [-5, 5] when empty).
InverseReport fn_inverse_consistency(const SetValuedFn& f, const Sampler& sampler,
                                     std::vector<std::pair<double, double>> z_box = {});

}  // namespace setdual
