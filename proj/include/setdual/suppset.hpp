#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "setdual/cone.hpp"
#include "setdual/linprog.hpp"

namespace setdual {

using GridPtr = std::shared_ptr<const DirectionGrid>;

// A = ⋂_d {z : <d, z> >= phi(d)} over a fixed direction grid, or the empty set.
// phi(d) = −∞ drops the half-space, so phi ≡ −∞ is the whole space.
class SupportedUpperSet {
 public:
  // A +inf entry makes the set empty; NaN throws std::invalid_argument.
  SupportedUpperSet(GridPtr grid, std::vector<double> phi);

  static SupportedUpperSet empty_set(GridPtr grid);
  static SupportedUpperSet whole_space(GridPtr grid);
  // phi ≡ 0, which is K itself when the grid generates K°.
  static SupportedUpperSet cone(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  int dim() const { return grid_->dim(); }
  bool is_empty() const { return empty_; }
  // Meaningless for the empty set.
  const std::vector<double>& phi() const { return phi_; }

  // Empty sets compare equal regardless of phi.
  friend bool operator==(const SupportedUpperSet& a, const SupportedUpperSet& b);

 private:
  GridPtr grid_;
  std::vector<double> phi_;
  bool empty_ = false;
};

bool same_grid(const SupportedUpperSet& a, const SupportedUpperSet& b);

bool ss_contains(const SupportedUpperSet& a, std::span<const double> z, double tol = 0.0);

// A ⩽ B, read off the supports: B empty, or A nonempty with phi_A <= phi_B + tol.
// Throws std::invalid_argument on a grid mismatch.
bool ss_leq(const SupportedUpperSet& a, const SupportedUpperSet& b, double tol = 0.0);

// inf takes the pointwise min of phi (empty sets are skipped), the tightest
// grid-representable set containing cl co of the union. sup is the intersection.
SupportedUpperSet ss_inf(const std::vector<SupportedUpperSet>& family);
SupportedUpperSet ss_sup(const std::vector<SupportedUpperSet>& family);

SupportedUpperSet ss_minkowski(const SupportedUpperSet& a, const SupportedUpperSet& b);
// 0·A = K, also for A empty. Throws std::invalid_argument for lambda < 0.
SupportedUpperSet ss_scale(const SupportedUpperSet& a, double lambda);

// Rows -<d, z> <= -phi(d) for the finite entries.
Polyhedron ss_polyhedron(const SupportedUpperSet& a);

// Replaces phi(d) by inf over A of <d, z> and flags hidden emptiness.
// Values within 1e-9 relative of the input are kept, so canonical input is a fixed point.
SupportedUpperSet ss_tighten(const SupportedUpperSet& a);

// S(z*, s) = {z : s <= <z*, z>}.
struct HalfSpaceS {
  Vec zstar;
  double s = 0.0;
};

bool hs_contains(const HalfSpaceS& h, std::span<const double> z, double tol = 0.0);

// S(z*, s) on a grid containing z*/|z*|. z* = 0 gives the whole space (s <= 0)
// or the empty set. Throws std::invalid_argument when the direction is missing.
SupportedUpperSet hs_to_set(GridPtr grid, const HalfSpaceS& h);

struct BulletSampling {
  std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  int ray_samples = 16;
  Strictness mode = Strictness::Interior;
  std::uint64_t seed = 0;
};

// Sampled test of z ∈ A•: member(z + eps·k) for every sampled unit ray k of the
// strict cone and every eps. The extreme rays (HatK) or the interior point
// (Interior) are always among the rays. Throws std::domain_error for Interior
// mode when int(K) is empty.
bool bullet_sampled(const std::function<bool(std::span<const double>)>& member,
                    std::span<const double> z, const PolyCone& k, const BulletSampling& sampling = {});

}  // namespace setdual
