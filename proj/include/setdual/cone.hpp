#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "setdual/vec.hpp"

namespace setdual {

// Which strict cone defines z < w: K \ (-K) or int(K).
enum class Strictness { HatK, Interior };

// Polyhedral cone K = {z : <g_i, z> >= 0} with its extreme generators.
class PolyCone {
 public:
  enum class Kind { Axis, General };

  static PolyCone axis(int dim);
  // Generators are derived from the normals; throws if dim outside [1, 3].
  static PolyCone from_normals(int dim, std::vector<Vec> normals);

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  const std::vector<Vec>& normals() const { return normals_; }
  // Conic generators; a lineality direction l appears as both l and -l.
  const std::vector<Vec>& generators() const { return generators_; }
  bool pointed() const { return pointed_; }
  bool has_interior() const { return has_interior_; }
  bool is_whole_space() const { return normals_.empty(); }
  // Unit vector in int(K); throws std::logic_error when int(K) is empty.
  Vec interior_point() const;

 private:
  PolyCone() = default;
  void derive();

  int dim_ = 0;
  Kind kind_ = Kind::General;
  std::vector<Vec> normals_;
  std::vector<Vec> generators_;
  bool pointed_ = false;
  bool has_interior_ = false;
  Vec interior_;
};

bool cone_contains(const PolyCone& k, std::span<const double> z, double tol = 0.0);

// Throws std::domain_error for Interior mode on a cone with empty interior.
bool cone_contains_strict(const PolyCone& k, std::span<const double> z, Strictness mode,
                          double tol = 0.0);

struct ProperPreorderResult {
  bool ok = true;
  // Failing pair when !ok.
  Vec k1, k2;
};

// Filtering property of the strict order: for every k1, k2 > 0 some k3 > 0 has
// k1 - k3 > 0 and k2 - k3 > 0. Extreme generator pairs are always tried, then
// `samples` seeded random pairs.
ProperPreorderResult properly_preordered_check(const PolyCone& k, Strictness mode, int samples,
                                               std::uint64_t seed = 0);

class DirectionGrid {
 public:
  // Normalizes nothing: directions must already be unit vectors in the polar
  // cone K° = {d : <d, k> >= 0 for k in K}. Throws std::invalid_argument otherwise,
  // or when two directions are within `resolution` radians of each other.
  DirectionGrid(const PolyCone& k, std::vector<Vec> directions, double resolution = 1e-9,
                double tol = 1e-12);

  int dim() const { return dim_; }
  std::size_t size() const { return dirs_.size(); }
  const Vec& operator[](std::size_t i) const { return dirs_[i]; }
  const std::vector<Vec>& directions() const { return dirs_; }
  bool includes_extreme_rays() const { return extreme_; }
  double resolution() const { return resolution_; }

  bool operator==(const DirectionGrid& o) const { return dirs_ == o.dirs_; }

 private:
  friend DirectionGrid polar_grid(const PolyCone&, int);
  int dim_ = 0;
  std::vector<Vec> dirs_;
  bool extreme_ = false;
  double resolution_ = 1e-9;
};

// Unit directions of K° including its extreme rays; for n = 2 an angular sweep
// of `count` directions between them. Throws std::domain_error when K° = {0}.
DirectionGrid polar_grid(const PolyCone& k, int count);

}  // namespace setdual
