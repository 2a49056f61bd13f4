#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "setdual/cone.hpp"

namespace setdual {

// Integer coordinates are cell codes on the real line: an even code 2k is the
// point k, an odd code 2k+1 the open interval (k, k+1). Monotone sets built from
// cells are exactly the cell-constant monotone subsets of R^n, which keeps the
// strict order and the bullet operator meaningful on a finite grid.
using IPoint = std::vector<int>;

// Cell reached by a small step up (down) from cell c.
constexpr int cell_up(int c) { return (c & 1) ? c : c + 1; }
constexpr int cell_down(int c) { return (c & 1) ? c : c - 1; }

enum class Orientation { Up, Down };

// Upper set (Up) or lower set (Down) of Z^n under the axis cone, held as an
// antichain of generators. Lower sets are stored negated, so both orientations
// share one upward representation.
class GridMonotoneSet {
 public:
  GridMonotoneSet(int dim, Orientation o) : dim_(dim), orient_(o) {}
  // Generators in actual coordinates; dominated ones are pruned.
  GridMonotoneSet(int dim, Orientation o, std::vector<IPoint> generators);

  int dim() const { return dim_; }
  Orientation orientation() const { return orient_; }
  bool empty() const { return stored_.empty(); }
  // Minimal (Up) or maximal (Down) elements in actual coordinates, sorted.
  std::vector<IPoint> generators() const;
  bool contains(std::span<const int> z) const;

  // Negated-for-Down canonical antichain, sorted lexicographically.
  const std::vector<IPoint>& stored() const { return stored_; }
  static GridMonotoneSet from_stored(int dim, Orientation o, std::vector<IPoint> stored);

  friend bool operator==(const GridMonotoneSet&, const GridMonotoneSet&) = default;

 private:
  int dim_ = 0;
  Orientation orient_ = Orientation::Up;
  std::vector<IPoint> stored_;
};

bool grid_contains(const GridMonotoneSet& a, std::span<const int> z);

// A ⩽ B: A ⊇ B for upper sets, A ⊆ B for lower sets. Throws on orientation mismatch.
bool grid_order_leq(const GridMonotoneSet& a, const GridMonotoneSet& b);

GridMonotoneSet grid_union(const std::vector<GridMonotoneSet>& family);
GridMonotoneSet grid_intersection(const std::vector<GridMonotoneSet>& family);

// Lattice operations of the order above. Upper sets: inf = ∪, sup = ∩;
// lower sets: inf = ∩, sup = ∪. Throw std::invalid_argument on an empty family.
GridMonotoneSet grid_inf(const std::vector<GridMonotoneSet>& family);
GridMonotoneSet grid_sup(const std::vector<GridMonotoneSet>& family);

// A• = {z : z + strict cone ⊆ A} (for lower sets, z − strict cone).
GridMonotoneSet grid_bullet(const GridMonotoneSet& a, Strictness mode = Strictness::HatK);

// Lattice operations among •-closed sets: the union-side operation is followed by •.
GridMonotoneSet grid_closed_inf(const std::vector<GridMonotoneSet>& family,
                                Strictness mode = Strictness::HatK);
GridMonotoneSet grid_closed_sup(const std::vector<GridMonotoneSet>& family,
                                Strictness mode = Strictness::HatK);

struct GridBox {
  int dim = 1;
  int lo = 0;
  int hi = 0;

  int side() const { return hi - lo + 1; }
  std::size_t size() const;
  bool contains(std::span<const int> x) const;
  std::size_t index(std::span<const int> x) const;
  IPoint point(std::size_t index) const;
  GridBox shrunk() const { return {dim, lo + 1, hi - 1}; }
  friend bool operator==(const GridBox&, const GridBox&) = default;
};

// Function from a box of Z^m (cone Z^m_+) to monotone sets of Z^n.
class GridSetFunction {
 public:
  GridSetFunction(GridBox domain, int value_dim, Orientation values,
                  std::vector<GridMonotoneSet> table);

  const GridBox& domain() const { return domain_; }
  int value_dim() const { return value_dim_; }
  Orientation value_orientation() const { return orient_; }
  const GridMonotoneSet& at(std::span<const int> x) const;
  const std::vector<GridMonotoneSet>& table() const { return table_; }
  bool increasing_verified() const { return increasing_; }
  // Runs is_increasing and records the result.
  bool verify_increasing();

  friend bool operator==(const GridSetFunction& a, const GridSetFunction& b) {
    return a.domain_ == b.domain_ && a.orient_ == b.orient_ && a.table_ == b.table_;
  }

 private:
  GridBox domain_;
  int value_dim_;
  Orientation orient_;
  std::vector<GridMonotoneSet> table_;
  bool increasing_ = false;
};

// x <= y componentwise implies F(x) ⩽ F(y); adjacent pairs suffice.
bool is_increasing(const GridSetFunction& f);

// Same values on a sub-box.
GridSetFunction grid_restrict(const GridSetFunction& f, const GridBox& box);

// F⁻(x) = sup over y < x and F⁺(x) = closed inf over y > x, through the cells
// adjacent to x. The result lives on the box shrunk by one; throws
// std::invalid_argument when the side is below 3.
GridSetFunction grid_left_version(const GridSetFunction& f, Strictness mode = Strictness::HatK);
GridSetFunction grid_right_version(const GridSetFunction& f, Strictness mode = Strictness::HatK);

// G(z) = {x in F's box : z ∈ F(x)} for z in `target`, with swapped orientation.
GridSetFunction grid_inverse(const GridSetFunction& f, const GridBox& target);

// Increasing Up-valued function on [0, side-1]^dim_x whose values are unions of
// random generators from [0, side-1]^dim_z placed with probability `density` at
// every y >= x. Deterministic in the seed.
GridSetFunction grid_random_instance(std::uint64_t seed, int dim_x, int dim_z, int side,
                                     double density);

}  // namespace setdual
