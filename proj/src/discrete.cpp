#include "setdual/discrete.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace setdual {
namespace {

bool dominates(const IPoint& a, const IPoint& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

// Minimal elements, sorted and deduplicated.
std::vector<IPoint> minimal(std::vector<IPoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<IPoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    // Lexicographic order puts every dominated-by candidate first.
    for (std::size_t j = 0; j < i && !dominated; ++j) dominated = dominates(pts[i], pts[j]);
    if (!dominated) out.push_back(pts[i]);
  }
  return out;
}

IPoint negated(const IPoint& p) {
  IPoint q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = -p[i];
  return q;
}

void require_compatible(const GridMonotoneSet& a, const GridMonotoneSet& b) {
  if (a.orientation() != b.orientation()) throw std::invalid_argument("orientation mismatch");
  require_dim(static_cast<std::size_t>(a.dim()), static_cast<std::size_t>(b.dim()));
}

void require_family(const std::vector<GridMonotoneSet>& family) {
  if (family.empty()) throw std::invalid_argument("empty family");
  for (const auto& a : family) require_compatible(family.front(), a);
}

GridMonotoneSet intersect2(const GridMonotoneSet& a, const GridMonotoneSet& b) {
  std::vector<IPoint> joins;
  joins.reserve(a.stored().size() * b.stored().size());
  for (const IPoint& g : a.stored())
    for (const IPoint& h : b.stored()) {
      IPoint m(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) m[i] = std::max(g[i], h[i]);
      joins.push_back(std::move(m));
    }
  return GridMonotoneSet::from_stored(a.dim(), a.orientation(), minimal(std::move(joins)));
}

}  // namespace

GridMonotoneSet::GridMonotoneSet(int dim, Orientation o, std::vector<IPoint> generators)
    : dim_(dim), orient_(o) {
  for (IPoint& g : generators) {
    require_dim(static_cast<std::size_t>(dim), g.size());
    if (o == Orientation::Down) g = negated(g);
  }
  stored_ = minimal(std::move(generators));
}

GridMonotoneSet GridMonotoneSet::from_stored(int dim, Orientation o, std::vector<IPoint> stored) {
  GridMonotoneSet s(dim, o);
  s.stored_ = std::move(stored);
  return s;
}

std::vector<IPoint> GridMonotoneSet::generators() const {
  if (orient_ == Orientation::Up) return stored_;
  std::vector<IPoint> out;
  for (const IPoint& g : stored_) out.push_back(negated(g));
  std::sort(out.begin(), out.end());
  return out;
}

bool GridMonotoneSet::contains(std::span<const int> z) const {
  require_dim(static_cast<std::size_t>(dim_), z.size());
  const int sign = orient_ == Orientation::Up ? 1 : -1;
  for (const IPoint& g : stored_) {
    bool ok = true;
    for (std::size_t i = 0; i < g.size() && ok; ++i) ok = sign * z[i] >= g[i];
    if (ok) return true;
  }
  return false;
}

bool grid_contains(const GridMonotoneSet& a, std::span<const int> z) { return a.contains(z); }

bool grid_order_leq(const GridMonotoneSet& a, const GridMonotoneSet& b) {
  require_compatible(a, b);
  // Stored sets are upward; Up compares A ⊇ B, Down compares A ⊆ B.
  const GridMonotoneSet& big = a.orientation() == Orientation::Up ? a : b;
  const GridMonotoneSet& small = a.orientation() == Orientation::Up ? b : a;
  auto up = GridMonotoneSet::from_stored(big.dim(), Orientation::Up, big.stored());
  return std::all_of(small.stored().begin(), small.stored().end(),
                     [&](const IPoint& g) { return up.contains(g); });
}

GridMonotoneSet grid_union(const std::vector<GridMonotoneSet>& family) {
  require_family(family);
  std::vector<IPoint> all;
  for (const auto& a : family) all.insert(all.end(), a.stored().begin(), a.stored().end());
  return GridMonotoneSet::from_stored(family.front().dim(), family.front().orientation(),
                                      minimal(std::move(all)));
}

GridMonotoneSet grid_intersection(const std::vector<GridMonotoneSet>& family) {
  require_family(family);
  GridMonotoneSet acc = family.front();
  for (std::size_t i = 1; i < family.size() && !acc.empty(); ++i) acc = intersect2(acc, family[i]);
  return acc;
}

GridMonotoneSet grid_inf(const std::vector<GridMonotoneSet>& family) {
  require_family(family);
  return family.front().orientation() == Orientation::Up ? grid_union(family)
                                                         : grid_intersection(family);
}

GridMonotoneSet grid_sup(const std::vector<GridMonotoneSet>& family) {
  require_family(family);
  return family.front().orientation() == Orientation::Up ? grid_intersection(family)
                                                         : grid_union(family);
}

GridMonotoneSet grid_bullet(const GridMonotoneSet& a, Strictness mode) {
  const int n = a.dim();
  auto lowered = [&](auto&& lower_coord) {
    std::vector<IPoint> gens;
    for (IPoint g : a.stored()) {
      for (int i = 0; i < n; ++i)
        if (lower_coord(i) && (g[static_cast<std::size_t>(i)] & 1)) --g[static_cast<std::size_t>(i)];
      gens.push_back(std::move(g));
    }
    return GridMonotoneSet::from_stored(n, a.orientation(), minimal(std::move(gens)));
  };
  if (mode == Strictness::Interior) return lowered([](int) { return true; });
  // z ∈ A• iff the step up along every axis lands in A.
  std::vector<GridMonotoneSet> shifted;
  for (int i = 0; i < n; ++i) shifted.push_back(lowered([i](int j) { return j == i; }));
  return grid_intersection(shifted);
}

GridMonotoneSet grid_closed_inf(const std::vector<GridMonotoneSet>& family, Strictness mode) {
  require_family(family);
  if (family.front().orientation() == Orientation::Up) return grid_bullet(grid_union(family), mode);
  return grid_intersection(family);
}

GridMonotoneSet grid_closed_sup(const std::vector<GridMonotoneSet>& family, Strictness mode) {
  require_family(family);
  if (family.front().orientation() == Orientation::Up) return grid_intersection(family);
  return grid_bullet(grid_union(family), mode);
}

std::size_t GridBox::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(std::max(side(), 0));
  return s;
}

bool GridBox::contains(std::span<const int> x) const {
  if (x.size() != static_cast<std::size_t>(dim)) return false;
  return std::all_of(x.begin(), x.end(), [&](int v) { return v >= lo && v <= hi; });
}

std::size_t GridBox::index(std::span<const int> x) const {
  if (!contains(x)) throw std::out_of_range("point outside the grid box");
  std::size_t idx = 0;
  for (int v : x) idx = idx * static_cast<std::size_t>(side()) + static_cast<std::size_t>(v - lo);
  return idx;
}

IPoint GridBox::point(std::size_t index) const {
  IPoint x(static_cast<std::size_t>(dim));
  for (int i = dim - 1; i >= 0; --i) {
    x[static_cast<std::size_t>(i)] = lo + static_cast<int>(index % static_cast<std::size_t>(side()));
    index /= static_cast<std::size_t>(side());
  }
  return x;
}

GridSetFunction::GridSetFunction(GridBox domain, int value_dim, Orientation values,
                                 std::vector<GridMonotoneSet> table)
    : domain_(domain), value_dim_(value_dim), orient_(values), table_(std::move(table)) {
  if (table_.size() != domain_.size()) throw std::invalid_argument("value table does not match the box");
  for (const auto& v : table_) {
    require_dim(static_cast<std::size_t>(value_dim), static_cast<std::size_t>(v.dim()));
    if (v.orientation() != values) throw std::invalid_argument("orientation mismatch");
  }
}

const GridMonotoneSet& GridSetFunction::at(std::span<const int> x) const {
  return table_[domain_.index(x)];
}

bool GridSetFunction::verify_increasing() {
  increasing_ = is_increasing(*this);
  return increasing_;
}

bool is_increasing(const GridSetFunction& f) {
  const GridBox& b = f.domain();
  for (std::size_t k = 0; k < b.size(); ++k) {
    IPoint x = b.point(k);
    for (int i = 0; i < b.dim; ++i) {
      IPoint y = x;
      ++y[static_cast<std::size_t>(i)];
      if (!b.contains(y)) continue;
      if (!grid_order_leq(f.at(x), f.at(y))) return false;
    }
  }
  return true;
}

GridSetFunction grid_restrict(const GridSetFunction& f, const GridBox& box) {
  std::vector<GridMonotoneSet> table;
  table.reserve(box.size());
  for (std::size_t k = 0; k < box.size(); ++k) table.push_back(f.at(box.point(k)));
  GridSetFunction g(box, f.value_dim(), f.value_orientation(), std::move(table));
  if (f.increasing_verified()) g.verify_increasing();
  return g;
}

namespace {

std::vector<IPoint> neighbours(const IPoint& x, Strictness mode, int (*step)(int)) {
  std::vector<IPoint> out;
  if (mode == Strictness::Interior) {
    IPoint y = x;
    for (int& v : y) v = step(v);
    out.push_back(std::move(y));
    return out;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    IPoint y = x;
    y[i] = step(y[i]);
    out.push_back(std::move(y));
  }
  return out;
}

template <class Combine>
GridSetFunction one_sided(const GridSetFunction& f, Strictness mode, int (*step)(int),
                          Combine combine) {
  if (f.domain().side() < 3) throw std::invalid_argument("box side below 3");
  GridBox box = f.domain().shrunk();
  std::vector<GridMonotoneSet> table;
  table.reserve(box.size());
  for (std::size_t k = 0; k < box.size(); ++k) {
    std::vector<GridMonotoneSet> family;
    for (const IPoint& y : neighbours(box.point(k), mode, step)) family.push_back(f.at(y));
    table.push_back(combine(family));
  }
  GridSetFunction g(box, f.value_dim(), f.value_orientation(), std::move(table));
  if (f.increasing_verified()) g.verify_increasing();
  return g;
}

}  // namespace

GridSetFunction grid_left_version(const GridSetFunction& f, Strictness mode) {
  return one_sided(f, mode, [](int c) { return cell_down(c); },
                   [mode](const std::vector<GridMonotoneSet>& fam) { return grid_closed_sup(fam, mode); });
}

GridSetFunction grid_right_version(const GridSetFunction& f, Strictness mode) {
  return one_sided(f, mode, [](int c) { return cell_up(c); },
                   [mode](const std::vector<GridMonotoneSet>& fam) { return grid_closed_inf(fam, mode); });
}

GridSetFunction grid_inverse(const GridSetFunction& f, const GridBox& target) {
  require_dim(static_cast<std::size_t>(f.value_dim()), static_cast<std::size_t>(target.dim));
  const GridBox& dom = f.domain();
  const Orientation out = f.value_orientation() == Orientation::Up ? Orientation::Down : Orientation::Up;
  std::vector<GridMonotoneSet> table;
  table.reserve(target.size());
  std::vector<char> member(dom.size());
  for (std::size_t zk = 0; zk < target.size(); ++zk) {
    IPoint z = target.point(zk);
    std::vector<IPoint> pts;
    for (std::size_t xk = 0; xk < dom.size(); ++xk) {
      member[xk] = f.at(dom.point(xk)).contains(z);
      if (member[xk]) pts.push_back(dom.point(xk));
    }
    if (f.increasing_verified()) {
      // Members form a monotone subset of the box: extremal points are those
      // with no member one step further out.
      const int away = out == Orientation::Down ? 1 : -1;
      std::vector<IPoint> ext;
      for (const IPoint& x : pts) {
        bool extremal = true;
        for (std::size_t i = 0; i < x.size() && extremal; ++i) {
          IPoint y = x;
          y[i] += away;
          extremal = !(dom.contains(y) && member[dom.index(y)]);
        }
        if (extremal) ext.push_back(out == Orientation::Down ? negated(x) : x);
      }
      std::sort(ext.begin(), ext.end());
      table.push_back(GridMonotoneSet::from_stored(dom.dim, out, std::move(ext)));
    } else {
      table.push_back(GridMonotoneSet(dom.dim, out, std::move(pts)));
    }
  }
  GridSetFunction g(target, dom.dim, out, std::move(table));
  if (f.increasing_verified()) g.verify_increasing();
  return g;
}

GridSetFunction grid_random_instance(std::uint64_t seed, int dim_x, int dim_z, int side,
                                     double density) {
  if (side < 1 || dim_x < 1 || dim_z < 1) throw std::invalid_argument("invalid random instance box");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution place(std::clamp(density, 0.0, 1.0));
  std::uniform_int_distribution<int> coord(0, side - 1);
  GridBox box{dim_x, 0, side - 1};

  std::vector<std::vector<IPoint>> own(box.size());
  for (std::size_t k = 0; k < box.size(); ++k) {
    if (!place(rng)) continue;
    IPoint g(static_cast<std::size_t>(dim_z));
    for (int& v : g) v = coord(rng);
    own[k].push_back(std::move(g));
  }
  // F(x) = ∪_{y >= x} R(y), filled from the top corner down.
  std::vector<std::vector<IPoint>> acc(box.size());
  for (std::size_t k = box.size(); k-- > 0;) {
    IPoint x = box.point(k);
    std::vector<IPoint> gens = own[k];
    for (std::size_t i = 0; i < x.size(); ++i) {
      IPoint y = x;
      ++y[i];
      if (!box.contains(y)) continue;
      const auto& up = acc[box.index(y)];
      gens.insert(gens.end(), up.begin(), up.end());
    }
    acc[k] = minimal(std::move(gens));
  }
  std::vector<GridMonotoneSet> table;
  table.reserve(box.size());
  for (auto& gens : acc) table.push_back(GridMonotoneSet::from_stored(dim_z, Orientation::Up, gens));
  GridSetFunction f(box, dim_z, Orientation::Up, std::move(table));
  f.verify_increasing();
  return f;
}

}  // namespace setdual
