#include <algorithm>
#include <random>

#include "doctest.h"
#include "setdual/discrete.hpp"
#include "setdual/lattice_check.hpp"

using namespace setdual;

namespace {

GridMonotoneSet up(std::vector<IPoint> g) {
  int d = g.empty() ? 2 : static_cast<int>(g[0].size());
  return GridMonotoneSet(d, Orientation::Up, std::move(g));
}

// Minimal elements of a predicate over a box, by enumeration.
std::vector<IPoint> minimal_in_box(const GridBox& box, auto&& member) {
  std::vector<IPoint> pts;
  for (std::size_t k = 0; k < box.size(); ++k)
    if (member(box.point(k))) pts.push_back(box.point(k));
  std::vector<IPoint> out;
  for (const IPoint& p : pts) {
    bool minimal = true;
    for (const IPoint& q : pts) {
      if (q == p) continue;
      bool le = true;
      for (std::size_t i = 0; i < p.size(); ++i) le = le && q[i] <= p[i];
      minimal = minimal && !le;
    }
    if (minimal) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

GridMonotoneSet random_up(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> count(0, 4), coord(-3, 3);
  std::vector<IPoint> g(static_cast<std::size_t>(count(rng)), IPoint(static_cast<std::size_t>(dim)));
  for (IPoint& p : g)
    for (int& v : p) v = coord(rng);
  return GridMonotoneSet(dim, Orientation::Up, std::move(g));
}

GridSetFunction step_function() {
  // Codes: F = {z >= 2} (the real set [1, inf)) for x >= 0, {z >= 0} below.
  GridBox box{1, -4, 4};
  std::vector<GridMonotoneSet> t;
  for (int x = -4; x <= 4; ++x) t.push_back(up({{x >= 0 ? 2 : 0}}));
  GridSetFunction f(box, 1, Orientation::Up, t);
  f.verify_increasing();
  return f;
}

}  // namespace

TEST_SUITE("discrete") {
  TEST_CASE("membership and order") {
    CHECK(grid_contains(up({{1, 1}}), IPoint{2, 1}));
    CHECK_FALSE(grid_contains(up({{1, 1}}), IPoint{0, 5}));
    CHECK_FALSE(grid_contains(up({{0, 1}, {1, 0}}), IPoint{0, 0}));

    CHECK(grid_order_leq(up({{0, 0}}), up({{1, 1}})));
    CHECK_FALSE(grid_order_leq(up({{1, 1}}), up({{0, 0}})));
    CHECK(grid_order_leq(up({{0, 1}, {1, 0}}), up({{1, 1}})));
    GridMonotoneSet down(2, Orientation::Down, {{1, 1}});
    CHECK_THROWS_AS(grid_order_leq(up({{0, 0}}), down), std::invalid_argument);

    // Lower sets order by inclusion.
    CHECK(grid_order_leq(GridMonotoneSet(2, Orientation::Down, {{0, 0}}), down));
    CHECK(down.contains(IPoint{-5, 1}));
    CHECK(down.generators() == std::vector<IPoint>{{1, 1}});
  }

  TEST_CASE("lattice operations") {
    GridMonotoneSet a = up({{0, 1}}), b = up({{1, 0}});
    CHECK(grid_sup({a, b}) == up({{1, 1}}));
    CHECK(grid_inf({a, b}) == up({{0, 1}, {1, 0}}));
    CHECK(grid_sup({a, a}) == a);
    CHECK_THROWS_AS(grid_sup({}), std::invalid_argument);
    CHECK(grid_sup({a, GridMonotoneSet(2, Orientation::Up)}).empty());
  }

  TEST_CASE("bullet examples") {
    // (1,1) codes the open quadrant (0,1)^2 + R^2_+, already closed for K \ {0}.
    CHECK(grid_bullet(up({{1, 1}})) == up({{1, 1}}));
    // Under the interior strict cone the open quadrant closes up.
    CHECK(grid_bullet(up({{1, 1}}), Strictness::Interior) == up({{0, 0}}));
    // Closed quadrant minus the corner fills in.
    CHECK(grid_bullet(up({{0, 1}, {1, 0}})) == up({{0, 0}}));
    CHECK(grid_bullet(GridMonotoneSet(2, Orientation::Up)).empty());
  }

  TEST_CASE("intersection and bullet agree with box enumeration") {
    std::mt19937_64 rng(21);
    for (int dim = 1; dim <= 3; ++dim) {
      GridBox box{dim, -5, 5};
      for (int it = 0; it < 150; ++it) {
        GridMonotoneSet a = random_up(rng, dim), b = random_up(rng, dim);
        auto inter = minimal_in_box(box, [&](const IPoint& z) { return a.contains(z) && b.contains(z); });
        CHECK(grid_intersection({a, b}).generators() == inter);

        auto hat = minimal_in_box(box, [&](const IPoint& z) {
          for (std::size_t i = 0; i < z.size(); ++i) {
            IPoint s = z;
            s[i] = cell_up(s[i]);
            if (!a.contains(s)) return false;
          }
          return true;
        });
        CHECK(grid_bullet(a).generators() == hat);

        auto in = minimal_in_box(box, [&](const IPoint& z) {
          IPoint s = z;
          for (int& v : s) v = cell_up(v);
          return a.contains(s);
        });
        CHECK(grid_bullet(a, Strictness::Interior).generators() == in);
      }
    }
  }

  TEST_CASE("left and right versions of a step") {
    GridSetFunction f = step_function();
    GridSetFunction lo = grid_left_version(f), hi = grid_right_version(f);
    CHECK(lo.domain() == GridBox{1, -3, 3});
    CHECK(lo.at(IPoint{0}) == up({{0}}));
    CHECK(hi.at(IPoint{0}) == up({{2}}));
    CHECK(hi.at(IPoint{-1}) == up({{0}}));
    CHECK(lo.at(IPoint{1}) == up({{2}}));
    CHECK(grid_left_version(hi) == grid_left_version(lo));

    GridSetFunction constant(GridBox{2, 0, 3}, 1, Orientation::Up,
                             std::vector<GridMonotoneSet>(16, up({{3}})));
    CHECK(grid_left_version(constant).table() == std::vector<GridMonotoneSet>(4, up({{3}})));
    // F+ is a closed inf: code 3 is the open cell (1,2), so (1,inf) closes to [1,inf).
    CHECK(grid_right_version(constant).table() == std::vector<GridMonotoneSet>(4, up({{2}})));

    GridSetFunction tiny(GridBox{1, 0, 1}, 1, Orientation::Up, {up({{0}}), up({{0}})});
    CHECK_THROWS_AS(grid_left_version(tiny), std::invalid_argument);
  }

  TEST_CASE("inverse of the diagonal") {
    GridBox box{1, -4, 4};
    std::vector<GridMonotoneSet> t;
    for (int x = -4; x <= 4; ++x) t.push_back(up({{x}}));
    GridSetFunction f(box, 1, Orientation::Up, t);
    f.verify_increasing();
    GridSetFunction g = grid_inverse(f, box);
    CHECK(g.value_orientation() == Orientation::Down);
    for (int z = -4; z <= 4; ++z) CHECK(g.at(IPoint{z}) == GridMonotoneSet(1, Orientation::Down, {{z}}));
    CHECK(grid_inverse(g, box) == f);

    // The generic (unverified) path gives the same answer.
    GridSetFunction raw(box, 1, Orientation::Up, t);
    CHECK(grid_inverse(raw, box) == g);
  }

  TEST_CASE("random instances") {
    GridSetFunction a = grid_random_instance(0, 2, 2, 7, 0.1);
    GridSetFunction b = grid_random_instance(0, 2, 2, 7, 0.1);
    CHECK(a == b);
    CHECK_FALSE(a == grid_random_instance(1, 2, 2, 7, 0.1));
    GridSetFunction e = grid_random_instance(3, 2, 1, 5, 0.0);
    CHECK(std::all_of(e.table().begin(), e.table().end(), [](const auto& v) { return v.empty(); }));
    int increasing = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) increasing += is_increasing(grid_random_instance(s, 2, 1, 5, 0.2));
    CHECK(increasing == 1000);
  }

  TEST_CASE("identity suite on a small batch") {
    for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
      LatticeCheckConfig c;
      c.instances = 40;
      c.dim_x = m;
      c.dim_z = n;
      c.box = 7;
      LatticeReport r = lattice_check(c);
      CHECK(r.ok());
      for (const auto& t : r.tallies) CHECK(t.checked > 0);
    }
    LatticeCheckConfig bad;
    bad.box = 5;
    CHECK_THROWS_AS(lattice_check(bad), std::invalid_argument);
  }
}
