#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "setdual/suppset.hpp"

using namespace setdual;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridPtr axis_grid() {
  PolyCone k = PolyCone::axis(2);
  return std::make_shared<const DirectionGrid>(k, std::vector<Vec>{{1, 0}, {0, 1}});
}

GridPtr sweep_grid(int count) { return std::make_shared<const DirectionGrid>(polar_grid(PolyCone::axis(2), count)); }

// co{points} + R^2_+ on the grid: phi(d) = min over the points, exact since d is in K°.
SupportedUpperSet hull_plus_cone(const GridPtr& g, const std::vector<Vec>& pts) {
  std::vector<double> phi(g->size(), kInf);
  for (std::size_t i = 0; i < g->size(); ++i)
    for (const Vec& p : pts) phi[i] = std::min(phi[i], dot((*g)[i], p));
  return SupportedUpperSet(g, phi);
}

SupportedUpperSet random_canonical(std::mt19937_64& rng, const GridPtr& g) {
  std::uniform_real_distribution<double> c(-3, 3);
  std::vector<Vec> pts(1 + rng() % 3);
  for (Vec& p : pts) p = {c(rng), c(rng)};
  return hull_plus_cone(g, pts);
}

// Independent lower support of a 2D polyhedron: min over vertices, −∞ along a descending ray.
double oracle_support(const VertexEnumeration& ve, const Vec& d) {
  for (const Vec& r : ve.rays)
    if (dot(d, r) < -1e-9) return -kInf;
  double m = kInf;
  for (const Vec& v : ve.points) m = std::min(m, dot(d, v));
  return m;
}

Vec random_member(std::mt19937_64& rng, const SupportedUpperSet& a) {
  VertexEnumeration ve = vertex_enum_2d(ss_polyhedron(a));
  std::uniform_real_distribution<double> u(0, 1);
  Vec z(2, 0.0);
  double total = 0;
  std::vector<double> w(ve.points.size());
  for (double& x : w) total += (x = u(rng) + 1e-3);
  for (std::size_t i = 0; i < w.size(); ++i) z = axpy(z, w[i] / total, ve.points[i]);
  for (const Vec& r : ve.rays) z = axpy(z, 3 * u(rng), r);
  return z;
}

}  // namespace

TEST_SUITE("suppset") {
  TEST_CASE("membership") {
    GridPtr g = axis_grid();
    SupportedUpperSet a(g, {1, 2});
    CHECK(ss_contains(a, Vec{1, 2}));
    CHECK_FALSE(ss_contains(a, Vec{0.9, 3}));
    CHECK(hs_contains(HalfSpaceS{{0, 1}, 0}, Vec{-100, 0}));
    CHECK(ss_contains(hs_to_set(g, HalfSpaceS{{0, 1}, 0}), Vec{-100, 0}));
    CHECK_FALSE(ss_contains(SupportedUpperSet::empty_set(g), Vec{1e9, 1e9}));
    CHECK(ss_contains(SupportedUpperSet::whole_space(g), Vec{-1e9, -1e9}));
    CHECK(SupportedUpperSet(g, {kInf, 0}).is_empty());
    CHECK_THROWS_AS(SupportedUpperSet(g, {std::nan(""), 0}), std::invalid_argument);
    CHECK_THROWS_AS(ss_contains(a, Vec{1, 2, 3}), DimensionMismatch);
  }

  TEST_CASE("half-spaces") {
    GridPtr g = axis_grid();
    CHECK(hs_to_set(g, HalfSpaceS{{0, 2}, 4}).phi() == std::vector<double>{-kInf, 2});
    CHECK(hs_to_set(g, HalfSpaceS{{0, 0}, 0}) == SupportedUpperSet::whole_space(g));
    CHECK(hs_to_set(g, HalfSpaceS{{0, 0}, 1}).is_empty());
    CHECK_THROWS_AS(hs_to_set(g, HalfSpaceS{{1, 1}, 0}), std::invalid_argument);
    // S(z*, s) + S(z*, t) = S(z*, s + t).
    CHECK(ss_minkowski(hs_to_set(g, {{1, 0}, 1.5}), hs_to_set(g, {{1, 0}, -4})) == hs_to_set(g, {{1, 0}, -2.5}));
  }

  TEST_CASE("order") {
    GridPtr g = axis_grid();
    SupportedUpperSet k = SupportedUpperSet::cone(g), b(g, {1, 2});
    CHECK(ss_leq(k, b));
    CHECK_FALSE(ss_leq(b, k));
    CHECK(ss_leq(b, b));
    CHECK(ss_leq(b, SupportedUpperSet::empty_set(g)));
    CHECK(ss_leq(SupportedUpperSet::whole_space(g), b));
    CHECK_FALSE(ss_leq(SupportedUpperSet::empty_set(g), b));
    CHECK_THROWS_AS(ss_leq(b, SupportedUpperSet::cone(sweep_grid(3))), std::invalid_argument);
  }

  TEST_CASE("inf and sup") {
    GridPtr g = axis_grid();
    SupportedUpperSet a(g, {1, 2}), b(g, {2, 0}), e = SupportedUpperSet::empty_set(g);
    CHECK(ss_sup({a, b}).phi() == std::vector<double>{2, 2});
    CHECK(ss_inf({a, b}).phi() == std::vector<double>{1, 0});
    CHECK(ss_inf({a, e}) == a);
    CHECK(ss_sup({a, e}).is_empty());
    CHECK(ss_inf({a, a}) == a);
    CHECK(ss_inf({e, e}).is_empty());
    CHECK_THROWS_AS(ss_sup({}), std::invalid_argument);
  }

  TEST_CASE("Minkowski sum and scaling") {
    GridPtr g = axis_grid();
    SupportedUpperSet a(g, {1, 2}), e = SupportedUpperSet::empty_set(g);
    CHECK(ss_minkowski(a, SupportedUpperSet(g, {0, 1})).phi() == std::vector<double>{1, 3});
    CHECK(ss_minkowski(a, e).is_empty());
    CHECK(ss_scale(e, 0) == SupportedUpperSet::cone(g));
    CHECK(ss_scale(a, 0) == SupportedUpperSet::cone(g));
    CHECK(ss_scale(a, 1) == a);
    CHECK(ss_scale(a, 2.5).phi() == std::vector<double>{2.5, 5});
    CHECK(ss_scale(e, 3).is_empty());
    CHECK_THROWS_AS(ss_scale(a, -1), std::invalid_argument);
    SupportedUpperSet w = SupportedUpperSet::whole_space(g);
    CHECK(ss_minkowski(a, w) == w);
  }

  TEST_CASE("tightening") {
    GridPtr g = sweep_grid(3);
    REQUIRE(g->size() == 3);
    // Grid: (1,0), (1,1)/sqrt2, (0,1) in sweep order.
    std::vector<double> raw(3);
    for (std::size_t i = 0; i < 3; ++i) raw[i] = (std::abs((*g)[i][0] - (*g)[i][1]) < 1e-12) ? -5.0 : 0.0;
    SupportedUpperSet t = ss_tighten(SupportedUpperSet(g, raw));
    for (std::size_t i = 0; i < 3; ++i) CHECK(t.phi()[i] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ss_tighten(t) == t);

    GridPtr ax = axis_grid();
    SupportedUpperSet whole = SupportedUpperSet::whole_space(ax);
    CHECK(ss_tighten(whole) == whole);

    // Inconsistent rows need opposite directions, so K = {0} and K° is the plane.
    PolyCone zero = PolyCone::from_normals(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    auto g2 = std::make_shared<const DirectionGrid>(zero, std::vector<Vec>{{0, 1}, {0, -1}});
    CHECK(ss_tighten(SupportedUpperSet(g2, {1, 0})).is_empty());
    CHECK_FALSE(ss_tighten(SupportedUpperSet(g2, {-1, 0})).is_empty());
  }

  TEST_CASE("tightening agrees with vertex enumeration") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> c(-4, 4);
    GridPtr g = sweep_grid(7);
    for (int it = 0; it < 200; ++it) {
      std::vector<double> raw(g->size());
      for (double& v : raw) v = (rng() % 5 == 0) ? -kInf : c(rng);
      SupportedUpperSet a(g, raw), t = ss_tighten(a);
      VertexEnumeration ve = vertex_enum_2d(ss_polyhedron(a));
      for (std::size_t i = 0; i < g->size(); ++i) {
        double want = oracle_support(ve, (*g)[i]);
        if (want == -kInf)
          CHECK(t.phi()[i] == -kInf);
        else
          CHECK(t.phi()[i] == doctest::Approx(want).epsilon(1e-9));
      }
      CHECK(ss_tighten(t) == t);
    }
  }

  TEST_CASE("lattice laws") {
    std::mt19937_64 rng(9);
    GridPtr g = sweep_grid(5);
    std::uniform_real_distribution<double> c(-3, 3);
    auto rnd = [&] {
      if (rng() % 8 == 0) return SupportedUpperSet::empty_set(g);
      std::vector<double> phi(g->size());
      for (double& v : phi) v = (rng() % 6 == 0) ? -kInf : c(rng);
      return SupportedUpperSet(g, phi);
    };
    SupportedUpperSet top = SupportedUpperSet::empty_set(g), bottom = SupportedUpperSet::whole_space(g);
    for (int it = 0; it < 300; ++it) {
      SupportedUpperSet a = rnd(), b = rnd(), d = rnd();
      CHECK(ss_inf({a, b}) == ss_inf({b, a}));
      CHECK(ss_sup({a, b}) == ss_sup({b, a}));
      CHECK(ss_inf({ss_inf({a, b}), d}) == ss_inf({a, ss_inf({b, d})}));
      CHECK(ss_sup({ss_sup({a, b}), d}) == ss_sup({a, ss_sup({b, d})}));
      CHECK(ss_inf({a, a}) == a);
      CHECK(ss_sup({a, a}) == a);
      CHECK(ss_inf({a, ss_sup({a, b})}) == a);
      CHECK(ss_sup({a, ss_inf({a, b})}) == a);
      CHECK(ss_leq(a, top));
      CHECK(ss_leq(bottom, a));
      CHECK(ss_leq(ss_inf({a, b}), a));
      CHECK(ss_leq(a, ss_sup({a, b})));
    }
  }

  TEST_CASE("Minkowski sum matches pointwise sums") {
    std::mt19937_64 rng(11);
    GridPtr g = sweep_grid(6);
    for (int it = 0; it < 200; ++it) {
      SupportedUpperSet a = random_canonical(rng, g), b = random_canonical(rng, g);
      SupportedUpperSet s = ss_minkowski(a, b);
      for (int k = 0; k < 100; ++k) {
        Vec x = random_member(rng, a), y = random_member(rng, b);
        REQUIRE(ss_contains(a, x, 1e-9));
        CHECK(ss_contains(s, add(x, y), 1e-9));
      }
      // Every vertex of A + B splits into a vertex of A and a point of B.
      VertexEnumeration va = vertex_enum_2d(ss_polyhedron(a)), vs = vertex_enum_2d(ss_polyhedron(s));
      for (const Vec& v : vs.points) {
        bool split = false;
        for (const Vec& p : va.points) split = split || ss_contains(b, sub(v, p), 1e-9);
        CHECK(split);
      }
    }
  }

  TEST_CASE("order is consistent with membership") {
    std::mt19937_64 rng(12);
    GridPtr g = sweep_grid(5);
    int ordered = 0;
    for (int it = 0; it < 400; ++it) {
      SupportedUpperSet a = random_canonical(rng, g), b = random_canonical(rng, g);
      if (!ss_leq(a, b)) continue;
      ++ordered;
      for (int k = 0; k < 50; ++k) CHECK(ss_contains(a, random_member(rng, b), 1e-9));
    }
    CHECK(ordered > 20);
  }

  TEST_CASE("sampled bullet on an open rectangle") {
    auto open_rect = [](std::span<const double> z) { return z[0] > 1 && z[1] > 2; };
    PolyCone k = PolyCone::axis(2);
    BulletSampling hat;
    hat.mode = Strictness::HatK;
    CHECK_FALSE(bullet_sampled(open_rect, Vec{1, 2}, k, hat));
    CHECK(bullet_sampled(open_rect, Vec{1, 2}, k));
    CHECK(bullet_sampled(open_rect, Vec{1.5, 2.5}, k, hat));
    CHECK_FALSE(bullet_sampled(open_rect, Vec{0.5, 2.5}, k));

    PolyCone halfplane = PolyCone::from_normals(2, {{0, 1}});
    CHECK_THROWS_AS(bullet_sampled(open_rect, Vec{1, 2}, PolyCone::from_normals(2, {{0, 1}, {0, -1}})),
                    std::domain_error);
    // The half-plane cone has a lineality line; probes along it must stay in the set.
    auto band = [](std::span<const double> z) { return z[1] >= 0; };
    CHECK(bullet_sampled(band, Vec{-7, 0}, halfplane, hat));
  }

  TEST_CASE("bullet of closed sets is the set itself") {
    std::mt19937_64 rng(13);
    GridPtr g = sweep_grid(5);
    PolyCone k = PolyCone::axis(2);
    std::uniform_real_distribution<double> t(-10, 10);
    int checked = 0;
    while (checked < 1000) {
      SupportedUpperSet a = random_canonical(rng, g);
      std::size_t i = rng() % g->size();
      const Vec& d = (*g)[i];
      Vec z = axpy(scaled(d, a.phi()[i]), t(rng), Vec{-d[1], d[0]});
      if (!ss_contains(a, z, 1e-12)) continue;
      ++checked;
      auto member = [&](std::span<const double> w) { return ss_contains(a, w, 1e-12); };
      BulletSampling s;
      s.seed = static_cast<std::uint64_t>(checked);
      CHECK(bullet_sampled(member, z, k, s) == ss_contains(a, z, 1e-12));
      Vec out = axpy(z, -1e-3, d);
      CHECK(bullet_sampled(member, out, k, s) == ss_contains(a, out, 1e-12));
    }
  }
}
