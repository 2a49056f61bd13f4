#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "setdual/linprog.hpp"

using namespace setdual;

namespace {

Polyhedron interval(double lo, double hi) {
  Polyhedron p(1);
  p.add_row({1.0}, hi);
  p.add_row({-1.0}, -lo);
  return p;
}

// Conjugate of a 1D max-affine function: +inf outside the slope range, otherwise
// the best value over the kinks (pairwise piece crossings).
ExtReal conjugate_by_kinks(const MaxAffine& g, double s) {
  double lo = 1e300, hi = -1e300;
  for (const auto& p : g.pieces()) {
    lo = std::min(lo, p.slope[0]);
    hi = std::max(hi, p.slope[0]);
  }
  if (s < lo || s > hi) return ExtReal::pos_inf();
  std::vector<double> xs;
  for (const auto& p : g.pieces())
    for (const auto& q : g.pieces())
      if (p.slope[0] != q.slope[0]) xs.push_back((q.intercept - p.intercept) / (p.slope[0] - q.slope[0]));
  if (xs.empty()) return ExtReal(-g.pieces()[0].intercept);
  double best = -1e300;
  for (double x : xs) best = std::max(best, s * x - g(Vec{x}));
  return ExtReal(best);
}

Polyhedron random_polyhedron(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rows(0, 6), coef(-4, 4), rhs(-6, 6);
  Polyhedron p(2);
  int k = rows(rng);
  for (int i = 0; i < k; ++i) p.add_row({double(coef(rng)), double(coef(rng))}, double(rhs(rng)));
  return p;
}

bool same_class_and_value(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.kind() != b.kind()) return false;
  return !a.is_finite() || std::abs(a.value() - b.value()) <= tol;
}

}  // namespace

TEST_SUITE("linprog") {
  TEST_CASE("support of simple intervals") {
    Polyhedron p = interval(0, 1);
    CHECK(lp_support(p, Vec{1.0}) == ExtReal(1.0));
    CHECK(lp_support(p, Vec{-1.0}) == ExtReal(0.0));

    Polyhedron ray(1);
    ray.add_row({-1.0}, 0.0);
    CHECK(lp_support(ray, Vec{1.0}).is_pos_inf());

    Polyhedron empty(1);
    empty.add_row({1.0}, -1.0);
    empty.add_row({-1.0}, 0.0);
    CHECK(lp_support(empty, Vec{1.0}).is_neg_inf());
    CHECK(lp_is_empty(empty));

    Polyhedron half(1);
    half.add_row({1.0}, 1.0);
    CHECK_FALSE(lp_is_empty(half));

    Polyhedron flagged(2);
    flagged.add_row({0.0, 0.0}, -1.0);
    CHECK(flagged.explicitly_empty());
    CHECK(lp_is_empty(flagged));

    Polyhedron plane(2);
    CHECK(lp_support(plane, Vec{0.0, 0.0}) == ExtReal(0.0));
    CHECK(lp_support(plane, Vec{1.0, 0.0}).is_pos_inf());
  }

  TEST_CASE("vertex enumeration of a square and a quadrant") {
    Polyhedron sq(2);
    sq.add_row({1, 0}, 1);
    sq.add_row({-1, 0}, 0);
    sq.add_row({0, 1}, 1);
    sq.add_row({0, -1}, 0);
    VertexEnumeration v = vertex_enum_2d(sq);
    CHECK(v.points.size() == 4);
    CHECK(v.rays.empty());

    Polyhedron quad(2);
    quad.add_row({-1, 0}, 0);
    quad.add_row({0, -1}, 0);
    VertexEnumeration w = vertex_enum_2d(quad);
    REQUIRE(w.points.size() == 1);
    CHECK(w.points[0] == Vec{0, 0});
    CHECK(w.rays.size() == 2);
    CHECK(std::find(w.rays.begin(), w.rays.end(), Vec{1, 0}) != w.rays.end());
    CHECK(std::find(w.rays.begin(), w.rays.end(), Vec{0, 1}) != w.rays.end());
  }

  TEST_CASE("simplex agrees with vertex enumeration on random polyhedra") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> c(-3, 3);
    int disagreements = 0;
    for (int i = 0; i < 300; ++i) {
      Polyhedron p = random_polyhedron(rng);
      Vec dir{double(c(rng)), double(c(rng))};
      ExtReal a = lp_support(p, dir);
      ExtReal b = vertex_enum_2d(p).support(dir);
      disagreements += !same_class_and_value(a, b, 1e-9);
      CHECK(lp_is_empty(p) == a.is_neg_inf());
    }
    CHECK(disagreements == 0);
  }

  TEST_CASE("max-affine conjugates") {
    MaxAffine vee({{{-1.0}, 0.0}, {{2.0}, 0.0}});
    CHECK(maxaffine_conjugate(vee, Vec{1.0}) == conjugate_by_kinks(vee, 1.0));
    CHECK(maxaffine_conjugate(vee, Vec{1.0}) == ExtReal(0.0));
    CHECK(maxaffine_conjugate(vee, Vec{3.0}).is_pos_inf());

    MaxAffine abs1({{{-1.0}, 0.0}, {{1.0}, 0.0}});
    for (double s : {-1.0, -0.5, 0.0, 0.25, 1.0}) CHECK(maxaffine_conjugate(abs1, Vec{s}) == ExtReal(0.0));

    MaxAffine affine({{{1.0}, 1.0}});
    CHECK(maxaffine_conjugate(affine, Vec{1.0}) == ExtReal(-1.0));
    CHECK(maxaffine_conjugate(affine, Vec{0.0}).is_pos_inf());

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> k(1, 5), a(-4, 4);
    std::uniform_real_distribution<double> s(-5, 5);
    for (int i = 0; i < 200; ++i) {
      std::vector<AffinePiece> pcs;
      int n = k(rng);
      for (int j = 0; j < n; ++j) pcs.push_back({{double(a(rng))}, double(a(rng))});
      MaxAffine g(pcs);
      double x = s(rng);
      ExtReal lp = maxaffine_conjugate(g, Vec{x});
      CHECK(same_class_and_value(lp, conjugate_by_kinks(g, x), 1e-9));
    }

    CHECK_THROWS_AS(MaxAffine({}), std::invalid_argument);
  }

  TEST_CASE("exact rational support") {
    ExactPolyhedron p(2);
    p.add_row({Rational(1), Rational(1)}, Rational(1, 3));
    p.add_row({Rational(-1), Rational(0)}, Rational(0));
    p.add_row({Rational(0), Rational(-1)}, Rational(0));
    std::vector<Rational> c{Rational(2), Rational(1)};
    ExtRational v = lp_support<Rational>(p, c);
    REQUIRE(v.is_finite());
    CHECK(v.value() == Rational(2, 3));
    CHECK(Rational(0.1) != Rational(1, 10));  // doubles convert exactly
  }

  TEST_CASE("property: support is positively homogeneous, exactly") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> c(-3, 3);
    const Rational lambdas[] = {Rational(1, 3), Rational(1, 2), Rational(2), Rational(5)};
    for (int i = 0; i < 100; ++i) {
      ExactPolyhedron p = to_exact(random_polyhedron(rng));
      std::vector<Rational> dir{Rational(c(rng)), Rational(c(rng))};
      ExtRational base = lp_support<Rational>(p, dir);
      for (const Rational& l : lambdas) {
        std::vector<Rational> scaled_dir{l * dir[0], l * dir[1]};
        CHECK(lp_support<Rational>(p, scaled_dir) == ext_scale(l, base));
      }
    }
  }

  TEST_CASE("property: support is convex in the direction") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-2, 2);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      Polyhedron p = random_polyhedron(rng);
      Vec x{u(rng), u(rng)}, y{u(rng), u(rng)};
      ExtReal sx = lp_support(p, x), sy = lp_support(p, y);
      ExtReal sm = lp_support(p, scaled(add(x, y), 0.5));
      if (sx.is_finite() && sy.is_finite()) {
        REQUIRE(!sm.is_pos_inf());
        if (sm.is_finite()) CHECK(sm.value() <= 0.5 * (sx.value() + sy.value()) + 1e-9);
        ++checked;
      }
    }
    CHECK(checked > 20);
  }

  TEST_CASE("property: Fenchel-Young inequality") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> k(1, 4), a(-3, 3);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int i = 0; i < 300; ++i) {
      std::vector<AffinePiece> pcs;
      int n = k(rng);
      for (int j = 0; j < n; ++j) pcs.push_back({{double(a(rng)), double(a(rng))}, u(rng)});
      MaxAffine g(pcs);
      Vec x{u(rng), u(rng)}, xs{u(rng) / 2, u(rng) / 2};
      ExtReal c = maxaffine_conjugate(g, xs);
      if (c.is_finite()) CHECK(dot(xs, x) <= g(x) + c.value() + 1e-9);
    }
  }
}
