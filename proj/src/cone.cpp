#include "setdual/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace setdual {
namespace {

constexpr double kMemberTol = 1e-12;

bool same_direction(const Vec& a, const Vec& b, double resolution) {
  double chord = norm(sub(a, b));
  return 2.0 * std::asin(std::min(1.0, chord / 2.0)) < resolution;
}

void push_unique(std::vector<Vec>& out, Vec v, double resolution) {
  v = normalized(v);
  for (const Vec& u : out)
    if (same_direction(u, v, resolution)) return;
  out.push_back(std::move(v));
}

// Calls f on every subset of {0..n-1} of size k.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)), true);
  if (k > n) return;
  do {
    idx.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) idx.push_back(i);
    f(idx);
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

bool in_strict(const PolyCone& k, std::span<const double> z, Strictness mode) {
  return cone_contains_strict(k, z, mode, kMemberTol);
}

}  // namespace

PolyCone PolyCone::axis(int dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("cone dimension must be in [1, 3]");
  PolyCone k;
  k.dim_ = dim;
  k.kind_ = Kind::Axis;
  for (int i = 0; i < dim; ++i) {
    Vec e(static_cast<std::size_t>(dim), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    k.normals_.push_back(e);
  }
  k.derive();
  return k;
}

PolyCone PolyCone::from_normals(int dim, std::vector<Vec> normals) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("cone dimension must be in [1, 3]");
  PolyCone k;
  k.dim_ = dim;
  for (Vec& g : normals) {
    require_dim(static_cast<std::size_t>(dim), g.size());
    for (double v : g)
      if (!std::isfinite(v)) throw std::invalid_argument("cone normal has a non-finite entry");
    if (norm(g) > 0) k.normals_.push_back(std::move(g));
  }
  k.derive();
  return k;
}

void PolyCone::derive() {
  const auto n = static_cast<std::size_t>(dim_);
  std::vector<Vec> lineality = nullspace(normals_, n);
  pointed_ = lineality.empty();

  std::vector<Vec> rays;
  const std::size_t free_rank = n - lineality.size();
  if (free_rank >= 1) {
    // Extreme rays of K modulo its lineality space: each is cut out by
    // free_rank - 1 independent tight normals.
    for_each_subset(normals_.size(), free_rank - 1, [&](const std::vector<std::size_t>& idx) {
      std::vector<Vec> rows = lineality;
      for (std::size_t i : idx) rows.push_back(normals_[i]);
      std::vector<Vec> ns = nullspace(rows, n);
      if (ns.size() != 1) return;
      for (double sign : {1.0, -1.0}) {
        Vec r = scaled(ns[0], sign);
        if (cone_contains(*this, r, 1e-10)) push_unique(rays, r, 1e-9);
      }
    });
  }
  generators_ = rays;
  for (const Vec& l : lineality) {
    generators_.push_back(l);
    generators_.push_back(scaled(l, -1.0));
  }
  has_interior_ = matrix_rank(generators_, n) == n;
  if (has_interior_) {
    Vec s(n, 0.0);
    for (const Vec& g : generators_) s = add(s, normalized(g));
    if (norm(s) < 1e-12) s.assign(n, 1.0);  // K is the whole space
    interior_ = normalized(s);
  }
}

Vec PolyCone::interior_point() const {
  if (!has_interior_) throw std::logic_error("cone has empty interior");
  return interior_;
}

bool cone_contains(const PolyCone& k, std::span<const double> z, double tol) {
  require_dim(static_cast<std::size_t>(k.dim()), z.size());
  for (const Vec& g : k.normals())
    if (dot(g, z) < -tol) return false;
  return true;
}

bool cone_contains_strict(const PolyCone& k, std::span<const double> z, Strictness mode,
                          double tol) {
  require_dim(static_cast<std::size_t>(k.dim()), z.size());
  if (mode == Strictness::Interior) {
    if (!k.has_interior()) throw std::domain_error("interior strictness on a cone with empty interior");
    for (const Vec& g : k.normals())
      if (dot(g, z) <= tol) return false;
    return true;
  }
  if (!cone_contains(k, z, tol)) return false;
  // z not in -K: some normal sees z strictly positive.
  for (const Vec& g : k.normals())
    if (dot(g, z) > tol) return true;
  return false;
}

ProperPreorderResult properly_preordered_check(const PolyCone& k, Strictness mode, int samples,
                                               std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(k.dim());
  const auto& gens = k.generators();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.1, 1.0);
  std::bernoulli_distribution drop(1.0 / 3.0);

  const bool interior = mode == Strictness::Interior;
  Vec nudge = k.has_interior() ? scaled(k.interior_point(), 1e-3) : Vec(n, 0.0);

  auto find_k3 = [&](const Vec& k1, const Vec& k2) {
    std::vector<Vec> bases = {k1, k2, scaled(add(k1, k2), 0.5)};
    if (k.kind() == PolyCone::Kind::Axis) {
      Vec m(n);
      for (std::size_t i = 0; i < n; ++i) m[i] = std::min(k1[i], k2[i]);
      bases.push_back(m);
    }
    if (k.has_interior()) bases.push_back(k.interior_point());
    for (const Vec& b : bases) {
      double t = 0.5;
      for (int it = 0; it < 30; ++it, t *= 0.5) {
        Vec k3 = scaled(b, t);
        if (in_strict(k, k3, mode) && in_strict(k, sub(k1, k3), mode) &&
            in_strict(k, sub(k2, k3), mode))
          return true;
      }
    }
    return false;
  };

  std::vector<std::pair<Vec, Vec>> pairs;
  // Boundary generator pairs are the hardest cases, so they always run.
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i; j < gens.size(); ++j) {
      Vec a = interior ? add(gens[i], nudge) : gens[i];
      Vec b = interior ? add(gens[j], nudge) : gens[j];
      if (in_strict(k, a, mode) && in_strict(k, b, mode)) pairs.emplace_back(a, b);
    }
  auto sample = [&]() -> std::optional<Vec> {
    for (int attempt = 0; attempt < 100; ++attempt) {
      Vec z(n, 0.0);
      for (const Vec& g : gens) {
        double c = (!interior && drop(rng)) ? 0.0 : coef(rng);
        z = axpy(z, c, g);
      }
      if (in_strict(k, z, mode)) return z;
    }
    return std::nullopt;
  };
  for (int s = 0; s < samples; ++s) {
    auto a = sample();
    auto b = sample();
    if (a && b) pairs.emplace_back(*a, *b);
  }

  for (const auto& [a, b] : pairs)
    if (!find_k3(a, b)) return {false, a, b};
  return {};
}

DirectionGrid::DirectionGrid(const PolyCone& k, std::vector<Vec> directions, double resolution,
                             double tol)
    : dim_(k.dim()), dirs_(std::move(directions)), resolution_(resolution) {
  if (dirs_.empty()) throw std::invalid_argument("direction grid is empty");
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    const Vec& d = dirs_[i];
    require_dim(static_cast<std::size_t>(dim_), d.size());
    if (std::abs(norm(d) - 1.0) > 1e-9)
      throw std::invalid_argument("grid direction " + std::to_string(i) + " is not a unit vector");
    for (const Vec& g : k.generators())
      if (dot(d, g) < -tol * norm(g))
        throw std::invalid_argument("grid direction " + std::to_string(i) +
                                    " is outside the polar cone");
    for (std::size_t j = 0; j < i; ++j)
      if (same_direction(dirs_[j], d, resolution_))
        throw std::invalid_argument("grid directions " + std::to_string(j) + " and " +
                                    std::to_string(i) + " coincide");
  }
  if (!k.generators().empty()) {
    PolyCone polar = PolyCone::from_normals(dim_, k.generators());
    extreme_ = std::all_of(polar.generators().begin(), polar.generators().end(), [&](const Vec& r) {
      Vec u = normalized(r);
      return std::any_of(dirs_.begin(), dirs_.end(),
                         [&](const Vec& d) { return same_direction(d, u, 1e-9); });
    });
  }
}

DirectionGrid polar_grid(const PolyCone& k, int count) {
  const int n = k.dim();
  if (count < (n == 1 ? 1 : 2)) throw std::invalid_argument("polar_grid count too small");
  PolyCone polar = k.generators().empty()
                       ? PolyCone::from_normals(n, {})
                       : PolyCone::from_normals(n, k.generators());
  if (polar.generators().empty()) throw std::domain_error("polar cone is {0}");

  std::vector<Vec> rays;
  for (const Vec& r : polar.generators()) push_unique(rays, r, 1e-9);
  std::vector<Vec> out;
  auto arc = [&](double a0, double sweep, int points, bool closed) {
    int steps = closed ? points - 1 : points;
    for (int i = 0; i < points; ++i) {
      double a = a0 + sweep * i / steps;
      push_unique(out, {std::cos(a), std::sin(a)}, 1e-9);
    }
  };

  if (n == 1) {
    out = rays;
  } else if (n == 2) {
    if (polar.pointed() && rays.size() == 2) {
      double a1 = std::atan2(rays[0][1], rays[0][0]);
      double a2 = std::atan2(rays[1][1], rays[1][0]);
      double d = a2 - a1;
      while (d > std::numbers::pi) d -= 2 * std::numbers::pi;
      while (d <= -std::numbers::pi) d += 2 * std::numbers::pi;
      out.push_back(rays[0]);
      for (int i = 1; i + 1 < count; ++i) {
        double a = a1 + d * i / (count - 1);
        push_unique(out, {std::cos(a), std::sin(a)}, 1e-9);
      }
      push_unique(out, rays[1], 1e-9);
    } else if (polar.pointed()) {
      out = rays;
    } else if (rays.size() == 2) {
      out = rays;  // a line: K° = span{l}
    } else if (rays.size() == 3) {
      // Half-plane: sweep from l through the inward ray to -l.
      const Vec& l = rays[rays.size() - 2];
      const Vec& r = rays[0];
      double al = std::atan2(l[1], l[0]);
      double sign = (l[0] * r[1] - l[1] * r[0]) > 0 ? 1.0 : -1.0;
      for (const Vec& v : rays) push_unique(out, v, 1e-9);
      arc(al, sign * std::numbers::pi, std::max(count, 3), true);
    } else {
      arc(0.0, 2 * std::numbers::pi, std::max(count, 4), false);
    }
  } else {
    out = rays;
    int level = count - 1;
    if (polar.pointed() && level >= 2) {
      // Normalized simplex-lattice combinations of the extreme rays.
      std::vector<int> w(rays.size(), 0);
      auto rec = [&](auto&& self, std::size_t i, int left) -> void {
        if (i + 1 == rays.size()) {
          w[i] = left;
          Vec v(3, 0.0);
          for (std::size_t j = 0; j < rays.size(); ++j) v = axpy(v, w[j], rays[j]);
          if (norm(v) > 1e-12) push_unique(out, v, 1e-9);
          return;
        }
        for (int c = 0; c <= left; ++c) {
          w[i] = c;
          self(self, i + 1, left - c);
        }
      };
      rec(rec, 0, level);
    }
  }

  DirectionGrid grid(k, out, 1e-9, 1e-12);
  return grid;
}

}  // namespace setdual
