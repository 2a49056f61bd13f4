#include "setdual/suppset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace setdual {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_grid(const SupportedUpperSet& a, const SupportedUpperSet& b) {
  if (!same_grid(a, b)) throw std::invalid_argument("supported sets live on different grids");
}

void require_family(const std::vector<SupportedUpperSet>& family) {
  if (family.empty()) throw std::invalid_argument("empty family");
  for (const auto& a : family) require_same_grid(family.front(), a);
}

}  // namespace

SupportedUpperSet::SupportedUpperSet(GridPtr grid, std::vector<double> phi)
    : grid_(std::move(grid)), phi_(std::move(phi)) {
  if (!grid_) throw std::invalid_argument("null direction grid");
  require_dim(grid_->size(), phi_.size());
  for (double v : phi_) {
    if (std::isnan(v)) throw std::invalid_argument("NaN support value");
    if (v == kInf) empty_ = true;
  }
}

SupportedUpperSet SupportedUpperSet::empty_set(GridPtr grid) {
  std::size_t n = grid ? grid->size() : 0;
  SupportedUpperSet a(std::move(grid), std::vector<double>(n, -kInf));
  a.empty_ = true;
  return a;
}

SupportedUpperSet SupportedUpperSet::whole_space(GridPtr grid) {
  std::size_t n = grid ? grid->size() : 0;
  return SupportedUpperSet(std::move(grid), std::vector<double>(n, -kInf));
}

SupportedUpperSet SupportedUpperSet::cone(GridPtr grid) {
  std::size_t n = grid ? grid->size() : 0;
  return SupportedUpperSet(std::move(grid), std::vector<double>(n, 0.0));
}

bool operator==(const SupportedUpperSet& a, const SupportedUpperSet& b) {
  if (!same_grid(a, b) || a.empty_ != b.empty_) return false;
  return a.empty_ || a.phi_ == b.phi_;
}

bool same_grid(const SupportedUpperSet& a, const SupportedUpperSet& b) {
  return a.grid() == b.grid() || *a.grid() == *b.grid();
}

bool ss_contains(const SupportedUpperSet& a, std::span<const double> z, double tol) {
  require_dim(static_cast<std::size_t>(a.dim()), z.size());
  if (a.is_empty()) return false;
  const DirectionGrid& g = *a.grid();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (a.phi()[i] != -kInf && dot(g[i], z) < a.phi()[i] - tol) return false;
  return true;
}

bool ss_leq(const SupportedUpperSet& a, const SupportedUpperSet& b, double tol) {
  require_same_grid(a, b);
  if (b.is_empty()) return true;
  if (a.is_empty()) return false;
  for (std::size_t i = 0; i < a.phi().size(); ++i)
    if (a.phi()[i] > b.phi()[i] + tol) return false;
  return true;
}

SupportedUpperSet ss_inf(const std::vector<SupportedUpperSet>& family) {
  require_family(family);
  const GridPtr& grid = family.front().grid();
  std::vector<double> phi(grid->size(), kInf);
  bool any = false;
  for (const auto& a : family) {
    if (a.is_empty()) continue;
    any = true;
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::min(phi[i], a.phi()[i]);
  }
  if (!any) return SupportedUpperSet::empty_set(grid);
  return SupportedUpperSet(grid, std::move(phi));
}

SupportedUpperSet ss_sup(const std::vector<SupportedUpperSet>& family) {
  require_family(family);
  const GridPtr& grid = family.front().grid();
  std::vector<double> phi(grid->size(), -kInf);
  for (const auto& a : family) {
    if (a.is_empty()) return SupportedUpperSet::empty_set(grid);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::max(phi[i], a.phi()[i]);
  }
  return SupportedUpperSet(grid, std::move(phi));
}

SupportedUpperSet ss_minkowski(const SupportedUpperSet& a, const SupportedUpperSet& b) {
  require_same_grid(a, b);
  if (a.is_empty() || b.is_empty()) return SupportedUpperSet::empty_set(a.grid());
  std::vector<double> phi(a.phi().size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] = (a.phi()[i] == -kInf || b.phi()[i] == -kInf) ? -kInf : a.phi()[i] + b.phi()[i];
  return SupportedUpperSet(a.grid(), std::move(phi));
}

SupportedUpperSet ss_scale(const SupportedUpperSet& a, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("negative scale factor");
  if (lambda == 0.0) return SupportedUpperSet::cone(a.grid());
  if (a.is_empty()) return a;
  std::vector<double> phi = a.phi();
  for (double& v : phi)
    if (v != -kInf) v *= lambda;
  return SupportedUpperSet(a.grid(), std::move(phi));
}

Polyhedron ss_polyhedron(const SupportedUpperSet& a) {
  Polyhedron p(a.dim());
  if (a.is_empty()) {
    p.add_row(Vec(static_cast<std::size_t>(a.dim()), 0.0), -1.0);
    return p;
  }
  const DirectionGrid& g = *a.grid();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (a.phi()[i] != -kInf) p.add_row(scaled(g[i], -1.0), -a.phi()[i]);
  return p;
}

SupportedUpperSet ss_tighten(const SupportedUpperSet& a) {
  if (a.is_empty()) return a;
  Polyhedron p = ss_polyhedron(a);
  const DirectionGrid& g = *a.grid();
  std::vector<double> phi(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Vec c = scaled(g[i], -1.0);
    ExtReal s = lp_support(p, c);
    if (s.is_neg_inf()) return SupportedUpperSet::empty_set(a.grid());
    double t = s.is_pos_inf() ? -kInf : -s.value();
    double old = a.phi()[i];
    if (old != -kInf && t != -kInf && std::abs(t - old) <= 1e-9 * (1.0 + std::abs(old))) t = old;
    phi[i] = t;
  }
  return SupportedUpperSet(a.grid(), std::move(phi));
}

bool hs_contains(const HalfSpaceS& h, std::span<const double> z, double tol) {
  require_dim(h.zstar.size(), z.size());
  return h.s <= dot(h.zstar, z) + tol;
}

SupportedUpperSet hs_to_set(GridPtr grid, const HalfSpaceS& h) {
  require_dim(static_cast<std::size_t>(grid->dim()), h.zstar.size());
  double len = norm(h.zstar);
  if (len == 0.0)
    return h.s <= 0.0 ? SupportedUpperSet::whole_space(grid) : SupportedUpperSet::empty_set(grid);
  Vec d = scaled(h.zstar, 1.0 / len);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (norm(sub((*grid)[i], d)) > grid->resolution()) continue;
    std::vector<double> phi(grid->size(), -kInf);
    phi[i] = h.s / len;
    return SupportedUpperSet(grid, std::move(phi));
  }
  throw std::invalid_argument("half-space direction is not on the grid");
}

bool bullet_sampled(const std::function<bool(std::span<const double>)>& member,
                    std::span<const double> z, const PolyCone& k, const BulletSampling& sampling) {
  require_dim(static_cast<std::size_t>(k.dim()), z.size());
  std::vector<Vec> rays, lineality;
  for (const Vec& g : k.generators()) {
    if (cone_contains(k, scaled(g, -1.0), 1e-12))
      lineality.push_back(g);
    else
      rays.push_back(g);
  }

  std::mt19937_64 rng(sampling.seed);
  std::uniform_real_distribution<double> coef(0.0, 1.0);
  std::vector<Vec> probes;
  if (sampling.mode == Strictness::Interior) {
    if (!k.has_interior()) throw std::domain_error("interior strict cone requested but int(K) is empty");
    probes.push_back(k.interior_point());
    for (int s = 0; s < sampling.ray_samples; ++s) {
      Vec v(z.size(), 0.0);
      // Every generator with a positive weight lands in the relative interior.
      for (const Vec& g : k.generators()) v = axpy(v, 0.05 + coef(rng), g);
      probes.push_back(normalized(v));
    }
  } else {
    if (rays.empty()) return true;  // K̂ is empty: z + K̂ ⊆ A holds vacuously
    probes = rays;
    for (int s = 0; s < sampling.ray_samples; ++s) {
      Vec v(z.size(), 0.0);
      // Random face: each ray kept with probability 1/2, at least one kept.
      std::size_t forced = static_cast<std::size_t>(rng() % rays.size());
      for (std::size_t r = 0; r < rays.size(); ++r)
        if (r == forced || coef(rng) < 0.5) v = axpy(v, 0.05 + coef(rng), rays[r]);
      for (const Vec& l : lineality) v = axpy(v, coef(rng) - 0.5, l);
      probes.push_back(normalized(v));
    }
  }

  for (const Vec& ray : probes)
    for (double eps : sampling.eps)
      if (!member(axpy(z, eps, ray))) return false;
  return true;
}

}  // namespace setdual
