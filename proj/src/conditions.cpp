#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <random>
#include <sstream>

#include "setdual/duality.hpp"

namespace setdual {
namespace {

void fail(ConditionTally& t, std::string what) {
  ++t.violations;
  if (t.first_failure.empty()) t.first_failure = std::move(what);
}

Vec random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  for (;;) {
    Vec v(dim);
    for (double& x : v) x = g(rng);
    if (norm(v) > 1e-3) return normalized(v);
  }
}

bool finite_or_pos(const ExtReal& a) { return !a.is_neg_inf(); }

std::string show(std::span<const double> v) { return fmt::format("[{}]", fmt::join(v, ", ")); }

}  // namespace

CompareReport maximality_compare(const RiskMembership& ra, const RiskMembership& rb,
                                 const std::vector<RiskSample>& samples) {
  CompareReport rep;
  for (const RiskSample& s : samples) {
    ++rep.checked;
    if (rb(s.xstar, s.s, s.z) && !ra(s.xstar, s.s, s.z)) {
      ++rep.violations;
      if (!rep.witness) rep.witness = s;
    }
  }
  return rep;
}

ConditionsReport maximal_conditions_check(const PenaltyTable& table, const ConditionsConfig& config) {
  const SetValuedFn& f = table.model();
  const auto m = static_cast<std::size_t>(f.m());
  std::vector<std::pair<double, double>> zbox = config.z_box;
  if (zbox.empty()) zbox.assign(static_cast<std::size_t>(f.n()), {-5.0, 5.0});
  require_dim(static_cast<std::size_t>(f.n()), zbox.size());

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> pool = config.dual_grid;
  for (const Vec& v : pool) require_dim(m, v.size());
  for (int i = 0; i < 4; ++i) pool.push_back(random_unit(rng, m));

  const std::vector<std::pair<Rational, double>> lambdas = {
      {Rational(1, 3), 1.0 / 3.0}, {Rational(1, 2), 0.5}, {Rational(2), 2.0}, {Rational(5), 5.0}};
  const double mixes[] = {0.25, 0.5, 0.75};

  ConditionsReport rep;
  for (int it = 0; it < config.samples; ++it) {
    Vec z(zbox.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = zbox[i].first + (zbox[i].second - zbox[i].first) * u(rng);
    const Vec& xs = pool[rng() % pool.size()];

    // (ii) homogeneity.
    {
      const auto& [lq, ld] = lambdas[static_cast<std::size_t>(it) % lambdas.size()];
      double s = -10.0 + 20.0 * u(rng);
      Vec lx = scaled(xs, ld);
      ++rep.homogeneity.checked;
      if (risk_contains(table, lx, s, z) != risk_contains(table, xs, s / ld, z))
        fail(rep.homogeneity, fmt::format("R(lx*, s) != R(x*, s/l) at x*={} l={} s={} z={}", show(xs), ld, s, show(z)));
      if (f.convex_mode()) {
        std::vector<Rational> zq(z.begin(), z.end()), xq(xs.begin(), xs.end()), lxq;
        for (const Rational& v : xq) lxq.push_back(lq * v);
        ExtRational a = penalty_alpha_exact(f, zq, xq), b = penalty_alpha_exact(f, zq, lxq);
        ++rep.homogeneity.checked;
        if (!(b == ext_scale(lq, a)))
          fail(rep.homogeneity, fmt::format("exact alpha not homogeneous at x*={} l={} z={}", show(xs), ld, show(z)));
      }
    }

    // (ii) quasiconcavity: {(x*, s) : s > α(x*, z)} is convex.
    {
      Vec x1 = scaled(pool[rng() % pool.size()], 0.2 + 1.8 * u(rng));
      Vec x2 = scaled(pool[rng() % pool.size()], 0.2 + 1.8 * u(rng));
      ExtReal a1 = table.alpha(x1, z).value, a2 = table.alpha(x2, z).value;
      if (!a1.is_pos_inf() && !a2.is_pos_inf()) {
        double s1 = a1.is_finite() ? a1.value() + 2.0 * u(rng) : -10.0 + 20.0 * u(rng);
        double s2 = a2.is_finite() ? a2.value() + 2.0 * u(rng) : -10.0 + 20.0 * u(rng);
        for (double lam : mixes) {
          Vec xm(m);
          for (std::size_t i = 0; i < m; ++i) xm[i] = lam * x1[i] + (1.0 - lam) * x2[i];
          double sm = lam * s1 + (1.0 - lam) * s2;
          ExtReal am = table.alpha(xm, z).value;
          ++rep.quasiconcavity.checked;
          bool above = am.is_neg_inf() || (am.is_finite() && sm > am.value() - 1e-9 * (1.0 + std::abs(am.value())));
          if (!above)
            fail(rep.quasiconcavity,
                 fmt::format("midpoint of ({}, {}) and ({}, {}) leaves the strict epigraph at z={}", show(x1), s1,
                             show(x2), s2, show(z)));
        }
      }
    }

    // Two routes to the left limit, then (iii) openness around strict witnesses.
    {
      ExtReal direct = penalty_alpha_left_direct(f, z, xs);
      ExtReal probed = penalty_alpha_left(f, z, xs, table.schedule()).value;
      ++rep.two_route.checked;
      bool agree = direct.is_finite() && probed.is_finite()
                       ? std::abs(direct.value() - probed.value()) <= config.agree_tol * (1.0 + std::abs(direct.value()))
                       : direct == probed;
      if (!agree) {
        std::ostringstream os;
        os << "left limits differ at x*=" << show(xs) << " z=" << show(z) << ": probe " << probed << " direct "
           << direct;
        fail(rep.two_route, os.str());
      }
      if (!direct.is_neg_inf()) {
        double s = direct.is_finite() ? direct.value() - 0.05 * (1.0 + std::abs(direct.value())) - u(rng)
                                      : -5.0 + 10.0 * u(rng);
        std::vector<Vec> dirs;
        for (std::size_t i = 0; i < m; ++i) {
          Vec e(m, 0.0);
          e[i] = 1.0;
          dirs.push_back(e);
          dirs.push_back(scaled(e, -1.0));
        }
        dirs.push_back(random_unit(rng, m));
        dirs.push_back(random_unit(rng, m));
        for (double r : config.radii) {
          for (const Vec& dv : dirs) {
            Vec xp = axpy(xs, r, dv);
            ExtReal ap = penalty_alpha_left_direct(f, z, xp);
            ++rep.openness.checked;
            if (!(ap.is_pos_inf() || (ap.is_finite() && s < ap.value())))
              fail(rep.openness, fmt::format("witness s={} at x*={} lost at {} (z={})", s, show(xs), show(xp), show(z)));
          }
        }
      }
    }

    // (iv) the finite range of α(·, z) does not depend on x*.
    {
      ++rep.range.checked;
      bool first = finite_or_pos(table.alpha(pool.front(), z).value);
      for (const Vec& p : pool) {
        if (finite_or_pos(table.alpha(p, z).value) != first) {
          fail(rep.range, fmt::format("alpha(., z) > -inf differs between {} and {} at z={}", show(pool.front()),
                                      show(p), show(z)));
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace setdual
