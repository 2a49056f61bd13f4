#include "setdual/duality.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <limits>
#include <numbers>
#include <sstream>

namespace setdual {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> resolve_eps(const std::vector<double>& eps) {
  std::vector<double> e = eps;
  if (e.size() == 2) e = {e[0], std::sqrt(e[0] * e[1]), e[1]};
  if (e.size() != 3) throw std::invalid_argument("probe schedule needs two or three eps values");
  if (!(e[0] > e[1] && e[1] > e[2] && e[2] > 0.0))
    throw std::invalid_argument("probe eps values must be positive and decreasing");
  return e;
}

Vec resolve_k0(const SetValuedFn& f, const ProbeSchedule& schedule) {
  if (schedule.k0.empty()) {
    if (!f.cone().has_interior()) throw std::domain_error("probing needs a cone with interior");
    return f.cone().interior_point();
  }
  require_dim(static_cast<std::size_t>(f.n()), schedule.k0.size());
  if (!cone_contains_strict(f.cone(), schedule.k0, Strictness::Interior, 1e-12))
    throw std::invalid_argument("probe direction k0 must lie in int(K)");
  return schedule.k0;
}

double extended_distance(const ExtReal& a, const ExtReal& b) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value()) / (1.0 + std::abs(b.value()));
  return a == b ? 0.0 : kInf;
}

AlphaValue probe_limit(const SetValuedFn& f, std::span<const double> z, std::span<const double> xstar,
                       const ProbeSchedule& schedule, double sign) {
  require_dim(static_cast<std::size_t>(f.n()), z.size());
  require_dim(static_cast<std::size_t>(f.m()), xstar.size());
  std::vector<double> eps = resolve_eps(schedule.eps);
  Vec k0 = resolve_k0(f, schedule);
  std::vector<ExtReal> v(3);
  for (int round = 0; round <= schedule.max_shrinks; ++round) {
    for (std::size_t i = 0; i < 3; ++i) v[i] = penalty_sigma(f, axpy(z, sign * eps[i], k0), xstar);
    std::optional<ExtReal> limit;
    if (!v[0].is_finite() && v[0] == v[1] && v[1] == v[2]) {
      limit = v[0];
    } else if (v[0].is_finite() && v[1].is_finite() && v[2].is_finite()) {
      double c = (v[0].value() - v[2].value()) / (eps[0] - eps[2]);
      double predicted = v[2].value() + c * (eps[1] - eps[2]);
      if (std::abs(predicted - v[1].value()) <= 1e-9 * (1.0 + std::abs(v[1].value())))
        limit = ExtReal(v[2].value() - c * eps[2]);
    }
    if (limit) {
      ExtReal at = penalty_sigma(f, z, xstar);
      return {*limit, extended_distance(at, *limit) > 1e-6};
    }
    for (double& e : eps) e *= 1e-3;
  }
  std::ostringstream vals;
  for (const ExtReal& x : v) vals << ' ' << x;
  throw ProbeNonConvergence(fmt::format("probe values do not settle at z=[{}] x*=[{}]:{}", fmt::join(z, ", "),
                                        fmt::join(xstar, ", "), vals.str()),
                            Vec(z.begin(), z.end()), Vec(xstar.begin(), xstar.end()), v);
}

// Support of the interval (lo, hi) at x* in R.
ExtReal interval_support(double lo, double hi, double xstar) {
  if (xstar > 0) return hi == kInf ? ExtReal::pos_inf() : ExtReal(xstar * hi);
  if (xstar < 0) return lo == -kInf ? ExtReal::pos_inf() : ExtReal(xstar * lo);
  return ExtReal(0.0);
}

ExactPolyhedron exact_level_set(const SetValuedFn& f, const std::vector<Rational>& z) {
  ExactPolyhedron p(f.m());
  for (std::size_t d = 0; d < f.g().size(); ++d) {
    Rational c = 0;
    for (std::size_t i = 0; i < z.size(); ++i) c += Rational((*f.grid())[d][i]) * z[i];
    for (const AffinePiece& pc : std::get<MaxAffine>(f.g()[d]).pieces()) {
      std::vector<Rational> row;
      for (double a : pc.slope) row.emplace_back(a);
      p.add_row(std::move(row), c - Rational(pc.intercept));
    }
  }
  return p;
}

}  // namespace

ExtReal penalty_sigma(const SetValuedFn& f, std::span<const double> z, std::span<const double> xstar) {
  require_dim(static_cast<std::size_t>(f.m()), xstar.size());
  return lp_support(fn_level_set(f, z), xstar);
}

AlphaValue penalty_alpha(const SetValuedFn& f, std::span<const double> z, std::span<const double> xstar,
                         const ProbeSchedule& schedule) {
  return probe_limit(f, z, xstar, schedule, 1.0);
}

AlphaValue penalty_alpha_left(const SetValuedFn& f, std::span<const double> z, std::span<const double> xstar,
                              const ProbeSchedule& schedule) {
  return probe_limit(f, z, xstar, schedule, -1.0);
}

ExtReal penalty_alpha_left_direct(const SetValuedFn& f, std::span<const double> z,
                                  std::span<const double> xstar) {
  require_dim(static_cast<std::size_t>(f.n()), z.size());
  require_dim(static_cast<std::size_t>(f.m()), xstar.size());
  if (f.convex_mode()) {
    // max t subject to <a_j, x> + b_j + t <= <d, z>: H(z) ≠ ∅ iff t* > 0.
    const auto m = static_cast<std::size_t>(f.m());
    LinearProgram<double> lp;
    lp.num_vars = f.m() + 1;
    lp.free.assign(m + 1, true);
    lp.objective.assign(m + 1, 0.0);
    lp.objective[m] = 1.0;
    for (std::size_t d = 0; d < f.g().size(); ++d) {
      double c = dot((*f.grid())[d], z);
      for (const AffinePiece& pc : std::get<MaxAffine>(f.g()[d]).pieces()) {
        Vec row = pc.slope;
        row.push_back(1.0);
        lp.rows.push_back({row, RowSense::LessEq, c - pc.intercept});
      }
    }
    LpResult<double> r = solve_lp(lp);
    bool open_nonempty = r.status == LpStatus::Unbounded || (r.status == LpStatus::Optimal && r.value > 0.0);
    if (!open_nonempty) return ExtReal::neg_inf();
    return penalty_sigma(f, z, xstar);
  }
  double lo = -kInf, hi = kInf;
  for (std::size_t d = 0; d < f.g().size(); ++d) {
    double c = dot((*f.grid())[d], z);
    if (const auto* ma = std::get_if<MaxAffine>(&f.g()[d])) {
      for (const AffinePiece& pc : ma->pieces()) {
        double a = pc.slope[0], t = (c - pc.intercept) / a;
        if (a > 0)
          hi = std::min(hi, t);
        else if (a < 0)
          lo = std::max(lo, t);
        else if (!(pc.intercept < c))
          return ExtReal::neg_inf();
      }
    } else {
      auto iv = std::get<PiecewiseLinear1D>(f.g()[d]).strict_sublevel(c);
      if (!iv) return ExtReal::neg_inf();
      lo = std::max(lo, iv->first);
      hi = std::min(hi, iv->second);
    }
  }
  if (!(lo < hi)) return ExtReal::neg_inf();
  return interval_support(lo, hi, xstar[0]);
}

ExtRational penalty_alpha_exact(const SetValuedFn& f, std::span<const Rational> z,
                                std::span<const Rational> xstar) {
  if (!f.convex_mode()) throw UnsupportedOperation("exact penalty needs a convex-mode model");
  require_dim(static_cast<std::size_t>(f.n()), z.size());
  require_dim(static_cast<std::size_t>(f.m()), xstar.size());
  std::vector<Rational> eps = {Rational(1, 1000), Rational(1, 100000), Rational(1, 1000000)};
  auto sigma = [&](const Rational& e) {
    std::vector<Rational> zt(z.begin(), z.end());
    for (Rational& v : zt) v += e;
    return lp_support<Rational>(exact_level_set(f, zt), xstar);
  };
  for (int round = 0; round < 3; ++round) {
    std::vector<ExtRational> v;
    for (const Rational& e : eps) v.push_back(sigma(e));
    if (!v[0].is_finite() && v[0] == v[1] && v[1] == v[2]) return v[0];
    if (v[0].is_finite() && v[1].is_finite() && v[2].is_finite()) {
      Rational c = (v[0].value() - v[2].value()) / (eps[0] - eps[2]);
      if (v[2].value() + c * (eps[1] - eps[2]) == v[1].value()) return ExtRational(v[2].value() - c * eps[2]);
    }
    for (Rational& e : eps) e /= 1000;
  }
  throw ProbeNonConvergence("exact probe values do not settle", {}, {}, {});
}

PenaltyTable::PenaltyTable(std::shared_ptr<const SetValuedFn> f, ProbeSchedule schedule)
    : f_(std::move(f)), schedule_(std::move(schedule)) {
  if (!f_) throw std::invalid_argument("null model");
  resolve_eps(schedule_.eps);
  resolve_k0(*f_, schedule_);
}

AlphaValue PenaltyTable::alpha(std::span<const double> xstar, std::span<const double> z) const {
  std::pair<Vec, Vec> key{Vec(xstar.begin(), xstar.end()), Vec(z.begin(), z.end())};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  AlphaValue v = penalty_alpha(*f_, z, xstar, schedule_);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(std::move(key), v);
  return v;
}

std::size_t PenaltyTable::cached() const {
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.size();
}

bool risk_contains(const PenaltyTable& table, std::span<const double> xstar, double s,
                   std::span<const double> z, double tol) {
  ExtReal a = table.alpha(xstar, z).value;
  if (a.is_pos_inf()) return true;
  if (a.is_neg_inf()) return false;
  return s <= a.value() + tol;
}

bool qc_reconstruct_contains(const PenaltyTable& table, const std::vector<Vec>& dual_grid,
                             std::span<const double> x, std::span<const double> z, double tol) {
  if (dual_grid.empty()) throw std::invalid_argument("empty dual grid");
  for (const Vec& xs : dual_grid)
    if (!risk_contains(table, xs, dot(xs, x), z, tol)) return false;
  return true;
}

ExtReal fm_conjugate(const SetValuedFn& f, std::span<const double> xstar, std::size_t d) {
  if (!f.convex_mode()) throw UnsupportedOperation("conjugate needs a convex-mode model");
  return -maxaffine_conjugate(std::get<MaxAffine>(f.g().at(d)), xstar);
}

FmTable::FmTable(const SetValuedFn& f, std::vector<Vec> dual_grid) : f_(&f), grid_(std::move(dual_grid)) {
  if (grid_.empty()) throw std::invalid_argument("empty dual grid");
  for (const Vec& xs : grid_) {
    std::vector<ExtReal> row;
    for (std::size_t d = 0; d < f.g().size(); ++d) row.push_back(fm_conjugate(f, xs, d));
    c_.push_back(std::move(row));
  }
}

bool FmTable::risk_contains(std::size_t i, double s, std::span<const double> z, double tol) const {
  const DirectionGrid& g = *f_->grid();
  for (std::size_t d = 0; d < g.size(); ++d) {
    const ExtReal& c = c_.at(i)[d];
    if (c.is_neg_inf()) continue;
    if (c.is_pos_inf()) return false;
    if (dot(g[d], z) < s + c.value() - tol) return false;
  }
  return true;
}

bool FmTable::reconstruct_contains(std::span<const double> x, std::span<const double> z, double tol) const {
  for (std::size_t i = 0; i < grid_.size(); ++i)
    if (!risk_contains(i, dot(grid_[i], x), z, tol)) return false;
  return true;
}

bool fm_reconstruct_contains(const SetValuedFn& f, const std::vector<Vec>& dual_grid,
                             std::span<const double> x, std::span<const double> z, double tol) {
  return FmTable(f, dual_grid).reconstruct_contains(x, z, tol);
}

std::vector<Vec> auto_dual_grid(const SetValuedFn& f, int count) {
  if (count < 1) throw std::invalid_argument("dual grid count must be positive");
  const int m = f.m();
  std::vector<Vec> out;
  auto push = [&](Vec v) {
    for (const Vec& u : out)
      if (norm(sub(u, v)) <= 1e-12) return;
    out.push_back(std::move(v));
  };
  if (m == 1) {
    for (int i = 0; i < count; ++i) push({count == 1 ? 1.0 : -1.0 + 2.0 * i / (count - 1)});
  } else if (m == 2) {
    for (int i = 0; i < count; ++i) {
      double t = 2.0 * std::numbers::pi * i / count;
      push({std::cos(t), std::sin(t)});
    }
  } else {
    // Fibonacci sphere.
    double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double y = count == 1 ? 0.0 : 1.0 - 2.0 * (i + 0.5) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - y * y));
      push({r * std::cos(golden * i), y, r * std::sin(golden * i)});
    }
  }
  for (const ScalarModel& g : f.g()) {
    if (const auto* ma = std::get_if<MaxAffine>(&g)) {
      for (const AffinePiece& pc : ma->pieces()) push(pc.slope);
    } else {
      for (double s : std::get<PiecewiseLinear1D>(g).slopes()) push({s});
    }
  }
  return out;
}

double frontier_bisect(const std::function<bool(double)>& member, double lo, double hi, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (member(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace setdual
