#include "setdual/setfun.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <limits>
#include <random>

namespace setdual {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Part of [a, b] where y0 + s (x − x0) <= c.
std::optional<std::pair<double, double>> piece_sublevel(double a, double b, double x0, double y0,
                                                        double s, double c) {
  double lo = a, hi = b;
  if (s == 0.0) {
    if (y0 > c) return std::nullopt;
  } else if (s > 0.0) {
    hi = std::min(b, x0 + (c - y0) / s);
  } else {
    lo = std::max(a, x0 + (c - y0) / s);
  }
  if (lo > hi) return std::nullopt;
  return std::pair{lo, hi};
}

void add_interval_rows(Polyhedron& p, const std::optional<std::pair<double, double>>& iv) {
  if (!iv) {
    p.add_row({0.0}, -1.0);
    return;
  }
  if (iv->second < kInf) p.add_row({1.0}, iv->second);
  if (iv->first > -kInf) p.add_row({-1.0}, -iv->first);
}

double set_scale(const SupportedUpperSet& a) {
  double s = 0.0;
  if (!a.is_empty())
    for (double v : a.phi())
      if (std::isfinite(v)) s = std::max(s, std::abs(v));
  return s;
}

// A ⩽ B up to a relative tolerance, retried on tightened supports.
bool leq_checked(const SupportedUpperSet& a, const SupportedUpperSet& b, double tol) {
  double t = tol * (1.0 + std::max(set_scale(a), set_scale(b)));
  if (ss_leq(a, b, t)) return true;
  return ss_leq(ss_tighten(a), ss_tighten(b), t);
}

Vec combine(const Vec& x, const Vec& y, double lambda) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = lambda * x[i] + (1.0 - lambda) * y[i];
  return out;
}

// Left side ⩽ right side of the property's defining inequality.
bool property_holds(Property p, const SupportedUpperSet& fx, const SupportedUpperSet& fy,
                    const SupportedUpperSet& fmid, double lambda, double tol) {
  switch (p) {
    case Property::Increasing:
      return leq_checked(fx, fy, tol);
    case Property::Quasiconvex:
      return leq_checked(fmid, ss_sup({fx, fy}), tol);
    case Property::Convex:
      return leq_checked(fmid, ss_minkowski(ss_scale(fx, lambda), ss_scale(fy, 1.0 - lambda)), tol);
    case Property::Quasiconcave:
      return leq_checked(ss_inf({fx, fy}), fmid, tol);
    case Property::Concave:
      return leq_checked(ss_minkowski(ss_scale(fx, lambda), ss_scale(fy, 1.0 - lambda)), fmid, tol);
  }
  return false;
}

std::string describe(const SupportedUpperSet& a) {
  if (a.is_empty()) return "empty";
  return fmt::format("phi=[{}]", fmt::join(a.phi(), ", "));
}

// A point of the set, pushed into it along the cone by a random amount.
std::optional<Vec> member_point(const SupportedUpperSet& a, const PolyCone& k, std::mt19937_64& rng) {
  if (a.is_empty()) return std::nullopt;
  Polyhedron p = ss_polyhedron(a);
  LinearProgram<double> lp;
  lp.num_vars = a.dim();
  lp.free.assign(static_cast<std::size_t>(a.dim()), true);
  lp.objective.assign(static_cast<std::size_t>(a.dim()), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i) lp.rows.push_back({p.a[i], RowSense::LessEq, p.b[i]});
  LpResult<double> r = solve_lp(lp);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Vec z = r.x;
  for (const Vec& g : k.generators()) z = axpy(z, u(rng), g);
  return z;
}

Vec sample_box(const std::vector<std::pair<double, double>>& box, std::mt19937_64& rng) {
  Vec x(box.size());
  for (std::size_t i = 0; i < box.size(); ++i)
    x[i] = std::uniform_real_distribution<double>(box[i].first, box[i].second)(rng);
  return x;
}

}  // namespace

PiecewiseLinear1D::PiecewiseLinear1D(std::vector<double> xs, std::vector<double> ys,
                                     double left_slope, double right_slope)
    : xs_(std::move(xs)), ys_(std::move(ys)), left_(left_slope), right_(right_slope) {
  if (xs_.empty() || xs_.size() != ys_.size())
    throw std::invalid_argument("piecewise-linear model needs matching, non-empty breakpoints");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i]))
      throw std::invalid_argument("non-finite breakpoint");
    if (i > 0 && !(xs_[i] > xs_[i - 1])) throw std::invalid_argument("breakpoints must increase");
  }
  if (!std::isfinite(left_) || !std::isfinite(right_)) throw std::invalid_argument("non-finite slope");
  bool rising = false;
  for (double s : slopes()) {
    if (s > 0) rising = true;
    if (s < 0 && rising) throw std::invalid_argument("piecewise-linear model is not quasiconvex");
  }
}

std::vector<double> PiecewiseLinear1D::slopes() const {
  std::vector<double> out{left_};
  for (std::size_t i = 1; i < xs_.size(); ++i) out.push_back((ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]));
  out.push_back(right_);
  return out;
}

double PiecewiseLinear1D::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front() + left_ * (x - xs_.front());
  if (x >= xs_.back()) return ys_.back() + right_ * (x - xs_.back());
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - xs_.begin());
  double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
  return ys_[j - 1] + t * (ys_[j] - ys_[j - 1]);
}

std::optional<std::pair<double, double>> PiecewiseLinear1D::sublevel(double c) const {
  std::vector<std::optional<std::pair<double, double>>> parts;
  parts.push_back(piece_sublevel(-kInf, xs_.front(), xs_.front(), ys_.front(), left_, c));
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    double s = (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]);
    parts.push_back(piece_sublevel(xs_[i - 1], xs_[i], xs_[i - 1], ys_[i - 1], s, c));
  }
  parts.push_back(piece_sublevel(xs_.back(), kInf, xs_.back(), ys_.back(), right_, c));
  std::optional<std::pair<double, double>> out;
  for (const auto& p : parts) {
    if (!p) continue;
    if (!out)
      out = p;
    else
      out = std::pair{std::min(out->first, p->first), std::max(out->second, p->second)};
  }
  return out;
}

std::optional<std::pair<double, double>> PiecewiseLinear1D::strict_sublevel(double c) const {
  // g is continuous, so {g < c} is open; its ends are where some piece crosses c.
  double lo = kInf, hi = -kInf;
  auto piece = [&](double a, double b, double x0, double y0, double s) {
    double plo = a, phi = b;
    if (s == 0.0) {
      if (!(y0 < c)) return;
    } else if (s > 0.0) {
      phi = std::min(b, x0 + (c - y0) / s);
    } else {
      plo = std::max(a, x0 + (c - y0) / s);
    }
    if (!(plo < phi)) return;
    lo = std::min(lo, plo);
    hi = std::max(hi, phi);
  };
  piece(-kInf, xs_.front(), xs_.front(), ys_.front(), left_);
  for (std::size_t i = 1; i < xs_.size(); ++i)
    piece(xs_[i - 1], xs_[i], xs_[i - 1], ys_[i - 1], (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]));
  piece(xs_.back(), kInf, xs_.back(), ys_.back(), right_);
  if (!(lo < hi)) return std::nullopt;
  return std::pair{lo, hi};
}

SetValuedFn::SetValuedFn(PolyCone k, GridPtr grid, int m, std::vector<ScalarModel> g)
    : k_(std::move(k)), grid_(std::move(grid)), m_(m), g_(std::move(g)) {
  if (!grid_) throw std::invalid_argument("null direction grid");
  if (k_.dim() != grid_->dim()) throw std::invalid_argument("cone and grid dimensions differ");
  if (m_ < 1 || m_ > 3) throw std::invalid_argument("argument dimension must be in [1, 3]");
  if (g_.size() != grid_->size()) throw std::invalid_argument("one scalar model per grid direction required");
  for (const ScalarModel& s : g_) {
    if (const auto* ma = std::get_if<MaxAffine>(&s)) {
      if (ma->dim() != m_) throw std::invalid_argument("max-affine model has the wrong argument dimension");
    } else {
      convex_ = false;
      if (m_ != 1) throw std::invalid_argument("piecewise-linear models are one-dimensional");
    }
  }
}

double SetValuedFn::g_at(std::size_t d, std::span<const double> x) const {
  require_dim(static_cast<std::size_t>(m_), x.size());
  return std::visit(
      [&](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, MaxAffine>)
          return s(x);
        else
          return s(x[0]);
      },
      g_.at(d));
}

SupportedUpperSet fn_eval(const SetValuedFn& f, std::span<const double> x) {
  std::vector<double> phi(f.g().size());
  for (std::size_t d = 0; d < phi.size(); ++d) phi[d] = f.g_at(d, x);
  return SupportedUpperSet(f.grid(), std::move(phi));
}

Polyhedron fn_level_set(const SetValuedFn& f, std::span<const double> z) {
  require_dim(static_cast<std::size_t>(f.n()), z.size());
  if (!f.convex_mode() && f.m() != 1) throw UnsupportedOperation("level set is not polyhedral");
  Polyhedron p(f.m());
  for (std::size_t d = 0; d < f.g().size(); ++d) {
    double c = dot((*f.grid())[d], z);
    if (const auto* ma = std::get_if<MaxAffine>(&f.g()[d])) {
      for (const AffinePiece& pc : ma->pieces()) p.add_row(pc.slope, c - pc.intercept);
    } else {
      add_interval_rows(p, std::get<PiecewiseLinear1D>(f.g()[d]).sublevel(c));
    }
  }
  return p;
}

bool polyhedron_contains(const Polyhedron& p, std::span<const double> x, double tol) {
  require_dim(static_cast<std::size_t>(p.dim), x.size());
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (dot(p.a[i], x) > p.b[i] + tol) return false;
  return true;
}

const char* property_name(Property p) {
  switch (p) {
    case Property::Increasing: return "increasing";
    case Property::Quasiconvex: return "quasiconvex";
    case Property::Convex: return "convex";
    case Property::Quasiconcave: return "quasiconcave";
    case Property::Concave: return "concave";
  }
  return "?";
}

Property parse_property(const std::string& name) {
  for (Property p : {Property::Increasing, Property::Quasiconvex, Property::Convex, Property::Quasiconcave,
                     Property::Concave})
    if (name == property_name(p)) return p;
  throw std::invalid_argument("unknown property: " + name);
}

CheckReport fn_check(const SetValuedFn& f, Property property, const Sampler& sampler) {
  require_dim(static_cast<std::size_t>(f.m()), sampler.box.size());
  if (sampler.lambdas.empty()) throw std::invalid_argument("no lambdas to sample");
  CheckReport rep;
  rep.property = property;
  std::mt19937_64 rng(sampler.seed);
  for (int i = 0; i < sampler.pairs; ++i) {
    Vec x = sample_box(sampler.box, rng), y = sample_box(sampler.box, rng);
    double lambda = sampler.lambdas[static_cast<std::size_t>(i) % sampler.lambdas.size()];
    if (property == Property::Increasing)
      for (std::size_t j = 0; j < x.size(); ++j)
        if (y[j] < x[j]) std::swap(x[j], y[j]);
    Vec mid = combine(x, y, lambda);
    SupportedUpperSet fx = fn_eval(f, x), fy = fn_eval(f, y), fm = fn_eval(f, mid);
    ++rep.checked;
    if (!property_holds(property, fx, fy, fm, lambda, sampler.tol)) {
      ++rep.violations;
      if (!rep.witness)
        rep.witness = CheckWitness{x, y, lambda,
                                   fmt::format("F(x) {} F(y) {} F(mid) {}", describe(fx), describe(fy), describe(fm))};
    }
    if (property != Property::Quasiconvex) continue;
    // Level-set form: x, y ∈ L(z) forces the combination into L(z).
    std::optional<Vec> z = member_point(ss_sup({fx, fy}), f.cone(), rng);
    if (!z) continue;
    ++rep.level_checked;
    if (!ss_contains(fm, *z, sampler.tol * (1.0 + norm(*z) + set_scale(fm)))) {
      ++rep.level_violations;
      if (!rep.witness)
        rep.witness = CheckWitness{x, y, lambda, fmt::format("level set at z=[{}] not convex", fmt::join(*z, ", "))};
    }
  }
  return rep;
}

CheckReport fn_check(const ScenarioFn& f, Property property, const Sampler& sampler) {
  CheckReport rep;
  rep.property = property;
  auto find = [&](const Vec& p) -> const SupportedUpperSet* {
    for (const auto& [x, v] : f.samples)
      if (x.size() == p.size() && norm(sub(x, p)) <= 1e-12) return &v;
    return nullptr;
  };
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    for (std::size_t j = 0; j < f.samples.size(); ++j) {
      if (i == j) continue;
      const auto& [x, fx] = f.samples[i];
      const auto& [y, fy] = f.samples[j];
      require_dim(static_cast<std::size_t>(f.m), x.size());
      if (property == Property::Increasing) {
        bool le = true;
        for (std::size_t c = 0; c < x.size(); ++c) le = le && x[c] <= y[c];
        if (!le) continue;
        ++rep.checked;
        if (!leq_checked(fx, fy, sampler.tol)) {
          ++rep.violations;
          if (!rep.witness) rep.witness = CheckWitness{x, y, 0.0, fmt::format("F(x) {} F(y) {}", describe(fx), describe(fy))};
        }
        continue;
      }
      for (double lambda : sampler.lambdas) {
        const SupportedUpperSet* fm = find(combine(x, y, lambda));
        if (!fm) continue;
        ++rep.checked;
        if (!property_holds(property, fx, fy, *fm, lambda, sampler.tol)) {
          ++rep.violations;
          if (!rep.witness)
            rep.witness = CheckWitness{x, y, lambda,
                                       fmt::format("F(x) {} F(y) {} F(mid) {}", describe(fx), describe(fy), describe(*fm))};
        }
      }
    }
  }
  return rep;
}

InverseReport fn_inverse_consistency(const SetValuedFn& f, const Sampler& sampler,
                                     std::vector<std::pair<double, double>> z_box) {
  require_dim(static_cast<std::size_t>(f.m()), sampler.box.size());
  if (z_box.empty()) z_box.assign(static_cast<std::size_t>(f.n()), {-5.0, 5.0});
  require_dim(static_cast<std::size_t>(f.n()), z_box.size());
  InverseReport rep;
  std::mt19937_64 rng(sampler.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto note = [&](std::string s) {
    if (!rep.witness) rep.witness = std::move(s);
  };
  for (int i = 0; i < sampler.pairs; ++i) {
    Vec x = sample_box(sampler.box, rng), z = sample_box(z_box, rng);
    Polyhedron level = fn_level_set(f, z);

    ++rep.graph_checked;
    bool in_level = polyhedron_contains(level, x);
    if (in_level != ss_contains(fn_eval(f, x), z)) {
      ++rep.graph_violations;
      note(fmt::format("graph flip fails at x=[{}] z=[{}]", fmt::join(x, ", "), fmt::join(z, ", ")));
    }

    Vec z2 = z;
    for (const Vec& g : f.cone().generators()) z2 = axpy(z2, 2.0 * u(rng), g);
    Polyhedron upper = fn_level_set(f, z2);
    ++rep.monotone_checked;
    if (!lp_is_empty(level)) {
      for (std::size_t r = 0; r < upper.rows(); ++r) {
        ExtReal s = lp_support(level, upper.a[r]);
        if (s.is_pos_inf() || (s.is_finite() && s.value() > upper.b[r] + sampler.tol * (1.0 + std::abs(upper.b[r])))) {
          ++rep.monotone_violations;
          note(fmt::format("level set at z=[{}] not inside the one at [{}]", fmt::join(z, ", "), fmt::join(z2, ", ")));
          break;
        }
      }
    }

    if (!in_level) continue;
    for (std::size_t c = 0; c < x.size(); ++c) {
      for (double t : {0.5, 5.0}) {
        Vec w = x;
        w[c] -= t;
        ++rep.cone_checked;
        if (!polyhedron_contains(level, w, sampler.tol)) {
          ++rep.cone_violations;
          note(fmt::format("level set at z=[{}] not stable under -e{} from x=[{}]", fmt::join(z, ", "), c,
                           fmt::join(x, ", ")));
        }
      }
    }
  }
  return rep;
}

}  // namespace setdual
