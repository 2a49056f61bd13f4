#include "setdual/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace setdual {
namespace {

template <class S>
S pivot_eps();
template <>
double pivot_eps<double>() {
  return 1e-9;
}
template <>
Rational pivot_eps<Rational>() {
  return Rational(0);
}

template <class S>
S abs_of(const S& v) {
  return v < S(0) ? S(-v) : v;
}

template <class S>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), S(0)), basis_(rows, 0) {}

  S& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
  S& rhs(std::size_t i) { return at(i, n_); }
  S& obj(std::size_t j) { return at(m_, j); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    S p = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      S f = at(i, c);
      if (f == S(0)) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
    }
    basis_[r] = c;
  }

  // Bland's rule on columns [0, allowed). Returns false when unbounded.
  bool optimize(std::size_t allowed) {
    const S eps = pivot_eps<S>();
    for (int iter = 0; iter < 100000; ++iter) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j)
        if (obj(j) < -eps) {
          enter = j;
          break;
        }
      if (enter == allowed) return true;
      std::size_t leave = m_;
      S best{};
      for (std::size_t i = 0; i < m_; ++i) {
        if (!(at(i, enter) > eps)) continue;
        S ratio = rhs(i) / at(i, enter);
        bool tie = leave != m_ && !(ratio < best - eps) && !(best < ratio - eps);
        if (leave == m_ || ratio < best - eps || (tie && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

 private:
  std::size_t m_, n_;
  std::vector<S> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::ostream& operator<<(std::ostream& os, const ExtReal& v) {
  if (v.is_pos_inf()) return os << "+inf";
  if (v.is_neg_inf()) return os << "-inf";
  return os << v.value();
}

ExactPolyhedron to_exact(const Polyhedron& p) {
  ExactPolyhedron q(p.dim);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    std::vector<Rational> row;
    for (double v : p.a[i]) row.emplace_back(v);
    q.add_row(std::move(row), Rational(p.b[i]));
  }
  return q;
}

template <class S>
LpResult<S> solve_lp(const LinearProgram<S>& lp) {
  const S eps = pivot_eps<S>();
  const auto nv = static_cast<std::size_t>(lp.num_vars);
  std::vector<std::size_t> plus(nv), minus(nv, SIZE_MAX);
  std::size_t ns = 0;
  for (std::size_t j = 0; j < nv; ++j) {
    plus[j] = ns++;
    if (!lp.free.empty() && lp.free[j]) minus[j] = ns++;
  }

  struct NRow {
    std::vector<S> a;
    RowSense sense;
    S b;
  };
  std::vector<NRow> rows;
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : lp.rows) {
    require_dim(nv, r.a.size());
    NRow nr{std::vector<S>(ns, S(0)), r.sense, r.b};
    for (std::size_t j = 0; j < nv; ++j) {
      nr.a[plus[j]] = r.a[j];
      if (minus[j] != SIZE_MAX) nr.a[minus[j]] = -r.a[j];
    }
    if (nr.b < S(0)) {
      for (S& v : nr.a) v = -v;
      nr.b = -nr.b;
      if (nr.sense == RowSense::LessEq)
        nr.sense = RowSense::GreaterEq;
      else if (nr.sense == RowSense::GreaterEq)
        nr.sense = RowSense::LessEq;
    }
    if (nr.sense != RowSense::Equal) ++n_slack;
    if (nr.sense != RowSense::LessEq) ++n_art;
    rows.push_back(std::move(nr));
  }

  const std::size_t m = rows.size();
  const std::size_t art0 = ns + n_slack;
  Tableau<S> t(m, art0 + n_art);
  std::size_t slack = ns, art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < ns; ++j) t.at(i, j) = rows[i].a[j];
    t.rhs(i) = rows[i].b;
    switch (rows[i].sense) {
      case RowSense::LessEq:
        t.at(i, slack) = S(1);
        t.basis()[i] = slack++;
        break;
      case RowSense::GreaterEq:
        t.at(i, slack++) = S(-1);
        [[fallthrough]];
      case RowSense::Equal:
        t.at(i, art) = S(1);
        t.basis()[i] = art++;
        break;
    }
  }

  LpResult<S> res;
  if (n_art > 0) {
    for (std::size_t i = 0; i < m; ++i)
      if (t.basis()[i] >= art0)
        for (std::size_t j = 0; j <= t.cols(); ++j) t.obj(j) -= t.at(i, j);
    for (std::size_t j = art0; j < t.cols(); ++j) t.obj(j) += S(1);
    t.optimize(t.cols());
    if (t.obj(t.cols()) < -eps) return res;  // infeasible
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < art0) continue;
      for (std::size_t j = 0; j < art0; ++j)
        if (abs_of(t.at(i, j)) > eps) {
          t.pivot(i, j);
          break;
        }
    }
  }

  for (std::size_t j = 0; j <= t.cols(); ++j) t.obj(j) = S(0);
  for (std::size_t j = 0; j < nv; ++j) {
    t.obj(plus[j]) = -lp.objective[j];
    if (minus[j] != SIZE_MAX) t.obj(minus[j]) = lp.objective[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    S f = t.obj(t.basis()[i]);
    if (f == S(0)) continue;
    for (std::size_t j = 0; j <= t.cols(); ++j) t.obj(j) -= f * t.at(i, j);
  }
  if (!t.optimize(art0)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  std::vector<S> y(t.cols(), S(0));
  for (std::size_t i = 0; i < m; ++i) y[t.basis()[i]] = t.rhs(i);
  res.status = LpStatus::Optimal;
  res.value = t.obj(t.cols());
  res.x.assign(nv, S(0));
  for (std::size_t j = 0; j < nv; ++j) {
    res.x[j] = y[plus[j]];
    if (minus[j] != SIZE_MAX) res.x[j] -= y[minus[j]];
  }
  return res;
}

template <class S>
Extended<S> lp_support(const BasicPolyhedron<S>& p, std::span<const S> c) {
  require_dim(static_cast<std::size_t>(p.dim), c.size());
  LinearProgram<S> lp;
  lp.num_vars = p.dim;
  lp.free.assign(static_cast<std::size_t>(p.dim), true);
  lp.objective.assign(c.begin(), c.end());
  // Zero-normal rows are decided exactly; tiny negative sides would slip under the pivot tolerance.
  if (p.explicitly_empty()) return Extended<S>::neg_inf();
  for (std::size_t i = 0; i < p.rows(); ++i) {
    bool zero = std::all_of(p.a[i].begin(), p.a[i].end(), [](const S& v) { return v == S(0); });
    if (!zero) lp.rows.push_back({p.a[i], RowSense::LessEq, p.b[i]});
  }
  LpResult<S> r = solve_lp(lp);
  switch (r.status) {
    case LpStatus::Infeasible:
      return Extended<S>::neg_inf();
    case LpStatus::Unbounded:
      return Extended<S>::pos_inf();
    case LpStatus::Optimal:
      break;
  }
  return Extended<S>(r.value);
}

template LpResult<double> solve_lp(const LinearProgram<double>&);
template LpResult<Rational> solve_lp(const LinearProgram<Rational>&);
template ExtReal lp_support(const Polyhedron&, std::span<const double>);
template ExtRational lp_support(const ExactPolyhedron&, std::span<const Rational>);

bool lp_is_empty(const Polyhedron& p) {
  Vec zero(static_cast<std::size_t>(p.dim), 0.0);
  return lp_support(p, zero).is_neg_inf();
}

ExtReal VertexEnumeration::support(std::span<const double> c, double tol) const {
  if (points.empty()) return ExtReal::neg_inf();
  for (const Vec& r : rays)
    if (dot(c, r) > tol) return ExtReal::pos_inf();
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& p : points) best = std::max(best, dot(c, p));
  return ExtReal(best);
}

VertexEnumeration vertex_enum_2d(const Polyhedron& p, double tol) {
  if (p.dim != 2) throw std::invalid_argument("vertex_enum_2d requires dimension 2");
  VertexEnumeration out;
  if (p.explicitly_empty()) return out;

  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (norm(p.a[i]) > 0) live.push_back(i);

  auto feasible = [&](const Vec& x) {
    for (std::size_t i : live)
      if (dot(p.a[i], x) > p.b[i] + tol * (norm(p.a[i]) + std::abs(p.b[i]))) return false;
    return true;
  };
  auto add_point = [&](Vec x) {
    if (!feasible(x)) return;
    for (const Vec& q : out.points)
      if (norm(sub(q, x)) <= tol) return;
    out.points.push_back(std::move(x));
  };

  for (std::size_t u = 0; u < live.size(); ++u)
    for (std::size_t v = u + 1; v < live.size(); ++v) {
      const Vec& a = p.a[live[u]];
      const Vec& b = p.a[live[v]];
      double det = a[0] * b[1] - a[1] * b[0];
      if (std::abs(det) <= 1e-12 * norm(a) * norm(b)) continue;
      double r = p.b[live[u]], s = p.b[live[v]];
      add_point({(r * b[1] - s * a[1]) / det, (a[0] * s - b[0] * r) / det});
    }

  std::vector<Vec> normals;
  for (std::size_t i : live) normals.push_back(p.a[i]);
  if (matrix_rank(normals, 2) < 2) {
    // P contains a line (or is the plane): anchor on each boundary line.
    add_point({0.0, 0.0});
    for (std::size_t i : live) add_point(scaled(p.a[i], p.b[i] / dot(p.a[i], p.a[i])));
  }

  std::vector<Vec> cand = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (std::size_t i : live) {
    Vec a = normalized(p.a[i]);
    cand.push_back({-a[1], a[0]});
    cand.push_back({a[1], -a[0]});
    cand.push_back({-a[0], -a[1]});
  }
  for (const Vec& r : cand) {
    bool rec = std::all_of(live.begin(), live.end(),
                           [&](std::size_t i) { return dot(p.a[i], r) <= tol * norm(p.a[i]); });
    if (!rec) continue;
    bool dup = std::any_of(out.rays.begin(), out.rays.end(),
                           [&](const Vec& q) { return norm(sub(q, r)) <= 1e-12; });
    if (!dup) out.rays.push_back(r);
  }
  return out;
}

MaxAffine::MaxAffine(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("max-affine function needs at least one piece");
  dim_ = static_cast<int>(pieces_.front().slope.size());
  for (const AffinePiece& pc : pieces_) {
    require_dim(static_cast<std::size_t>(dim_), pc.slope.size());
    bool finite = std::isfinite(pc.intercept);
    for (double v : pc.slope) finite = finite && std::isfinite(v);
    if (!finite) throw std::invalid_argument("max-affine piece has a non-finite entry");
  }
}

double MaxAffine::operator()(std::span<const double> x) const {
  require_dim(static_cast<std::size_t>(dim_), x.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const AffinePiece& pc : pieces_) best = std::max(best, dot(pc.slope, x) + pc.intercept);
  return best;
}

ExtReal maxaffine_conjugate(const MaxAffine& g, std::span<const double> xstar) {
  require_dim(static_cast<std::size_t>(g.dim()), xstar.size());
  const std::size_t k = g.pieces().size();
  LinearProgram<double> lp;
  lp.num_vars = static_cast<int>(k);
  for (const AffinePiece& pc : g.pieces()) lp.objective.push_back(pc.intercept);
  for (std::size_t i = 0; i < xstar.size(); ++i) {
    std::vector<double> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = g.pieces()[j].slope[i];
    lp.rows.push_back({row, RowSense::Equal, xstar[i]});
  }
  lp.rows.push_back({std::vector<double>(k, 1.0), RowSense::Equal, 1.0});
  LpResult<double> r = solve_lp(lp);
  if (r.status != LpStatus::Optimal) return ExtReal::pos_inf();
  return ExtReal(-r.value);
}

}  // namespace setdual
