#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "setdual/vec.hpp"

namespace setdual {

using Rational = boost::multiprecision::cpp_rational;

// Value in S ∪ {−∞, +∞}. −∞ is the support of the empty set, +∞ an unbounded LP.
template <class S>
class Extended {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  Extended() = default;
  Extended(S v) : kind_(Kind::Finite), value_(std::move(v)) {}  // NOLINT: implicit by design
  static Extended pos_inf() { return Extended(Kind::PosInf); }
  static Extended neg_inf() { return Extended(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  // Throws std::logic_error on an infinite value.
  const S& value() const {
    if (!is_finite()) throw std::logic_error("value() on an infinite extended real");
    return value_;
  }

  Extended operator-() const {
    if (is_pos_inf()) return neg_inf();
    if (is_neg_inf()) return pos_inf();
    return Extended(-value_);
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    return a.kind_ == b.kind_ && (!a.is_finite() || a.value_ == b.value_);
  }
  friend std::partial_ordering operator<=>(const Extended& a, const Extended& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (!a.is_finite()) return std::partial_ordering::equivalent;
    if (a.value_ < b.value_) return std::partial_ordering::less;
    if (b.value_ < a.value_) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }

 private:
  explicit Extended(Kind k) : kind_(k) {}
  Kind kind_ = Kind::NegInf;
  S value_{};
};

using ExtReal = Extended<double>;
using ExtRational = Extended<Rational>;

// +inf when either side is +inf and neither is -inf; -inf absorbs.
template <class S>
Extended<S> ext_add(const Extended<S>& a, const Extended<S>& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return Extended<S>::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return Extended<S>::pos_inf();
  return Extended<S>(a.value() + b.value());
}

template <class S>
Extended<S> ext_scale(const S& lambda, const Extended<S>& a) {
  if (!a.is_finite()) return a;
  return Extended<S>(lambda * a.value());
}

inline double to_double(const ExtReal& v) {
  if (v.is_pos_inf()) return std::numeric_limits<double>::infinity();
  if (v.is_neg_inf()) return -std::numeric_limits<double>::infinity();
  return v.value();
}

inline ExtReal from_double(double v) {
  if (v == std::numeric_limits<double>::infinity()) return ExtReal::pos_inf();
  if (v == -std::numeric_limits<double>::infinity()) return ExtReal::neg_inf();
  return ExtReal(v);
}

std::ostream& operator<<(std::ostream& os, const ExtReal& v);

// {x : <a_i, x> <= b_i for every row i}.
template <class S>
struct BasicPolyhedron {
  int dim = 0;
  std::vector<std::vector<S>> a;
  std::vector<S> b;

  BasicPolyhedron() = default;
  explicit BasicPolyhedron(int d) : dim(d) {}
  void add_row(std::vector<S> row, S rhs) {
    require_dim(static_cast<std::size_t>(dim), row.size());
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
  }
  std::size_t rows() const { return a.size(); }
  // A zero-normal row with negative right-hand side.
  bool explicitly_empty() const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      bool zero = true;
      for (const S& v : a[i]) zero = zero && v == S(0);
      if (zero && b[i] < S(0)) return true;
    }
    return false;
  }
};

using Polyhedron = BasicPolyhedron<double>;
using ExactPolyhedron = BasicPolyhedron<Rational>;

ExactPolyhedron to_exact(const Polyhedron& p);

enum class RowSense { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// maximize <objective, y> subject to rows; y_j >= 0 unless free[j].
template <class S>
struct LinearProgram {
  int num_vars = 0;
  std::vector<bool> free;
  std::vector<S> objective;
  struct Row {
    std::vector<S> a;
    RowSense sense;
    S b;
  };
  std::vector<Row> rows;
};

template <class S>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  S value{};
  std::vector<S> x;
};

// Two-phase dense tableau simplex, Bland's rule. Pivot tolerance 1e-9 for
// double, exact for Rational.
template <class S>
LpResult<S> solve_lp(const LinearProgram<S>& lp);

// sup over P of <c, x>: −∞ iff P is empty, +∞ iff unbounded along c.
template <class S>
Extended<S> lp_support(const BasicPolyhedron<S>& p, std::span<const S> c);

inline ExtReal lp_support(const Polyhedron& p, std::span<const double> c) {
  return lp_support<double>(p, c);
}

bool lp_is_empty(const Polyhedron& p);

struct VertexEnumeration {
  std::vector<Vec> points;  // vertices, or boundary anchors when P contains a line
  std::vector<Vec> rays;    // unit generators of the recession cone
  ExtReal support(std::span<const double> c, double tol = 1e-9) const;
};

// Independent 2D oracle: pairwise row intersections plus recession rays.
VertexEnumeration vertex_enum_2d(const Polyhedron& p, double tol = 1e-9);

struct AffinePiece {
  Vec slope;
  double intercept = 0.0;
};

// g(x) = max_j <a_j, x> + b_j.
class MaxAffine {
 public:
  explicit MaxAffine(std::vector<AffinePiece> pieces);
  int dim() const { return dim_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  double operator()(std::span<const double> x) const;

 private:
  int dim_ = 0;
  std::vector<AffinePiece> pieces_;
};

// g*(x*) = sup_x <x*, x> - g(x), via min Σλ_j(−b_j) s.t. Σλ_j a_j = x*, Σλ_j = 1, λ >= 0.
ExtReal maxaffine_conjugate(const MaxAffine& g, std::span<const double> xstar);

}  // namespace setdual
