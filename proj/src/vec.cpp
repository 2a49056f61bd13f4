#include "setdual/vec.hpp"

#include <algorithm>
#include <utility>

namespace setdual {
namespace {

// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<std::size_t> rref(std::vector<Vec>& m, std::size_t dim, double tol) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < dim && row < m.size(); ++col) {
    std::size_t best = row;
    for (std::size_t r = row + 1; r < m.size(); ++r)
      if (std::abs(m[r][col]) > std::abs(m[best][col])) best = r;
    if (std::abs(m[best][col]) <= tol) continue;
    std::swap(m[row], m[best]);
    double p = m[row][col];
    for (double& v : m[row]) v /= p;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0.0) continue;
      double f = m[r][col];
      for (std::size_t c = 0; c < dim; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<Vec> scaled_rows(const std::vector<Vec>& rows) {
  std::vector<Vec> m;
  m.reserve(rows.size());
  for (const Vec& r : rows) {
    double n = norm(r);
    if (n > 0) m.push_back(scaled(r, 1.0 / n));
  }
  return m;
}

}  // namespace

std::vector<Vec> nullspace(const std::vector<Vec>& rows, std::size_t dim, double tol) {
  std::vector<Vec> m = scaled_rows(rows);
  std::vector<std::size_t> piv = rref(m, dim, tol);
  std::vector<bool> is_pivot(dim, false);
  for (std::size_t c : piv) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < dim; ++free) {
    if (is_pivot[free]) continue;
    Vec v(dim, 0.0);
    v[free] = 1.0;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][free];
    basis.push_back(normalized(v));
  }
  return basis;
}

std::size_t matrix_rank(const std::vector<Vec>& rows, std::size_t dim, double tol) {
  std::vector<Vec> m = scaled_rows(rows);
  return rref(m, dim, tol).size();
}

}  // namespace setdual
