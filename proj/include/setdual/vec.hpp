#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace setdual {

using Vec = std::vector<double>;

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(got)) {}
};

inline void require_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionMismatch(expected, got);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(std::span<const double> a) {
  double n = norm(a);
  Vec out(a.begin(), a.end());
  if (n > 0)
    for (double& v : out) v /= n;
  return out;
}

inline Vec add(std::span<const double> a, std::span<const double> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec scaled(std::span<const double> a, double t) {
  Vec out(a.begin(), a.end());
  for (double& v : out) v *= t;
  return out;
}

// z + t * k
inline Vec axpy(std::span<const double> z, double t, std::span<const double> k) {
  Vec out(z.begin(), z.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * k[i];
  return out;
}

// Basis of {x : <r, x> = 0 for every row r}, by Gauss-Jordan with partial pivoting.
std::vector<Vec> nullspace(const std::vector<Vec>& rows, std::size_t dim, double tol = 1e-10);

std::size_t matrix_rank(const std::vector<Vec>& rows, std::size_t dim, double tol = 1e-10);

}  // namespace setdual
