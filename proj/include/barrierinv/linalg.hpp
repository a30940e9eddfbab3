#pragma once

// Dense LU with partial pivoting; enough linear algebra for the separable
// Marchenko systems and the Fredholm discretisations used as test oracles.

#include <cmath>
#include <cstddef>
#include <vector>

#include "barrierinv/errors.hpp"

namespace barrierinv {

// Solves A x = b in place (A row-major n x n, overwritten by its LU factors;
// b overwritten by the solution).
inline void lu_solve_inplace(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  if (a.size() != n * n || b.size() != n)
    raise(errc::domain_error, "lu_solve_inplace: dimension mismatch");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (!(best > 0.0))
      raise(errc::singular_system, "lu_solve_inplace: numerically singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    const double inv_pivot = 1.0 / a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a[i * n + k] * inv_pivot;
      a[i * n + k] = l;
      if (l == 0.0) continue;
      const double* row_k = &a[k * n];
      double* row_i = &a[i * n];
      for (std::size_t j = k + 1; j < n; ++j) row_i[j] -= l * row_k[j];
      b[i] -= l * b[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    const double* row = &a[i * n];
    for (std::size_t j = i + 1; j < n; ++j) s -= row[j] * b[j];
    b[i] = s / row[i];
  }
}

}  // namespace barrierinv
