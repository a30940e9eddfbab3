#pragma once

// Inverse-scattering reconstruction for the reflectionless (discrete
// spectrum only) case:
//
//   F(X) = sum_n c_n^2 exp(-kappa_n X)
//   K(x,z) + F(x+z) + int_x^inf K(x,y) F(y+z) dy = 0
//   U(x)  = -2 d/dx K(x,x)
//
// With F separable the ansatz K(x,z) = sum_n w_n(x) exp(-kappa_n z) reduces
// the integral equation to the N x N system
//   w_m + c_m^2 sum_n exp(-(kappa_m+kappa_n) x)/(kappa_m+kappa_n) w_n
//       = -c_m^2 exp(-kappa_m x),
// solved by direct elimination.  K(x,x) agrees with the column-scaled form
// of the same system; the diagonal is what the reconstruction uses.
//
// The reconstruction works for the normalized wave operator -d2/dx2 + U with
// bound-state energies E_n = -hbar^2 kappa_n^2 / (2m); that relation is the
// only place the physical constants enter.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "barrierinv/constants.hpp"
#include "barrierinv/errors.hpp"
#include "barrierinv/linalg.hpp"

namespace barrierinv {

struct bound_state {
  double kappa = 0.0;  // decay constant, > 0
  double c = 0.0;      // norming coefficient, > 0
};

struct discrete_spectrum {
  std::vector<bound_state> levels;  // kappa strictly descending

  void validate() const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (!(levels[i].kappa > 0.0) || !(levels[i].c > 0.0))
        raise(errc::domain_error, "discrete_spectrum: kappa and c must be strictly positive");
      if (i > 0 && !(levels[i].kappa < levels[i - 1].kappa))
        raise(errc::domain_error,
              "discrete_spectrum: kappas must be distinct and sorted descending");
    }
  }
};

inline double bound_state_energy(const bound_state& level, const physical_constants& consts = {}) {
  consts.validate();
  return -consts.hbar * consts.hbar * level.kappa * level.kappa / (2.0 * consts.mass);
}

// Kernel of the Marchenko equation; the continuous-spectrum term vanishes
// identically for reflectionless data.
inline double auxiliary_f(const discrete_spectrum& spec, double big_x) {
  spec.validate();
  double s = 0.0;
  for (const auto& lv : spec.levels) s += lv.c * lv.c * std::exp(-lv.kappa * big_x);
  return s;
}

// K(x, x) from the separable-kernel reduction.
inline double solve_marchenko(const discrete_spectrum& spec, double x) {
  spec.validate();
  const std::size_t n = spec.levels.size();
  if (n == 0) return 0.0;

  const double kappa_max = spec.levels.front().kappa;
  if (2.0 * kappa_max * x < -700.0)
    raise(errc::domain_error,
          "solve_marchenko: x=" + std::to_string(x) + " is too far left; kernel overflows");

  std::vector<double> a(n * n), rhs(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double km = spec.levels[m].kappa;
    const double cm2 = spec.levels[m].c * spec.levels[m].c;
    for (std::size_t j = 0; j < n; ++j) {
      const double kj = spec.levels[j].kappa;
      a[m * n + j] = cm2 * std::exp(-(km + kj) * x) / (km + kj);
      if (m == j) a[m * n + j] += 1.0;
    }
    rhs[m] = -cm2 * std::exp(-km * x);
  }
  lu_solve_inplace(a, rhs, n);

  double k_diag = 0.0;
  for (std::size_t j = 0; j < n; ++j) k_diag += rhs[j] * std::exp(-spec.levels[j].kappa * x);
  return k_diag;
}

struct reconstruction_grid {
  std::vector<double> x_grid;
  std::vector<double> u_values;
};

// U(x) = -2 d/dx K(x,x).  One level has the closed form
// -2 kappa^2 sech^2(kappa (x - x0)) with x0 = ln(c^2/(2 kappa)) / (2 kappa);
// larger systems differentiate K(x,x) with a five-point stencil.
inline reconstruction_grid reconstruct_potential(const discrete_spectrum& spec,
                                                 const std::vector<double>& grid) {
  spec.validate();
  if (grid.empty()) raise(errc::invalid_grid, "reconstruct_potential: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      raise(errc::invalid_grid, "reconstruct_potential: grid must be strictly increasing");

  reconstruction_grid out;
  out.x_grid = grid;
  out.u_values.assign(grid.size(), 0.0);
  const std::size_t n = spec.levels.size();
  if (n == 0) return out;

  if (n == 1) {
    const double kappa = spec.levels[0].kappa;
    const double c2 = spec.levels[0].c * spec.levels[0].c;
    const double x0 = std::log(c2 / (2.0 * kappa)) / (2.0 * kappa);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double sech = 1.0 / std::cosh(kappa * (grid[i] - x0));
      out.u_values[i] = -2.0 * kappa * kappa * sech * sech;
    }
    return out;
  }

  const double kappa_max = spec.levels.front().kappa;
  const double h = 1e-4 * std::max(1.0, 1.0 / kappa_max);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double d = (-solve_marchenko(spec, x + 2 * h) + 8.0 * solve_marchenko(spec, x + h) -
                      8.0 * solve_marchenko(spec, x - h) + solve_marchenko(spec, x - 2 * h)) /
                     (12.0 * h);
    out.u_values[i] = -2.0 * d;
  }
  return out;
}

}  // namespace barrierinv
