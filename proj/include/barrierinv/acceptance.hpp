#pragma once

// Built-in verification suite: ten end-to-end checks against independent
// oracles (closed forms, hand antiderivatives, and a Nystrom discretisation
// of the Marchenko equation that never touches the separable solver's path).
// Shared by the `verify` CLI command and the acceptance test binary; every
// tolerance is pinned here.

#include <cmath>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "barrierinv/constants.hpp"
#include "barrierinv/forward.hpp"
#include "barrierinv/inversion.hpp"
#include "barrierinv/linalg.hpp"
#include "barrierinv/marchenko.hpp"
#include "barrierinv/potentials.hpp"
#include "barrierinv/quadrature.hpp"
#include "barrierinv/tabulated.hpp"

namespace barrierinv {

struct criterion_result {
  int id = 0;
  std::string name;
  bool pass = false;
  double observed = 0.0;  // worst metric over the criterion
  double tolerance = 0.0;
  std::string detail;
};

namespace oracle {

// Fredholm oracle for the Marchenko equation, independent of the separable
// reduction: composite Gauss-Legendre Nystrom discretisation of
//   K(x,z) + F(x+z) + int_x^{x+len} K(x,y) F(y+z) dy = 0
// with K(x,x) recovered through the Nystrom interpolation formula.
inline double nystrom_k_diag(const discrete_spectrum& spec, double x, int panels, int order,
                             double len = 40.0) {
  spec.validate();
  if (spec.levels.empty()) return 0.0;
  const auto rule = detail::make_gauss_legendre(order);
  const std::size_t n = static_cast<std::size_t>(panels) * static_cast<std::size_t>(order);
  std::vector<double> z(n), w(n);
  const double h = len / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = x + p * h;
    for (int q = 0; q < order; ++q) {
      const std::size_t idx = static_cast<std::size_t>(p) * order + static_cast<std::size_t>(q);
      z[idx] = a + 0.5 * h * (1.0 + rule.nodes[static_cast<std::size_t>(q)]);
      w[idx] = 0.5 * h * rule.weights[static_cast<std::size_t>(q)];
    }
  }
  std::vector<double> mat(n * n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      mat[i * n + j] = (i == j ? 1.0 : 0.0) + w[j] * auxiliary_f(spec, z[i] + z[j]);
    rhs[i] = -auxiliary_f(spec, x + z[i]);
  }
  lu_solve_inplace(mat, rhs, n);
  double k_xx = -auxiliary_f(spec, 2.0 * x);
  for (std::size_t j = 0; j < n; ++j) k_xx -= w[j] * rhs[j] * auxiliary_f(spec, z[j] + x);
  return k_xx;
}

// U(x) from the Nystrom K(x,x) with a wide five-point stencil.
inline double nystrom_potential(const discrete_spectrum& spec, double x, int panels, int order,
                                double h_fd) {
  const double d = (-nystrom_k_diag(spec, x + 2 * h_fd, panels, order) +
                    8.0 * nystrom_k_diag(spec, x + h_fd, panels, order) -
                    8.0 * nystrom_k_diag(spec, x - h_fd, panels, order) +
                    nystrom_k_diag(spec, x - 2 * h_fd, panels, order)) /
                   (12.0 * h_fd);
  return -2.0 * d;
}

inline double poly_eval(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
  return v;
}

inline double poly_antiderivative_eval(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i] / (i + 1.0);
  return v * x;
}

}  // namespace oracle

namespace detail_acceptance {

struct metric {
  double worst = 0.0;
  void update(double v) {
    if (v > worst) worst = v;
  }
};

inline criterion_result make_result(int id, std::string name, double observed, double tol,
                                    std::string detail = "") {
  criterion_result r;
  r.id = id;
  r.name = std::move(name);
  r.observed = observed;
  r.tolerance = tol;
  r.pass = observed <= tol;
  r.detail = std::move(detail);
  return r;
}

}  // namespace detail_acceptance

// A01: the composed Abel kernel integrates to pi for every interval, and the
// square-root ratio integral to (beta-alpha)*pi/2.
inline criterion_result acceptance_kernel_identities() {
  std::mt19937 rng(20240811u);
  std::uniform_real_distribution<double> lo_dist(-10.0, 9.0);
  std::uniform_real_distribution<double> width_dist(0.02, 10.0);
  detail_acceptance::metric m;
  for (int i = 0; i < 100; ++i) {
    const double alpha = lo_dist(rng);
    const double beta = alpha + width_dist(rng);
    const auto q1 =
        integrate_sqrt_singular([](double) { return 1.0; }, alpha, beta, singular_end::both, 1e-12);
    m.update(std::abs(q1.value - std::numbers::pi));
    const auto q2 = integrate_sqrt_singular([beta](double e) { return beta - e; }, alpha, beta,
                                            singular_end::both, 1e-12);
    m.update(std::abs(q2.value - sqrt_ratio_integral(alpha, beta)));
  }
  return detail_acceptance::make_result(1, "Abel kernel identities (pi and ratio integrals)",
                                        m.worst, 1e-10);
}

// A02: cold-emission transmission against its closed form.
inline criterion_result acceptance_cold_emission_forward() {
  const auto barrier = potential_spec::cold(1.0, 1.0);
  const double a = 4.0 * std::sqrt(2.0) / 3.0;
  const auto grid = linspace(0.05, 0.95, 100);
  const auto curve = sample_curve(barrier, curve_kind::gamow_transmission, grid);
  detail_acceptance::metric m;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = std::exp(-a * std::pow(1.0 - grid[i], 1.5));
    m.update(std::abs(curve.data.values[i] - exact));
  }
  return detail_acceptance::make_result(2, "cold-emission transmission vs closed form", m.worst,
                                        1e-8);
}

// A03: inverting the cold-emission curve returns width(U) = U0 - U.
inline criterion_result acceptance_cold_emission_inversion() {
  const auto barrier = potential_spec::cold(1.0, 1.0);
  const auto grid = linspace(0.05, 0.95, 100);
  const auto curve = sample_curve(barrier, curve_kind::gamow_transmission, grid);
  const auto u_grid = linspace(0.05, 0.95, 100);
  const auto wf = invert_gamow(curve, u_grid);
  detail_acceptance::metric m;
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double exact = 1.0 - u_grid[i];
    m.update(std::abs(wf.width[i] - exact) / exact);
  }
  return detail_acceptance::make_result(3, "cold-emission width inversion (relative)", m.worst,
                                        1e-6);
}

// A04: parabolic-barrier round trip against the closed-form exponent and the
// turning-point width.
inline criterion_result acceptance_parabolic_roundtrip() {
  const auto barrier = potential_spec::parabolic(1.0, 1.0);
  const auto grid = linspace(0.05, 0.95, 100);
  const auto curve = sample_curve(barrier, curve_kind::gamow_transmission, grid);
  detail_acceptance::metric fwd;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = std::exp(-2.0 * std::numbers::pi * (1.0 - grid[i]));
    fwd.update(std::abs(curve.data.values[i] - exact));
  }
  const auto u_grid = linspace(0.05, 0.95, 100);
  const auto wf = invert_gamow(curve, u_grid);
  detail_acceptance::metric inv;
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double exact = 2.0 * std::sqrt(2.0 * (1.0 - u_grid[i]));
    inv.update(std::abs(wf.width[i] - exact) / exact);
  }
  const bool pass = fwd.worst <= 1e-8 && inv.worst <= 1e-6;
  criterion_result r = detail_acceptance::make_result(
      4, "parabolic-barrier round trip", std::max(fwd.worst / 1e-8, inv.worst / 1e-6) , 1.0);
  r.pass = pass;
  std::ostringstream det;
  det << "forward " << fwd.worst << " (tol 1e-8), inversion " << inv.worst << " (tol 1e-6)";
  r.detail = det.str();
  return r;
}

// A05: three splits of one width function give the same transmission but
// visibly different potentials.
inline criterion_result acceptance_family_non_uniqueness() {
  const auto barrier = potential_spec::cold(1.0, 1.0);
  const auto e_grid = linspace(0.02, 0.98, 240);
  const auto curve = sample_curve(barrier, curve_kind::gamow_transmission, e_grid);
  const auto u_grid = linspace(0.02, 0.98, 240);
  const auto wf = invert_gamow(curve, u_grid);
  const monotone_cubic width_interp(wf.u_grid, wf.width);

  const std::vector<std::function<double(double)>> splits = {
      [](double) { return 0.0; },
      [&width_interp](double u) { return -0.5 * width_interp.value(u); },
      [&width_interp](double u) { return -0.3 * width_interp.value(u); },
  };
  std::vector<potential_spec> members;
  for (const auto& s : splits) members.push_back(family_member(wf, s, 1.0));

  const auto compare_grid = linspace(0.1, 0.9, 33);
  std::vector<std::vector<double>> t_curves;
  for (const auto& mem : members)
    t_curves.push_back(
        sample_curve(mem, curve_kind::gamow_transmission, compare_grid).data.values);

  detail_acceptance::metric t_gap;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      for (std::size_t i = 0; i < compare_grid.size(); ++i)
        t_gap.update(std::abs(t_curves[a][i] - t_curves[b][i]));

  // sup-norm separation of the potentials over the shared domain
  double min_sep = 1e300;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const auto sa = members[a].support();
      const auto sb = members[b].support();
      const double lo = std::max(sa.first, sb.first);
      const double hi = std::min(sa.second, sb.second);
      double sep = 0.0;
      for (const double x : linspace(lo + 1e-9, hi - 1e-9, 101))
        sep = std::max(sep, std::abs(members[a].evaluate(x) - members[b].evaluate(x)));
      min_sep = std::min(min_sep, sep);
    }

  criterion_result r;
  r.id = 5;
  r.name = "family non-uniqueness (same T, different U)";
  r.observed = t_gap.worst;
  r.tolerance = 1e-8;
  r.pass = t_gap.worst <= 1e-8 && min_sep >= 0.1;
  std::ostringstream det;
  det << "max pairwise |dT| = " << t_gap.worst << ", min sup-norm separation = " << min_sep
      << " (needs >= 0.1)";
  r.detail = det.str();
  return r;
}

// A06: classical wells -- constant period inverts to the harmonic well, and
// the linear well survives a full forward/inverse round trip.
inline criterion_result acceptance_classical_wells() {
  // even inversion of T == 2 pi
  auto e_grid = linspace(1e-9, 2.0, 201);
  scattering_curve flat;
  flat.kind = curve_kind::classical_period;
  flat.data = tabulated_function(e_grid, std::vector<double>(e_grid.size(), 2.0 * std::numbers::pi));
  const auto u_grid = linspace(0.01, 1.98, 150);
  const auto x_even = invert_well_period_even(flat, u_grid);
  detail_acceptance::metric harmonic_err;
  for (std::size_t i = 0; i < u_grid.size(); ++i)
    harmonic_err.update(std::abs(0.5 * x_even.values[i] * x_even.values[i] - u_grid[i]));

  // linear-well round trip: U = |x| has period 4 sqrt(2E), even solution x(U) = U
  const auto well = potential_spec::linear(1.0);
  const auto curve = sample_curve(well, curve_kind::classical_period, linspace(1e-9, 2.0, 240));
  const auto u_grid2 = linspace(0.01, 1.95, 130);
  const auto x_lin = invert_well_period_even(curve, u_grid2);
  detail_acceptance::metric linear_err;
  for (std::size_t i = 0; i < u_grid2.size(); ++i)
    linear_err.update(std::abs(x_lin.values[i] - u_grid2[i]));

  criterion_result r;
  r.id = 6;
  r.name = "classical well inversions (harmonic, linear)";
  r.observed = std::max(harmonic_err.worst / 1e-7, linear_err.worst / 1e-6);
  r.tolerance = 1.0;
  r.pass = harmonic_err.worst <= 1e-7 && linear_err.worst <= 1e-6;
  std::ostringstream det;
  det << "harmonic " << harmonic_err.worst << " (tol 1e-7), linear " << linear_err.worst
      << " (tol 1e-6)";
  r.detail = det.str();
  return r;
}

// A07: canonical-barrier reconstruction from backward times on a linear ramp.
inline criterion_result acceptance_canonical_barrier() {
  const auto ramp = potential_spec::tabulated(tabulated_function({0.0, 1.0}, {0.0, 1.0}),
                                              shape_kind::barrier);
  const auto curve = sample_curve(ramp, curve_kind::backward_time, linspace(1e-9, 1.0, 200));
  const auto u_grid = linspace(0.005, 0.995, 199);
  const auto x_of_u = invert_barrier_backward(curve, u_grid);
  detail_acceptance::metric m;
  for (std::size_t i = 0; i < u_grid.size(); ++i)
    m.update(std::abs(x_of_u.values[i] - u_grid[i]));
  return detail_acceptance::make_result(7, "canonical barrier from backward times", m.worst, 1e-6);
}

// A08: the modified Abel solver undoes the forward kernel on random smooth
// right-hand sides.
inline criterion_result acceptance_modified_abel() {
  std::mt19937 rng(77001u);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const double a = 1.5;
  const auto e_grid = linspace(0.0, a, 401);
  const auto u_grid = linspace(0.05, 1.35, 53);
  detail_acceptance::metric m;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> phi(5);
    for (auto& c : phi) c = coeff(rng);
    std::vector<double> f_vals(e_grid.size());
    for (std::size_t i = 0; i < e_grid.size(); ++i) {
      if (a - e_grid[i] <= 1e-15) {
        f_vals[i] = 0.0;
        continue;
      }
      f_vals[i] = integrate_sqrt_singular([&phi](double u) { return oracle::poly_eval(phi, u); },
                                          e_grid[i], a, singular_end::lower, 1e-13)
                      .value;
    }
    abel_problem prob{tabulated_function(e_grid, std::move(f_vals)), a,
                      abel_orientation::modified};
    const auto rec = modified_abel_solve(prob, u_grid);
    for (std::size_t i = 0; i < u_grid.size(); ++i)
      m.update(std::abs(rec.values[i] - oracle::poly_eval(phi, u_grid[i])));
  }
  return detail_acceptance::make_result(8, "modified Abel solve on random polynomials", m.worst,
                                        1e-5);
}

// A09: Marchenko reconstruction -- one level against the sech^2 closed form,
// two levels against the Nystrom Fredholm oracle.
inline criterion_result acceptance_marchenko() {
  const discrete_spectrum one{{{1.0, std::sqrt(2.0)}}};
  const auto grid = linspace(-8.0, 8.0, 401);
  const auto rec = reconstruct_potential(one, grid);
  detail_acceptance::metric soliton;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double sech = 1.0 / std::cosh(grid[i]);
    soliton.update(std::abs(rec.u_values[i] + 2.0 * sech * sech));
  }

  const discrete_spectrum two{{{2.0, 1.0}, {1.0, 1.0}}};
  detail_acceptance::metric fredholm;
  const std::vector<double> probes = {-0.5, 0.3, 1.1};
  const auto rec2 = reconstruct_potential(two, probes);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double oracle_u = oracle::nystrom_potential(two, probes[i], 100, 8, 0.02);
    fredholm.update(std::abs(rec2.u_values[i] - oracle_u));
  }

  criterion_result r;
  r.id = 9;
  r.name = "Marchenko reconstruction (soliton, Fredholm oracle)";
  r.observed = std::max(soliton.worst / 1e-6, fredholm.worst / 1e-5);
  r.tolerance = 1.0;
  r.pass = soliton.worst <= 1e-6 && fredholm.worst <= 1e-5;
  std::ostringstream det;
  det << "one-level " << soliton.worst << " (tol 1e-6), two-level vs Nystrom " << fredholm.worst
      << " (tol 1e-5)";
  r.detail = det.str();
  return r;
}

// A10: swapping the integration order over the triangular domain leaves the
// composed kernel integral unchanged.
inline criterion_result acceptance_fubini() {
  std::mt19937 rng(424243u);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const double alpha = 0.2, top = 1.7;
  detail_acceptance::metric m;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> psi(4);
    for (auto& c : psi) c = coeff(rng);
    auto inner = [&](double e) {
      if (top - e <= 1e-15) return 0.0;
      return integrate_sqrt_singular([&psi](double u) { return oracle::poly_eval(psi, u); }, e,
                                     top, singular_end::lower, 1e-13)
          .value;
    };
    const double lhs =
        integrate_sqrt_singular(inner, alpha, top, singular_end::lower, 1e-11).value;
    const double rhs = std::numbers::pi * (oracle::poly_antiderivative_eval(psi, top) -
                                           oracle::poly_antiderivative_eval(psi, alpha));
    m.update(std::abs(lhs - rhs));
  }
  return detail_acceptance::make_result(10, "integration-order swap on the triangular domain",
                                        m.worst, 1e-9);
}

inline std::vector<criterion_result> run_acceptance() {
  return {
      acceptance_kernel_identities(),  acceptance_cold_emission_forward(),
      acceptance_cold_emission_inversion(), acceptance_parabolic_roundtrip(),
      acceptance_family_non_uniqueness(),   acceptance_classical_wells(),
      acceptance_canonical_barrier(),       acceptance_modified_abel(),
      acceptance_marchenko(),               acceptance_fubini(),
  };
}

// One line per criterion; returns the number of failures.
inline int print_acceptance_report(std::ostream& os) {
  int failures = 0;
  for (const auto& r : run_acceptance()) {
    os << (r.pass ? "[PASS]" : "[FAIL]") << " A" << std::setw(2) << std::setfill('0') << r.id
       << std::setfill(' ') << " " << r.name;
    if (r.detail.empty())
      os << ": worst " << r.observed << " (tol " << r.tolerance << ")";
    else
      os << ": " << r.detail;
    os << "\n";
    if (!r.pass) ++failures;
  }
  return failures;
}

}  // namespace barrierinv
