#pragma once

// Abel-type inversions of the forward scattering data.
//
//   modified Abel equation:  int_E^a phi(U) / sqrt(U - E) dU = f(E)
//     solved by  phi(U) = -(1/pi) d/dU int_U^a f(E) / sqrt(E - U) dE.
//
//   transmission:  width(U) = x2(U) - x1(U)
//     = (hbar / (pi sqrt(2m))) int_U^{U0} d(ln T)/dE / sqrt(E - U) dE,
//   well period:   x2(U) - x1(U) = (1/(pi sqrt(2m))) int_0^U T(E)/sqrt(U-E) dE
//     (even wells carry an extra factor 1/2),
//   backward time: x(U) = (1/pi) sqrt(2/m) int_0^U R(E)/sqrt(U-E) dE
//     (the canonical, monotone representative of the solution family).
//
// Tabulated data are interpolated with a not-a-knot spline over a square-root
// abscissa (tau = sqrt(U0 - E) for transmission, sigma = sqrt(E) otherwise).
// In those variables the analytic reference families are low-degree
// polynomials, so the spline adds no interpolation bias, and the remaining
// kernel singularity is removed exactly by the same substitution used in the
// quadrature module.  d(ln T)/dE is formed from ln T directly; dividing dT/dE
// by an exponentially small T would be catastrophically ill-conditioned.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "barrierinv/constants.hpp"
#include "barrierinv/errors.hpp"
#include "barrierinv/forward.hpp"
#include "barrierinv/potentials.hpp"
#include "barrierinv/quadrature.hpp"
#include "barrierinv/tabulated.hpp"

namespace barrierinv {

enum class abel_orientation { standard, modified };

// Right-hand side f tabulated over E, with the constant limit `a` of the
// modified kernel int_E^a.  Standard orientation integrates int_0^E.
struct abel_problem {
  tabulated_function f;
  double upper_limit = 0.0;
  abel_orientation orientation = abel_orientation::modified;
};

// x2(U) - x1(U) on a U grid: the invariant content shared by every barrier
// with the same transmission curve.
struct width_function {
  std::vector<double> u_grid;
  std::vector<double> width;

  void validate() const {
    tabulated_function{u_grid, width};  // grid structure
    for (double w : width)
      if (!(w >= 0.0)) raise(errc::domain_error, "width_function: negative width");
  }
};

namespace detail {

inline constexpr double inversion_tol = 1e-12;

// Spline of the data over s = sqrt(shift - E) (descending tau branch) or
// s = sqrt(E - shift); `reflect` selects the former.
inline cubic_spline sqrt_abscissa_spline(const std::vector<double>& e, std::vector<double> v,
                                         double shift, bool reflect) {
  std::vector<double> s(e.size()), w(e.size());
  if (reflect) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      s[e.size() - 1 - i] = std::sqrt(std::max(shift - e[i], 0.0));
      w[e.size() - 1 - i] = v[i];
    }
  } else {
    for (std::size_t i = 0; i < e.size(); ++i) {
      s[i] = std::sqrt(std::max(e[i] - shift, 0.0));
      w[i] = v[i];
    }
  }
  return cubic_spline(std::move(s), std::move(w));
}

// int_{s_lo}^{s_hi} q(s) / sqrt(s_hi^2 - s^2) ds, singular at s_hi only.
// The substitution s = s_hi - t^2 removes the singularity; `knots` are the
// s-values where q is only piecewise smooth (spline knots).
template <class Q>
double half_disc_integral(Q&& q, double s_lo, double s_hi, const std::vector<double>& knots) {
  if (!(s_hi - s_lo > 1e-15 * std::max(1.0, s_hi))) return 0.0;
  auto g = [&](double t) {
    const double s = s_hi - t * t;
    return 2.0 * q(s) / std::sqrt(s_hi + s);
  };
  std::vector<double> breaks;
  breaks.reserve(knots.size());
  for (const double k : knots)
    if (k > s_lo && k < s_hi) breaks.push_back(std::sqrt(s_hi - k));
  return integrate_adaptive_segmented(g, 0.0, std::sqrt(s_hi - s_lo), std::move(breaks),
                                      inversion_tol)
      .value;
}

inline void require_u_in(double u, double lo, double hi, const char* who) {
  const double slack = 1e-12 * std::max(1.0, std::abs(hi));
  if (!(u >= lo - slack) || !(u <= hi + slack))
    raise(errc::domain_error, std::string(who) + ": requested U=" + std::to_string(u) +
                                  " outside the tabulated data range [" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + "]; refusing to extrapolate");
}

}  // namespace detail

// Solve int_E^a phi(U)/sqrt(U-E) dU = f(E) for phi on `u_grid`.  The outer
// integral g(U) = int_U^a f/sqrt(E-U) dE is evaluated by singular quadrature
// and differentiated with a five-point stencil on a refined step.
inline tabulated_function modified_abel_solve(const abel_problem& prob,
                                              const std::vector<double>& u_grid) {
  if (prob.orientation != abel_orientation::modified)
    raise(errc::domain_error, "modified_abel_solve: problem is not in modified orientation");
  prob.f.validate();
  const double a = prob.upper_limit;
  const double e_min = prob.f.x_min();
  const double e_max = prob.f.x_max();
  if (!std::isfinite(a)) raise(errc::domain_error, "modified_abel_solve: upper limit not finite");
  if (std::abs(a - e_max) > 1e-9 * std::max(1.0, std::abs(a)))
    raise(errc::domain_error,
          "modified_abel_solve: upper limit must coincide with the top of the data range "
          "(no extrapolation)");
  if (u_grid.size() < 1) raise(errc::invalid_grid, "modified_abel_solve: empty U grid");

  // g(U) = int_U^a f(E)/sqrt(E-U) dE with E = a - tau^2, which turns the
  // kernel into the half-disc form and keeps the integrand smooth even
  // though f itself vanishes like sqrt(a - E) at the top.
  const auto f_tau = detail::sqrt_abscissa_spline(prob.f.abscissa, prob.f.values, a, true);
  auto g = [&](double u) {
    if (a - u <= 1e-15 * std::max(1.0, std::abs(a))) return 0.0;
    const double tau_u = std::sqrt(a - u);
    auto q = [&](double tau) { return 2.0 * tau * f_tau.value(tau); };
    return detail::half_disc_integral(q, 0.0, tau_u, f_tau.knots());
  };

  const double h = 1e-3 * (a - e_min);
  const double edge_slack = 1e-12 * std::max(1.0, std::abs(a) + std::abs(e_min));
  std::vector<double> phi(u_grid.size());
  for (std::size_t j = 0; j < u_grid.size(); ++j) {
    const double u = u_grid[j];
    detail::require_u_in(u, e_min, a, "modified_abel_solve");
    if (u - 2 * h < e_min - edge_slack || u + 2 * h > a + edge_slack)
      raise(errc::grid_too_coarse,
            "modified_abel_solve: derivative stencil at U=" + std::to_string(u) +
                " leaves the data domain");
    const double d =
        (-g(u + 2 * h) + 8.0 * g(u + h) - 8.0 * g(u - h) + g(u - 2 * h)) / (12.0 * h);
    phi[j] = -d / std::numbers::pi;
  }
  return tabulated_function(u_grid, std::move(phi));
}

// Invert a Gamow transmission curve into the barrier width function.
// ln T is interpolated over tau = sqrt(U0 - E) with the exact anchor
// ln T(U0) = 0 appended, and
//   width(U) = -(hbar/(pi sqrt(2m))) int_0^{tau_U} L'(tau)/sqrt(tau_U^2-tau^2) dtau,
// which is the kernel formula after the same substitution.  width(U0) = 0 is
// imposed, not computed.
inline width_function invert_gamow(const scattering_curve& curve,
                                   const std::vector<double>& u_grid) {
  if (curve.kind != curve_kind::gamow_transmission)
    raise(errc::domain_error, "invert_gamow: curve is not a transmission curve");
  curve.data.validate();
  curve.consts.validate();
  if (!curve.u0)
    raise(errc::domain_error, "invert_gamow: curve carries no barrier height U0");
  const double u0 = *curve.u0;
  const auto& e = curve.data.abscissa;
  const auto& t = curve.data.values;
  if (e.back() > u0 * (1 + 1e-12))
    raise(errc::domain_error, "invert_gamow: data extend above the stated U0");
  if (u_grid.empty()) raise(errc::invalid_grid, "invert_gamow: empty U grid");

  std::vector<double> log_t(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || t[i] > 1.0 + 1e-12)
      raise(errc::domain_error,
            "invert_gamow: transmission values must lie in (0, 1], got " + std::to_string(t[i]) +
                " at E=" + std::to_string(e[i]));
    log_t[i] = std::log(std::min(t[i], 1.0));
  }
  for (std::size_t i = 1; i < log_t.size(); ++i)
    if (log_t[i] < log_t[i - 1] - 1e-12 * std::max(1.0, std::abs(log_t[i - 1])))
      raise(errc::non_monotone_data,
            "invert_gamow: ln T decreases at E=" + std::to_string(e[i]) +
                "; data violate the single-maximum assumption");

  // tau nodes ascend as E descends; prepend the U0 anchor unless present.
  std::vector<double> tau, lw;
  tau.reserve(e.size() + 1);
  lw.reserve(e.size() + 1);
  const bool has_anchor = std::abs(u0 - e.back()) <= 1e-12 * std::max(1.0, u0);
  if (!has_anchor) {
    tau.push_back(0.0);
    lw.push_back(0.0);
  }
  for (std::size_t i = e.size(); i-- > 0;) {
    tau.push_back(std::sqrt(std::max(u0 - e[i], 0.0)));
    lw.push_back(log_t[i]);
  }
  const cubic_spline log_t_tau(std::move(tau), std::move(lw));

  const double prefactor =
      curve.consts.hbar / (std::numbers::pi * std::sqrt(2.0 * curve.consts.mass));
  std::vector<double> us, ws;
  us.reserve(u_grid.size() + 1);
  ws.reserve(u_grid.size() + 1);
  for (const double u : u_grid) {
    detail::require_u_in(u, e.front(), u0, "invert_gamow");
    if (u >= u0 * (1 - 1e-14))
      raise(errc::domain_error, "invert_gamow: U grid must stay strictly below U0");
    const double tau_u = std::sqrt(u0 - u);
    auto q = [&](double s) { return log_t_tau.derivative(s); };
    double w = -prefactor * detail::half_disc_integral(q, 0.0, tau_u, log_t_tau.knots());
    if (w < 0.0) {
      if (w < -1e-8 * std::max(1.0, u0))
        raise(errc::non_monotone_data,
              "invert_gamow: recovered a negative width at U=" + std::to_string(u));
      w = 0.0;
    }
    us.push_back(u);
    ws.push_back(w);
  }
  if (us.empty() || us.back() < u0) {
    us.push_back(u0);
    ws.push_back(0.0);
  }
  width_function out{std::move(us), std::move(ws)};
  out.validate();
  return out;
}

namespace detail {

// Core of the standard-orientation inversions:
//   int_0^U data(E) / sqrt(U - E) dE
// with data splined over sigma = sqrt(E).  Data below the tabulated range
// are never extrapolated; the (tiny) head [0, E_min) of the integral is
// dropped, so curves should be sampled from E_min ~ 0.
inline std::vector<double> standard_abel_transform(const scattering_curve& curve,
                                                   const std::vector<double>& u_grid,
                                                   double prefactor, const char* who) {
  curve.data.validate();
  curve.consts.validate();
  if (u_grid.empty()) raise(errc::invalid_grid, std::string(who) + ": empty U grid");
  const auto& e = curve.data.abscissa;
  if (e.front() < -1e-14)
    raise(errc::domain_error, std::string(who) + ": standard orientation needs E >= 0 data");
  for (double v : curve.data.values)
    if (!(v >= 0.0)) raise(errc::domain_error, std::string(who) + ": curve values must be >= 0");

  const auto spline = sqrt_abscissa_spline(e, curve.data.values, 0.0, false);
  const double sigma_min = std::sqrt(std::max(e.front(), 0.0));

  std::vector<double> out;
  out.reserve(u_grid.size());
  for (const double u : u_grid) {
    require_u_in(u, e.front(), e.back(), who);
    const double sigma_u = std::sqrt(std::max(u, 0.0));
    auto q = [&](double s) { return 2.0 * s * spline.value(s); };
    out.push_back(prefactor * half_disc_integral(q, sigma_min, sigma_u, spline.knots()));
  }
  return out;
}

}  // namespace detail

// Width branch of the classical well inversion.
inline width_function invert_well_period(const scattering_curve& curve,
                                         const std::vector<double>& u_grid) {
  if (curve.kind != curve_kind::classical_period)
    raise(errc::domain_error, "invert_well_period: curve is not a period curve");
  const double pre = 1.0 / (std::numbers::pi * std::sqrt(2.0 * curve.consts.mass));
  auto w = detail::standard_abel_transform(curve, u_grid, pre, "invert_well_period");
  width_function out{u_grid, std::move(w)};
  out.validate();
  return out;
}

// Even branch: the unique even well with the given period, returned as x(U).
inline tabulated_function invert_well_period_even(const scattering_curve& curve,
                                                  const std::vector<double>& u_grid) {
  if (curve.kind != curve_kind::classical_period)
    raise(errc::domain_error, "invert_well_period_even: curve is not a period curve");
  const double pre = 1.0 / (2.0 * std::numbers::pi * std::sqrt(2.0 * curve.consts.mass));
  auto x = detail::standard_abel_transform(curve, u_grid, pre, "invert_well_period_even");
  return tabulated_function(u_grid, std::move(x));
}

// Canonical barrier from backward times: the monotone nondecreasing x(U)
// on [0, L] that represents the whole solution class.
inline tabulated_function invert_barrier_backward(const scattering_curve& curve,
                                                  const std::vector<double>& u_grid) {
  if (curve.kind != curve_kind::backward_time)
    raise(errc::domain_error, "invert_barrier_backward: curve is not a backward-time curve");
  const double pre = std::sqrt(2.0 / curve.consts.mass) / std::numbers::pi;
  auto x = detail::standard_abel_transform(curve, u_grid, pre, "invert_barrier_backward");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] < x[i - 1] - 1e-8 * std::max(1.0, std::abs(x[i - 1])))
      raise(errc::non_monotone_result,
            "invert_barrier_backward: reconstructed x(U) is not monotone at U=" +
                std::to_string(u_grid[i]) + "; input data are inconsistent");
  return tabulated_function(u_grid, std::move(x));
}

// Build one member of the barrier family sharing a width function: choose a
// left branch x1(U) = split(U) and set x2(U) = split(U) + width(U).  The two
// branches are merged into a tabulated single-maximum barrier; split == 0
// reproduces the hard-wall member.
inline potential_spec family_member(const width_function& wf,
                                    const std::function<double(double)>& split, double u0) {
  wf.validate();
  if (!(u0 > 0.0)) raise(errc::domain_error, "family_member: U0 must be positive");
  if (wf.u_grid.front() < -1e-12 * std::max(1.0, u0))
    raise(errc::domain_error, "family_member: width grid extends below U = 0");
  if (wf.u_grid.back() > u0 * (1 + 1e-12))
    raise(errc::domain_error, "family_member: width grid extends above U0");

  std::vector<double> levels = wf.u_grid;
  std::vector<double> widths = wf.width;
  if (levels.back() < u0 * (1 - 1e-12)) {
    levels.push_back(u0);
    widths.push_back(0.0);
  }
  const std::size_t n = levels.size();

  double w_max = 0.0;
  for (double w : widths) w_max = std::max(w_max, w);
  if (!(w_max > 1e-12 * std::max(1.0, u0)))
    raise(errc::branch_overlap, "family_member: width function degenerates to a point");

  std::vector<double> x1(n), x2(n);
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = split(levels[i]);
    if (!std::isfinite(x1[i]))
      raise(errc::domain_error, "family_member: split(U) is not finite at U=" +
                                    std::to_string(levels[i]));
    x2[i] = x1[i] + widths[i];
    scale = std::max({scale, std::abs(x1[i]), std::abs(x2[i])});
  }
  const double tol = 1e-12 * scale;
  for (std::size_t i = 1; i < n; ++i) {
    if (x1[i] < x1[i - 1] - tol)
      raise(errc::branch_overlap,
            "family_member: left branch x1(U) decreases at U=" + std::to_string(levels[i]) +
                "; no single-valued barrier exists for this split");
    if (x2[i] > x2[i - 1] + tol)
      raise(errc::branch_overlap,
            "family_member: right branch x2(U) increases at U=" + std::to_string(levels[i]) +
                "; no single-valued barrier exists for this split");
  }

  // Left face ascending in U; vertical segments collapse to their top.
  std::vector<double> xs, us;
  xs.reserve(2 * n);
  us.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!xs.empty() && x1[i] <= xs.back() + tol) {
      us.back() = levels[i];
    } else {
      xs.push_back(x1[i]);
      us.push_back(levels[i]);
    }
  }
  // Right face, descending in U.
  for (std::size_t i = n; i-- > 0;) {
    if (x2[i] <= xs.back() + tol) continue;
    xs.push_back(x2[i]);
    us.push_back(levels[i]);
  }
  if (xs.size() < 2)
    raise(errc::branch_overlap, "family_member: construction collapses to a single point");
  return potential_spec::tabulated(tabulated_function(std::move(xs), std::move(us)),
                                   shape_kind::barrier);
}

}  // namespace barrierinv
