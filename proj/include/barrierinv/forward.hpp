#pragma once

// Forward scattering data computed from a potential: the classical period of
// a well, barrier traversal and backward times, and the Gamow tunnelling
// transmission
//   T(E) = exp(-(2/hbar) int_{x1}^{x2} sqrt(2m (U(x)-E)) dx).
//
// Every turning-point integral is rewritten relative to the turning points
// so the square-root endpoint behaviour is removed analytically before
// quadrature (x = x1 + t^2 and mirror images).

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "barrierinv/constants.hpp"
#include "barrierinv/errors.hpp"
#include "barrierinv/potentials.hpp"
#include "barrierinv/quadrature.hpp"
#include "barrierinv/tabulated.hpp"

namespace barrierinv {

enum class curve_kind { classical_period, traversal_time, backward_time, gamow_transmission };

inline const char* curve_kind_name(curve_kind k) {
  switch (k) {
    case curve_kind::classical_period:   return "period";
    case curve_kind::traversal_time:     return "traversal";
    case curve_kind::backward_time:      return "backward";
    case curve_kind::gamow_transmission: return "transmission";
  }
  return "unknown";
}

inline curve_kind curve_kind_from_name(const std::string& s) {
  if (s == "period") return curve_kind::classical_period;
  if (s == "traversal") return curve_kind::traversal_time;
  if (s == "backward") return curve_kind::backward_time;
  if (s == "transmission") return curve_kind::gamow_transmission;
  raise(errc::config_error, "unknown curve kind '" + s + "'");
}

struct scattering_curve {
  curve_kind kind = curve_kind::gamow_transmission;
  tabulated_function data;  // abscissa = E
  physical_constants consts;
  std::optional<double> u0;  // barrier kinds only
};

namespace detail {

inline constexpr double forward_tol = 1e-11;

// int_{x1}^{xm} dx / sqrt(E - U(x)) with E - U vanishing at x1.  The
// substitution x = x1 + t^2 removes the turning-point singularity, the
// energy difference is formed through stable_drop (E is replaced by U(x1),
// which agrees to the bisection residual), and the integration splits at the
// transformed interpolation knots of a tabulated potential.
inline double face_time_lower(const potential_spec& p, const physical_constants& consts,
                              double x1, double xm, double energy) {
  if (!(xm - x1 > 0.0)) return 0.0;
  (void)energy;
  auto g = [&](double t) {
    const double drop = p.stable_drop(x1, t * t, consts);
    return 2.0 * std::sqrt(std::max(t * t / std::max(drop, 1e-300), 0.0));
  };
  std::vector<double> breaks;
  for (const double k : p.interior_knots(x1, xm)) breaks.push_back(std::sqrt(k - x1));
  return integrate_adaptive_segmented(g, 0.0, std::sqrt(xm - x1), std::move(breaks), forward_tol)
      .value;
}

// Mirror image: the turning point sits at the upper endpoint x2.
inline double face_time_upper(const potential_spec& p, const physical_constants& consts,
                              double xm, double x2, double energy) {
  if (!(x2 - xm > 0.0)) return 0.0;
  (void)energy;
  auto g = [&](double t) {
    const double drop = p.stable_drop(x2, -(t * t), consts);
    return 2.0 * std::sqrt(std::max(t * t / std::max(drop, 1e-300), 0.0));
  };
  std::vector<double> breaks;
  for (const double k : p.interior_knots(xm, x2)) breaks.push_back(std::sqrt(x2 - k));
  return integrate_adaptive_segmented(g, 0.0, std::sqrt(x2 - xm), std::move(breaks), forward_tol)
      .value;
}

}  // namespace detail

// Oscillation period of a well: sqrt(2m) int_{x1}^{x2} dx / sqrt(E - U).
inline double classical_period(const potential_spec& p, double energy,
                               const physical_constants& consts = {}) {
  consts.validate();
  if (p.shape() != shape_kind::well)
    raise(errc::shape_mismatch, "classical_period: potential is not a well");
  if (!(energy > 0.0))
    raise(errc::energy_out_of_range,
          "classical_period: requires E > 0, got E=" + std::to_string(energy));
  const auto [x1, x2] = p.turning_points(energy, consts);
  const double xm = p.well_minimum_location(consts);
  const double left = detail::face_time_lower(p, consts, x1, xm, energy);
  const double right = detail::face_time_upper(p, consts, xm, x2, energy);
  return std::sqrt(2.0 * consts.mass) * (left + right);
}

// Time to cross the barrier support at E > U0: sqrt(m/2) int dx / sqrt(E-U).
inline double traversal_time(const potential_spec& p, double energy,
                             const physical_constants& consts = {}) {
  consts.validate();
  if (!p.is_barrier())
    raise(errc::shape_mismatch, "traversal_time: potential is not a barrier");
  const double u0 = p.barrier_max(consts).second;
  if (!(energy > u0))
    raise(errc::energy_out_of_range,
          "traversal_time: requires E > U0, got E=" + std::to_string(energy));
  const auto [lo, hi] = p.support(consts);
  auto f = [&](double x) { return 1.0 / std::sqrt(energy - p.evaluate(x, consts)); };
  const double val =
      integrate_adaptive_segmented(f, lo, hi, p.interior_knots(lo, hi), detail::forward_tol)
          .value;
  return std::sqrt(consts.mass / 2.0) * val;
}

// Time from the support edge to the left turning point at 0 < E <= U0
// (half the return time of a reflected particle).
inline double backward_time(const potential_spec& p, double energy,
                            const physical_constants& consts = {}) {
  consts.validate();
  if (!p.is_barrier())
    raise(errc::shape_mismatch, "backward_time: potential is not a barrier");
  const double u0 = p.barrier_max(consts).second;
  if (!(energy > 0.0) || energy > u0 * (1.0 + 1e-12))
    raise(errc::energy_out_of_range,
          "backward_time: requires 0 < E <= U0, got E=" + std::to_string(energy));
  const double lo = p.support(consts).first;
  const double x1 = p.turning_points(std::min(energy, u0), consts).first;
  const double val = detail::face_time_upper(p, consts, lo, x1, energy);
  return std::sqrt(consts.mass / 2.0) * val;
}

// Gamow transmission through a single-maximum barrier; exactly 1 at E = U0.
inline double gamow_transmission(const potential_spec& p, double energy,
                                 const physical_constants& consts = {}) {
  consts.validate();
  if (!p.is_barrier())
    raise(errc::shape_mismatch, "gamow_transmission: potential is not a barrier");
  const auto [x_top, u0] = p.barrier_max(consts);
  if (!(energy > 0.0) || energy > u0 * (1.0 + 1e-12))
    raise(errc::energy_out_of_range,
          "gamow_transmission: requires 0 < E <= U0, got E=" + std::to_string(energy));
  if (energy >= u0) return 1.0;

  const auto [x1, x2] = p.turning_points(energy, consts);
  const double two_m = 2.0 * consts.mass;
  double action = 0.0;
  // sqrt(U - E) vanishes like a square root at an interior turning point;
  // x = x1 + t^2 makes the half-integrals smooth.
  if (x_top - x1 > 0.0) {
    auto g = [&](double t) {
      const double du = p.evaluate(x1 + t * t, consts) - energy;
      return 2.0 * t * std::sqrt(two_m * std::max(du, 0.0));
    };
    std::vector<double> breaks;
    for (const double k : p.interior_knots(x1, x_top)) breaks.push_back(std::sqrt(k - x1));
    action += integrate_adaptive_segmented(g, 0.0, std::sqrt(x_top - x1), std::move(breaks),
                                           detail::forward_tol)
                  .value;
  }
  if (x2 - x_top > 0.0) {
    auto g = [&](double t) {
      const double du = p.evaluate(x2 - t * t, consts) - energy;
      return 2.0 * t * std::sqrt(two_m * std::max(du, 0.0));
    };
    std::vector<double> breaks;
    for (const double k : p.interior_knots(x_top, x2)) breaks.push_back(std::sqrt(x2 - k));
    action += integrate_adaptive_segmented(g, 0.0, std::sqrt(x2 - x_top), std::move(breaks),
                                           detail::forward_tol)
                  .value;
  }
  return std::exp(-2.0 * action / consts.hbar);
}

// Pointwise sampling of one curve kind over a strictly increasing E grid.
inline scattering_curve sample_curve(const potential_spec& p, curve_kind kind,
                                     const std::vector<double>& e_grid,
                                     const physical_constants& consts = {}) {
  consts.validate();
  if (e_grid.empty()) raise(errc::invalid_grid, "sample_curve: empty energy grid");
  if (e_grid.size() < 2) raise(errc::invalid_grid, "sample_curve: grid needs at least 2 points");
  for (std::size_t i = 1; i < e_grid.size(); ++i)
    if (!(e_grid[i] > e_grid[i - 1]))
      raise(errc::invalid_grid, "sample_curve: energy grid must be strictly increasing");

  const bool needs_well = (kind == curve_kind::classical_period);
  if (needs_well && p.shape() != shape_kind::well)
    raise(errc::shape_mismatch, "sample_curve: period curves need a well potential");
  if (!needs_well && !p.is_barrier())
    raise(errc::shape_mismatch, "sample_curve: barrier-time curves need a barrier potential");

  std::vector<double> values;
  values.reserve(e_grid.size());
  for (const double e : e_grid) {
    try {
      switch (kind) {
        case curve_kind::classical_period:   values.push_back(classical_period(p, e, consts)); break;
        case curve_kind::traversal_time:     values.push_back(traversal_time(p, e, consts)); break;
        case curve_kind::backward_time:      values.push_back(backward_time(p, e, consts)); break;
        case curve_kind::gamow_transmission: values.push_back(gamow_transmission(p, e, consts)); break;
      }
    } catch (const error& err) {
      raise(err.code(), std::string(err.what()) + " (while sampling at E=" + std::to_string(e) + ")");
    }
  }

  scattering_curve curve;
  curve.kind = kind;
  curve.data = tabulated_function(e_grid, std::move(values));
  curve.consts = consts;
  if (p.is_barrier()) curve.u0 = p.barrier_max(consts).second;
  return curve;
}

}  // namespace barrierinv
