#pragma once

// One-dimensional potentials: analytic families plus tabulated profiles,
// with turning-point location and barrier-shape metadata.
//
// Conventions: wells have a single minimum with U(min) = 0; barriers have a
// single maximum U0 > 0 and finite support outside of which U vanishes.
// The cold-emission barrier U(x) = U0 - field*x lives on x >= 0 with a hard
// wall at the origin, so its left turning point is x = 0 at every energy.

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "barrierinv/constants.hpp"
#include "barrierinv/errors.hpp"
#include "barrierinv/tabulated.hpp"

namespace barrierinv {

enum class shape_kind { well, barrier };

inline const char* shape_name(shape_kind s) {
  return s == shape_kind::well ? "well" : "barrier";
}

struct harmonic_well {
  double omega;  // U = (m omega^2 / 2) x^2
};

struct linear_well {
  double slope;  // U = slope * |x|
};

struct cold_emission {
  double u0;
  double field;  // U = max(u0 - field * x, 0) for x >= 0
};

struct parabolic_barrier {
  double u0;
  double omega;  // U = max(u0 - (m omega^2 / 2) x^2, 0)
};

struct tabulated_potential {
  tabulated_function table;  // x -> U
};

namespace detail {

template <class F>
double bisect_root(F&& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    raise(errc::bracket_failure, "bisect_root: endpoints do not bracket a sign change");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo) || !(mid < hi)) break;  // machine resolution
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

class potential_spec {
public:
  using kind_variant =
      std::variant<harmonic_well, linear_well, cold_emission, parabolic_barrier,
                   tabulated_potential>;

  static potential_spec harmonic(double omega) {
    require_positive(omega, "harmonic omega");
    return potential_spec(harmonic_well{omega}, shape_kind::well);
  }

  static potential_spec linear(double slope) {
    require_positive(slope, "linear slope");
    return potential_spec(linear_well{slope}, shape_kind::well);
  }

  static potential_spec cold(double u0, double field) {
    require_positive(u0, "cold-emission u0");
    require_positive(field, "cold-emission field");
    return potential_spec(cold_emission{u0, field}, shape_kind::barrier);
  }

  static potential_spec parabolic(double u0, double omega) {
    require_positive(u0, "parabolic-barrier u0");
    require_positive(omega, "parabolic-barrier omega");
    return potential_spec(parabolic_barrier{u0, omega}, shape_kind::barrier);
  }

  static potential_spec tabulated(tabulated_function table, shape_kind shape) {
    table.validate();
    return potential_spec(tabulated_potential{std::move(table)}, shape);
  }

  shape_kind shape() const { return shape_; }
  bool is_barrier() const { return shape_ == shape_kind::barrier; }
  const kind_variant& kind() const { return kind_; }
  bool is_tabulated() const { return std::holds_alternative<tabulated_potential>(kind_); }

  double evaluate(double x, const physical_constants& consts = {}) const {
    consts.validate();
    const double m = consts.mass;
    if (const auto* hw = std::get_if<harmonic_well>(&kind_))
      return 0.5 * m * hw->omega * hw->omega * x * x;
    if (const auto* lw = std::get_if<linear_well>(&kind_)) return lw->slope * std::abs(x);
    if (const auto* ce = std::get_if<cold_emission>(&kind_)) {
      const double slack = 1e-12 * std::max(1.0, ce->u0 / ce->field);
      if (x < -slack)
        raise(errc::out_of_domain, "cold-emission potential is defined for x >= 0");
      return std::max(ce->u0 - ce->field * std::max(x, 0.0), 0.0);
    }
    if (const auto* pb = std::get_if<parabolic_barrier>(&kind_))
      return std::max(pb->u0 - 0.5 * m * pb->omega * pb->omega * x * x, 0.0);
    return face(x).value(x);
  }

  // Extent of the barrier; U = 0 outside (traversal/backward times integrate
  // over this interval only).
  std::pair<double, double> support(const physical_constants& consts = {}) const {
    consts.validate();
    if (!is_barrier()) raise(errc::shape_mismatch, "support: potential is not a barrier");
    if (const auto* ce = std::get_if<cold_emission>(&kind_)) return {0.0, ce->u0 / ce->field};
    if (const auto* pb = std::get_if<parabolic_barrier>(&kind_)) {
      const double half = std::sqrt(2.0 * pb->u0 / consts.mass) / pb->omega;
      return {-half, half};
    }
    const auto& t = std::get<tabulated_potential>(kind_).table;
    return {t.x_min(), t.x_max()};
  }

  // Location and value of the barrier maximum.  Analytic kinds are closed
  // form; tabulated profiles refine the grid argmax by golden section.
  std::pair<double, double> barrier_max(const physical_constants& consts = {}) const {
    consts.validate();
    if (!is_barrier()) raise(errc::shape_mismatch, "barrier_max: potential is not a barrier");
    if (const auto* ce = std::get_if<cold_emission>(&kind_)) return {0.0, ce->u0};
    if (const auto* pb = std::get_if<parabolic_barrier>(&kind_)) return {0.0, pb->u0};

    const auto& t = std::get<tabulated_potential>(kind_).table;
    std::size_t idx = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t.values[i] > t.values[idx]) idx = i;
    if (idx == 0) return {t.abscissa.front(), t.values.front()};
    if (idx + 1 == t.size()) return {t.abscissa.back(), t.values.back()};
    const double span = t.x_max() - t.x_min();
    const double xs = detail::golden_max([this](double x) { return face(x).value(x); },
                                         t.abscissa[idx - 1], t.abscissa[idx + 1],
                                         1e-12 * std::max(1.0, span));
    return {xs, face(xs).value(xs)};
  }

  // U(x_ref) - U(x_ref + offset), evaluated without the catastrophic
  // cancellation of a plain subtraction near a turning point (the time
  // integrands divide this against t^2 with offset = +-t^2).  The offset
  // enters as an exact prefactor: analytic kinds factor the difference,
  // tabulated kinds use the Simpson identity
  //   c(a+h) - c(a) = h/6 [c'(a) + 4 c'(a + h/2) + c'(a + h)],
  // exact for the panel cubic.
  double stable_drop(double x_ref, double offset, const physical_constants& consts = {}) const {
    consts.validate();
    const double m = consts.mass;
    const double x = x_ref + offset;
    if (const auto* hw = std::get_if<harmonic_well>(&kind_))
      return -0.5 * m * hw->omega * hw->omega * offset * (2.0 * x_ref + offset);
    if (const auto* lw = std::get_if<linear_well>(&kind_)) {
      if (x_ref >= 0.0 && x >= 0.0) return -lw->slope * offset;
      if (x_ref <= 0.0 && x <= 0.0) return lw->slope * offset;
      return lw->slope * (std::abs(x_ref) - std::abs(x));
    }
    if (const auto* ce = std::get_if<cold_emission>(&kind_)) {
      const double cutoff = ce->u0 / ce->field;
      if (x_ref <= cutoff && x <= cutoff) return ce->field * offset;
      return evaluate(x_ref, consts) - evaluate(x, consts);
    }
    if (const auto* pb = std::get_if<parabolic_barrier>(&kind_)) {
      const double half = std::sqrt(2.0 * pb->u0 / m) / pb->omega;
      if (std::abs(x_ref) <= half && std::abs(x) <= half)
        return 0.5 * m * pb->omega * pb->omega * offset * (2.0 * x_ref + offset);
      return evaluate(x_ref, consts) - evaluate(x, consts);
    }
    const bool ref_left = x_ref <= split_x_;
    const bool x_left = x <= split_x_;
    if (ref_left == x_left) {
      const monotone_cubic& itp = face(x_ref);
      if (itp.panel_index(x_ref) == itp.panel_index(x)) {
        return -offset / 6.0 *
               (itp.derivative(x_ref) + 4.0 * itp.derivative(x_ref + 0.5 * offset) +
                itp.derivative(x));
      }
      if (std::abs(offset) < 1e-8 * std::max({1.0, std::abs(x_ref), std::abs(x)}))
        return -offset * itp.derivative(x_ref + 0.5 * offset);
      return itp.value(x_ref) - itp.value(x);
    }
    return evaluate(x_ref, consts) - evaluate(x, consts);
  }

  // Tabulated abscissae strictly inside (lo, hi); the interpolant is only
  // piecewise smooth across them, so quadratures split there.  Analytic
  // kinds are smooth away from their support edges.
  std::vector<double> interior_knots(double lo, double hi) const {
    std::vector<double> out;
    if (const auto* tp = std::get_if<tabulated_potential>(&kind_))
      for (const double k : tp->table.abscissa)
        if (k > lo && k < hi) out.push_back(k);
    return out;
  }

  double well_minimum_location(const physical_constants& consts = {}) const {
    consts.validate();
    if (is_barrier())
      raise(errc::shape_mismatch, "well_minimum_location: potential is not a well");
    if (!is_tabulated()) return 0.0;
    const auto& t = std::get<tabulated_potential>(kind_).table;
    std::size_t idx = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t.values[i] < t.values[idx]) idx = i;
    if (idx == 0) return t.abscissa.front();
    if (idx + 1 == t.size()) return t.abscissa.back();
    const double span = t.x_max() - t.x_min();
    return detail::golden_max([this](double x) { return -face(x).value(x); },
                              t.abscissa[idx - 1], t.abscissa[idx + 1],
                              1e-12 * std::max(1.0, span));
  }

  // The two solutions of U(x) = E bracketing the extremum, x1 <= x2.
  // Barrier: 0 < E <= U0, degenerate (x_max, x_max) at E = U0; a face whose
  // outer edge never drops below E pins the turning point to that edge
  // (hard-wall and canonical-ramp geometries).
  std::pair<double, double> turning_points(double energy,
                                           const physical_constants& consts = {}) const {
    consts.validate();
    const double m = consts.mass;
    if (is_barrier()) {
      const auto [x_top, u0] = barrier_max(consts);
      const double slack = 1e-12 * std::max(1.0, u0);
      if (!(energy > 0.0) || energy > u0 + slack)
        raise(errc::energy_out_of_range,
              "turning_points: barrier requires 0 < E <= U0, got E=" + std::to_string(energy));
      if (energy >= u0 - slack) return {x_top, x_top};

      if (const auto* ce = std::get_if<cold_emission>(&kind_))
        return {0.0, (ce->u0 - energy) / ce->field};
      if (const auto* pb = std::get_if<parabolic_barrier>(&kind_)) {
        const double xr = std::sqrt(2.0 * (pb->u0 - energy) / m) / pb->omega;
        return {-xr, xr};
      }
      const auto [lo, hi] = support(consts);
      const double x1 = barrier_face_solve(lo, x_top, energy, /*outer_is_lo=*/true);
      const double x2 = barrier_face_solve(x_top, hi, energy, /*outer_is_lo=*/false);
      return {x1, x2};
    }

    if (!(energy > 0.0))
      raise(errc::energy_out_of_range, "turning_points: well requires E > 0, got E=" +
                                           std::to_string(energy));
    if (const auto* hw = std::get_if<harmonic_well>(&kind_)) {
      const double xr = std::sqrt(2.0 * energy / m) / hw->omega;
      return {-xr, xr};
    }
    if (const auto* lw = std::get_if<linear_well>(&kind_)) {
      const double xr = energy / lw->slope;
      return {-xr, xr};
    }
    const auto& t = std::get<tabulated_potential>(kind_).table;
    const double x_bot = well_minimum_location(consts);
    const double x1 = well_face_solve(t.x_min(), x_bot, energy, /*outer_is_lo=*/true);
    const double x2 = well_face_solve(x_bot, t.x_max(), energy, /*outer_is_lo=*/false);
    return {x1, x2};
  }

private:
  potential_spec(kind_variant k, shape_kind s) : kind_(std::move(k)), shape_(s) {
    if (std::holds_alternative<harmonic_well>(kind_) ||
        std::holds_alternative<linear_well>(kind_)) {
      if (shape_ != shape_kind::well)
        raise(errc::shape_mismatch, "well family declared as barrier");
    } else if (!std::holds_alternative<tabulated_potential>(kind_)) {
      if (shape_ != shape_kind::barrier)
        raise(errc::shape_mismatch, "barrier family declared as well");
    }
    if (const auto* tp = std::get_if<tabulated_potential>(&kind_)) build_interp(tp->table);
  }

  // Tabulated profiles are interpolated per monotone face, split at the
  // extremum knot.  A corner apex (triangular barrier, |x| well) is then
  // represented exactly instead of being flattened by the shape-preserving
  // slope limiter.
  void build_interp(const tabulated_function& t) {
    std::size_t idx = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const bool better = is_barrier() ? t.values[i] > t.values[idx] : t.values[i] < t.values[idx];
      if (better) idx = i;
    }
    split_x_ = t.abscissa[idx];
    if (idx == 0 || idx + 1 == t.size()) {
      interp_ = std::make_shared<monotone_cubic>(t);
      interp_right_ = interp_;
      return;
    }
    interp_ = std::make_shared<monotone_cubic>(
        std::vector<double>(t.abscissa.begin(), t.abscissa.begin() + idx + 1),
        std::vector<double>(t.values.begin(), t.values.begin() + idx + 1));
    interp_right_ = std::make_shared<monotone_cubic>(
        std::vector<double>(t.abscissa.begin() + idx, t.abscissa.end()),
        std::vector<double>(t.values.begin() + idx, t.values.end()));
  }

  const monotone_cubic& face(double x) const { return x <= split_x_ ? *interp_ : *interp_right_; }

  static void require_positive(double v, const char* name) {
    if (!(v > 0.0)) raise(errc::domain_error, std::string(name) + " must be strictly positive");
  }

  // Solve U(x) = E on one monotone face of a tabulated barrier.  The face
  // runs from its outer edge up to the maximum; an outer edge that never
  // drops below E is itself the turning point (hard wall / canonical ramp).
  double barrier_face_solve(double lo, double hi, double energy, bool outer_is_lo) const {
    const double outer_x = outer_is_lo ? lo : hi;
    if (face(outer_x).value(outer_x) >= energy) return outer_x;
    auto f = [this, energy](double x) { return face(x).value(x) - energy; };
    return detail::bisect_root(f, lo, hi);
  }

  // Same for one face of a tabulated well; the energy must stay below the
  // rim of the table.
  double well_face_solve(double lo, double hi, double energy, bool outer_is_lo) const {
    const double outer_x = outer_is_lo ? lo : hi;
    if (face(outer_x).value(outer_x) < energy)
      raise(errc::bracket_failure,
            "turning_points: E=" + std::to_string(energy) + " lies above the tabulated well rim");
    auto f = [this, energy](double x) { return face(x).value(x) - energy; };
    return detail::bisect_root(f, lo, hi);
  }

  kind_variant kind_;
  shape_kind shape_;
  // tabulated kinds: one interpolant per monotone face, split at the extremum
  std::shared_ptr<const monotone_cubic> interp_;
  std::shared_ptr<const monotone_cubic> interp_right_;
  double split_x_ = 0.0;
};

}  // namespace barrierinv
