#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "barrierinv/forward.hpp"
#include "barrierinv/inversion.hpp"
#include "barrierinv/potentials.hpp"
#include "barrierinv/quadrature.hpp"
#include "barrierinv/tabulated.hpp"

using namespace barrierinv;

namespace {

double poly_eval(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
  return v;
}

scattering_curve make_curve(curve_kind kind, std::vector<double> e, std::vector<double> v,
                            std::optional<double> u0 = std::nullopt,
                            physical_constants consts = {}) {
  scattering_curve c;
  c.kind = kind;
  c.data = tabulated_function(std::move(e), std::move(v));
  c.consts = consts;
  c.u0 = u0;
  return c;
}

}  // namespace

TEST_CASE("modified Abel solve: known right-hand sides") {
  // f(E) = 2 sqrt(a - E)  <=>  phi == 1 (and -f <=> -1 by linearity)
  const double a = 1.0;
  const auto e_grid = linspace(0.0, a, 201);
  std::vector<double> f_plus(e_grid.size()), f_minus(e_grid.size()), f_zero(e_grid.size(), 0.0);
  for (std::size_t i = 0; i < e_grid.size(); ++i) {
    f_plus[i] = 2.0 * std::sqrt(a - e_grid[i]);
    f_minus[i] = -f_plus[i];
  }
  const auto u_grid = linspace(0.05, 0.9, 40);

  const auto phi1 = modified_abel_solve({tabulated_function(e_grid, f_plus), a,
                                         abel_orientation::modified},
                                        u_grid);
  for (const double v : phi1.values) CHECK(std::abs(v - 1.0) <= 1e-8);

  const auto phi2 = modified_abel_solve({tabulated_function(e_grid, f_minus), a,
                                         abel_orientation::modified},
                                        u_grid);
  for (const double v : phi2.values) CHECK(std::abs(v + 1.0) <= 1e-8);

  const auto phi0 = modified_abel_solve({tabulated_function(e_grid, f_zero), a,
                                         abel_orientation::modified},
                                        u_grid);
  for (const double v : phi0.values) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("modified Abel solve: stencil and orientation guards") {
  const double a = 1.0;
  const auto e_grid = linspace(0.0, a, 101);
  std::vector<double> f(e_grid.size(), 0.0);
  abel_problem prob{tabulated_function(e_grid, f), a, abel_orientation::modified};

  try {
    modified_abel_solve(prob, {a - 1e-4});
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::grid_too_coarse);
  }

  prob.orientation = abel_orientation::standard;
  CHECK_THROWS_AS(modified_abel_solve(prob, {0.5}), error);

  prob.orientation = abel_orientation::modified;
  prob.upper_limit = 2.0;  // data stop at 1.0: would need extrapolation
  CHECK_THROWS_AS(modified_abel_solve(prob, {0.5}), error);
}

TEST_CASE("modified Abel solve undoes the forward kernel on random polynomials") {
  std::mt19937 rng(2024u);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const double a = 1.5;
  const auto e_grid = linspace(0.0, a, 301);
  const auto u_grid = linspace(0.1, 1.3, 25);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> phi(5);
    for (auto& c : phi) c = coeff(rng);
    std::vector<double> f(e_grid.size());
    for (std::size_t i = 0; i < e_grid.size(); ++i) {
      f[i] = (a - e_grid[i] <= 1e-15)
                 ? 0.0
                 : integrate_sqrt_singular([&phi](double u) { return poly_eval(phi, u); },
                                           e_grid[i], a, singular_end::lower, 1e-13)
                       .value;
    }
    const auto rec = modified_abel_solve({tabulated_function(e_grid, f), a,
                                          abel_orientation::modified},
                                         u_grid);
    for (std::size_t i = 0; i < u_grid.size(); ++i)
      CHECK(std::abs(rec.values[i] - poly_eval(phi, u_grid[i])) <= 1e-5);
  }
}

TEST_CASE("invert_gamow: cold emission gives width U0 - U") {
  const auto curve = sample_curve(potential_spec::cold(1.0, 1.0),
                                  curve_kind::gamow_transmission, linspace(0.05, 0.95, 60));
  const auto u_grid = linspace(0.05, 0.95, 60);
  const auto wf = invert_gamow(curve, u_grid);
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double exact = 1.0 - u_grid[i];
    CHECK(std::abs(wf.width[i] - exact) / exact <= 1e-6);
  }
  // the exact top-of-barrier point is imposed
  CHECK(wf.u_grid.back() == doctest::Approx(1.0));
  CHECK(wf.width.back() == doctest::Approx(0.0));
}

TEST_CASE("invert_gamow: flat transmission gives zero width") {
  const auto e = linspace(0.1, 0.9, 30);
  const auto curve = make_curve(curve_kind::gamow_transmission, e,
                                std::vector<double>(e.size(), 1.0), 1.2);
  const auto wf = invert_gamow(curve, linspace(0.1, 0.9, 17));
  for (std::size_t i = 0; i + 1 < wf.width.size(); ++i) CHECK(std::abs(wf.width[i]) <= 1e-12);
}

TEST_CASE("invert_gamow: parabolic barrier width") {
  const auto curve = sample_curve(potential_spec::parabolic(1.0, 1.0),
                                  curve_kind::gamow_transmission, linspace(0.05, 0.95, 60));
  const auto u_grid = linspace(0.05, 0.95, 60);
  const auto wf = invert_gamow(curve, u_grid);
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double exact = 2.0 * std::sqrt(2.0 * (1.0 - u_grid[i]));
    CHECK(std::abs(wf.width[i] - exact) / exact <= 1e-6);
  }
}

TEST_CASE("invert_gamow: data guards") {
  const auto e = linspace(0.1, 0.9, 9);
  std::vector<double> t(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) t[i] = 0.1 + 0.1 * double(i);

  // decreasing T violates the single-maximum assumption
  auto bad = t;
  bad[4] = 0.2;
  try {
    invert_gamow(make_curve(curve_kind::gamow_transmission, e, bad, 1.0), {0.5});
    CHECK(false);
  } catch (const error& err) {
    CHECK(err.code() == errc::non_monotone_data);
  }

  // values outside (0, 1]
  auto big = t;
  big[8] = 1.5;
  CHECK_THROWS_AS(invert_gamow(make_curve(curve_kind::gamow_transmission, e, big, 1.0), {0.5}),
                  error);

  // missing u0
  CHECK_THROWS_AS(invert_gamow(make_curve(curve_kind::gamow_transmission, e, t), {0.5}), error);

  // U grid outside the data range or at/above U0
  const auto curve = make_curve(curve_kind::gamow_transmission, e, t, 1.0);
  CHECK_THROWS_AS(invert_gamow(curve, {0.05}), error);
  CHECK_THROWS_AS(invert_gamow(curve, {1.0}), error);

  // wrong curve kind
  const auto period = make_curve(curve_kind::classical_period, e, t);
  CHECK_THROWS_AS(invert_gamow(period, {0.5}), error);
}

TEST_CASE("round trip: analytic barriers, 400 samples, relative 1e-6") {
  const std::vector<potential_spec> barriers = {potential_spec::cold(1.0, 1.0),
                                                potential_spec::parabolic(1.0, 1.0)};
  for (const auto& p : barriers) {
    const double u0 = p.barrier_max().second;
    const auto grid = linspace(0.05 * u0, 0.95 * u0, 400);
    const auto curve = sample_curve(p, curve_kind::gamow_transmission, grid);
    const auto wf = invert_gamow(curve, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto [x1, x2] = p.turning_points(grid[i]);
      const double truth = x2 - x1;
      worst = std::max(worst, std::abs(wf.width[i] - truth) / truth);
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("invert_well_period: constant period is the harmonic well") {
  const auto e_grid = linspace(1e-12, 2.0, 180);
  const auto curve = make_curve(curve_kind::classical_period, e_grid,
                                std::vector<double>(e_grid.size(), 2.0 * std::numbers::pi));
  const auto u_grid = linspace(0.02, 1.9, 60);

  const auto wf = invert_well_period(curve, u_grid);
  for (std::size_t i = 0; i < u_grid.size(); ++i)
    CHECK(std::abs(wf.width[i] - 2.0 * std::sqrt(2.0 * u_grid[i])) <= 1e-8);

  const auto x_even = invert_well_period_even(curve, u_grid);
  for (std::size_t i = 0; i < u_grid.size(); ++i)
    CHECK(std::abs(x_even.values[i] - std::sqrt(2.0 * u_grid[i])) <= 1e-8);
}

TEST_CASE("invert_well_period: zero period data give zero width") {
  const auto e_grid = linspace(0.0, 1.0, 20);
  const auto curve = make_curve(curve_kind::classical_period, e_grid,
                                std::vector<double>(e_grid.size(), 0.0));
  const auto wf = invert_well_period(curve, linspace(0.1, 0.9, 9));
  for (const double w : wf.width) CHECK(std::abs(w) <= 1e-14);
}

TEST_CASE("even inversion with explicit constants recovers the harmonic well") {
  const physical_constants consts{1.0, 1.5};
  const double omega = 2.0;
  const auto well = potential_spec::harmonic(omega);
  const auto curve =
      sample_curve(well, curve_kind::classical_period, linspace(1e-9, 2.0, 220), consts);
  const auto u_grid = linspace(0.02, 1.9, 50);
  const auto x_even = invert_well_period_even(curve, u_grid);
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double exact = std::sqrt(2.0 * u_grid[i] / consts.mass) / omega;
    CHECK(std::abs(x_even.values[i] - exact) <= 1e-7);
  }
}

TEST_CASE("linear well round trip through the even branch") {
  const auto well = potential_spec::linear(1.0);
  const auto curve = sample_curve(well, curve_kind::classical_period, linspace(1e-9, 2.0, 240));
  const auto u_grid = linspace(0.02, 1.9, 80);
  const auto x_even = invert_well_period_even(curve, u_grid);
  for (std::size_t i = 0; i < u_grid.size(); ++i)
    CHECK(std::abs(x_even.values[i] - u_grid[i]) <= 1e-6);
}

TEST_CASE("invert_barrier_backward: linear ramp and parabolic face") {
  // U = x on [0, 1]: x(U) = U
  const auto ramp = potential_spec::tabulated(tabulated_function({0.0, 1.0}, {0.0, 1.0}),
                                              shape_kind::barrier);
  const auto curve = sample_curve(ramp, curve_kind::backward_time, linspace(1e-9, 1.0, 160));
  const auto u_grid = linspace(0.01, 0.99, 50);
  const auto x_of_u = invert_barrier_backward(curve, u_grid);
  for (std::size_t i = 0; i < u_grid.size(); ++i)
    CHECK(std::abs(x_of_u.values[i] - u_grid[i]) <= 1e-6);

  // curved monotone table U = (x + x^2)/2 on [0, 1]: the round trip
  // recovers that barrier's own profile x(U) (its turning points)
  const auto xs = linspace(0.0, 1.0, 400);
  std::vector<double> us(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) us[i] = 0.5 * (xs[i] + xs[i] * xs[i]);
  const auto curved = potential_spec::tabulated(tabulated_function(xs, us), shape_kind::barrier);
  const auto curve2 = sample_curve(curved, curve_kind::backward_time, linspace(1e-6, 1.0, 200));
  const auto u_grid2 = linspace(0.05, 0.95, 40);
  const auto x2 = invert_barrier_backward(curve2, u_grid2);
  for (std::size_t i = 0; i < u_grid2.size(); ++i) {
    const double truth = curved.turning_points(u_grid2[i]).first;
    CHECK(std::abs(x2.values[i] - truth) <= 1e-5);
  }
}

TEST_CASE("invert_barrier_backward: zero data and inconsistent data") {
  const auto e_grid = linspace(0.0, 1.0, 30);
  const auto zero = make_curve(curve_kind::backward_time, e_grid,
                               std::vector<double>(e_grid.size(), 0.0));
  const auto x0 = invert_barrier_backward(zero, linspace(0.1, 0.9, 9));
  for (const double x : x0.values) CHECK(std::abs(x) <= 1e-14);

  // steeply decaying R cannot come from a monotone face
  std::vector<double> decaying(e_grid.size());
  for (std::size_t i = 0; i < e_grid.size(); ++i) decaying[i] = std::exp(-20.0 * e_grid[i]);
  const auto bad = make_curve(curve_kind::backward_time, e_grid, decaying);
  try {
    invert_barrier_backward(bad, linspace(0.05, 0.95, 40));
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::non_monotone_result);
  }
}

TEST_CASE("family_member: hard-wall and tent members from a linear width") {
  const auto u_grid = linspace(0.0, 1.0, 101);
  std::vector<double> width(u_grid.size());
  for (std::size_t i = 0; i < u_grid.size(); ++i) width[i] = 1.0 - u_grid[i];
  const width_function wf{u_grid, width};

  const auto wall = family_member(wf, [](double) { return 0.0; }, 1.0);
  CHECK(wall.evaluate(0.35) == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(wall.evaluate(0.0) == doctest::Approx(1.0));
  CHECK(wall.barrier_max().second == doctest::Approx(1.0));

  const auto tent = family_member(wf, [&](double u) { return -0.5 * (1.0 - u); }, 1.0);
  CHECK(tent.evaluate(0.0) == doctest::Approx(1.0));
  CHECK(tent.evaluate(0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tent.evaluate(-0.25) == doctest::Approx(0.5).epsilon(1e-12));

  // degenerate width
  const width_function degenerate{u_grid, std::vector<double>(u_grid.size(), 0.0)};
  try {
    family_member(degenerate, [](double) { return 0.0; }, 1.0);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::branch_overlap);
  }

  // a split that moves the left branch the wrong way
  CHECK_THROWS_AS(family_member(wf, [&](double u) { return 0.5 * (1.0 - u); }, 1.0), error);
}

TEST_CASE("family members share the transmission but not the potential") {
  const auto curve = sample_curve(potential_spec::cold(1.0, 1.0),
                                  curve_kind::gamow_transmission, linspace(0.02, 0.98, 200));
  const auto wf = invert_gamow(curve, linspace(0.02, 0.98, 200));
  const monotone_cubic w_interp(wf.u_grid, wf.width);

  const auto wall = family_member(wf, [](double) { return 0.0; }, 1.0);
  const auto tent = family_member(wf, [&](double u) { return -0.5 * w_interp.value(u); }, 1.0);

  const auto e_grid = linspace(0.1, 0.9, 21);
  const auto t_wall = sample_curve(wall, curve_kind::gamow_transmission, e_grid).data.values;
  const auto t_tent = sample_curve(tent, curve_kind::gamow_transmission, e_grid).data.values;
  double gap = 0.0, sep = 0.0;
  for (std::size_t i = 0; i < e_grid.size(); ++i)
    gap = std::max(gap, std::abs(t_wall[i] - t_tent[i]));
  CHECK(gap <= 1e-8);
  for (const double x : linspace(0.01, 0.45, 40))
    sep = std::max(sep, std::abs(wall.evaluate(x) - tent.evaluate(x)));
  CHECK(sep >= 0.1);
}

TEST_CASE("kernel composition: both integration orders agree") {
  std::mt19937 rng(5u);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const double alpha = 0.2, top = 1.7;
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<double> psi(4);
    for (auto& c : psi) c = coeff(rng);
    auto inner = [&](double e) {
      if (top - e <= 1e-15) return 0.0;
      return integrate_sqrt_singular([&psi](double u) { return poly_eval(psi, u); }, e, top,
                                     singular_end::lower, 1e-13)
          .value;
    };
    const double lhs = integrate_sqrt_singular(inner, alpha, top, singular_end::lower, 1e-11).value;
    // swapped order: pi * int psi
    double rhs = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k)
      rhs += psi[k] * (std::pow(top, k + 1.0) - std::pow(alpha, k + 1.0)) / (k + 1.0);
    rhs *= std::numbers::pi;
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }
}
