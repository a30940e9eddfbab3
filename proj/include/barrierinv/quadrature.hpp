#pragma once

// Quadrature for integrands with inverse-square-root endpoint weights.
//
// The singular weight is always removed analytically before any nodes are
// placed: a single (.)^{-1/2} endpoint is absorbed by the substitution
// E = a + t^2 (or E = b - t^2), which leaves a smooth integrand for adaptive
// Gauss-Legendre panels; the double weight 1/sqrt((b-E)(E-a)) is integrated
// with Chebyshev-Gauss nodes, which handle it natively (exactly, for
// polynomial smooth factors).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "barrierinv/errors.hpp"

namespace barrierinv {

// Which endpoint(s) of [a, b] carry the (.)^{-1/2} weight.  `both` is only
// legal when the weight is 1/sqrt((b-E)(E-a)).
enum class singular_end { lower, upper, both };

struct quadrature_result {
  double value = 0.0;
  double est_error = 0.0;  // absolute
  std::int64_t evaluations = 0;
};

namespace detail {

struct gauss_rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes and weights by Newton iteration on the Legendre recurrence.
inline gauss_rule make_gauss_legendre(int n) {
  gauss_rule r;
  r.nodes.assign(static_cast<std::size_t>(n), 0.0);
  r.weights.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 1.0;
    for (int iter = 0; iter < 64; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

inline const gauss_rule& gauss_coarse() {
  static const gauss_rule r = make_gauss_legendre(12);
  return r;
}

inline const gauss_rule& gauss_fine() {
  static const gauss_rule r = make_gauss_legendre(24);
  return r;
}

template <class F>
double gauss_panel(const gauss_rule& g, F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k)
    s += g.weights[k] * f(mid + half * g.nodes[k]);
  return s * half;
}

}  // namespace detail

inline constexpr double default_quadrature_tol = 1e-10;
inline constexpr std::int64_t default_evaluation_budget = 1'000'000;

// Adaptive Gauss-Legendre for a smooth integrand on [a, b].  Panels are
// bisected until the 12/24-point difference meets the locally allotted
// tolerance; the allotment halves with each split so the accepted panel
// errors sum to at most `tol`.
template <class F>
quadrature_result integrate_adaptive(F&& f, double a, double b,
                                     double tol = default_quadrature_tol,
                                     std::int64_t budget = default_evaluation_budget) {
  if (!(a < b)) raise(errc::invalid_interval, "integrate_adaptive: requires a < b");
  if (!(tol > 0.0)) raise(errc::domain_error, "integrate_adaptive: tol must be positive");

  struct segment {
    double a, b, tol;
    int depth;
  };

  quadrature_result out;
  bool stalled = false;
  std::vector<segment> stack{{a, b, tol, 0}};
  while (!stack.empty()) {
    const segment s = stack.back();
    stack.pop_back();
    const double coarse = detail::gauss_panel(detail::gauss_coarse(), f, s.a, s.b);
    const double fine = detail::gauss_panel(detail::gauss_fine(), f, s.a, s.b);
    out.evaluations += 36;
    if (out.evaluations > budget)
      raise(errc::non_convergence,
            "integrate_adaptive: evaluation budget of " + std::to_string(budget) + " exhausted");
    const double err = std::abs(fine - coarse);
    const double floor = 40.0 * std::numeric_limits<double>::epsilon() * std::abs(fine);
    if (err <= s.tol || err <= floor || s.depth >= 48) {
      if (err > s.tol && err > floor) stalled = true;
      out.value += fine;
      out.est_error += err;
    } else {
      const double m = 0.5 * (s.a + s.b);
      stack.push_back({s.a, m, 0.5 * s.tol, s.depth + 1});
      stack.push_back({m, s.b, 0.5 * s.tol, s.depth + 1});
    }
  }
  if (stalled && out.est_error > tol)
    raise(errc::non_convergence, "integrate_adaptive: refinement stalled above tolerance");
  return out;
}

// Adaptive integration with known interior breakpoints (interpolation knots,
// corners).  Each smooth piece gets a tolerance share proportional to its
// length; the evaluation budget is shared.
template <class F>
quadrature_result integrate_adaptive_segmented(F&& f, double a, double b,
                                               std::vector<double> breaks,
                                               double tol = default_quadrature_tol,
                                               std::int64_t budget = default_evaluation_budget) {
  if (!(a < b)) raise(errc::invalid_interval, "integrate_adaptive_segmented: requires a < b");
  std::sort(breaks.begin(), breaks.end());
  const double min_gap = 1e-13 * std::max(1.0, b - a);
  std::vector<double> edges{a};
  for (const double s : breaks)
    if (s > edges.back() + min_gap && s < b - min_gap) edges.push_back(s);
  edges.push_back(b);

  quadrature_result out;
  const double total = b - a;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double frac = std::max((edges[i + 1] - edges[i]) / total, 1e-6);
    const auto r = integrate_adaptive(f, edges[i], edges[i + 1], tol * frac,
                                      budget - out.evaluations);
    out.value += r.value;
    out.est_error += r.est_error;
    out.evaluations += r.evaluations;
  }
  return out;
}

// Integral of f(E) * w(E) over [a, b], where f is the smooth factor left
// after splitting off the declared weight w:
//   lower:  w(E) = 1/sqrt(E - a)
//   upper:  w(E) = 1/sqrt(b - E)
//   both:   w(E) = 1/sqrt((b - E)(E - a))
template <class F>
quadrature_result integrate_sqrt_singular(F&& f, double a, double b, singular_end end,
                                          double tol = default_quadrature_tol,
                                          std::int64_t budget = default_evaluation_budget) {
  if (!(a < b)) raise(errc::invalid_interval, "integrate_sqrt_singular: requires a < b");
  if (!(tol > 0.0)) raise(errc::domain_error, "integrate_sqrt_singular: tol must be positive");

  switch (end) {
    case singular_end::lower: {
      const double width = std::sqrt(b - a);
      auto g = [&f, a](double t) { return 2.0 * f(a + t * t); };
      return integrate_adaptive(g, 0.0, width, tol, budget);
    }
    case singular_end::upper: {
      const double width = std::sqrt(b - a);
      auto g = [&f, b](double t) { return 2.0 * f(b - t * t); };
      return integrate_adaptive(g, 0.0, width, tol, budget);
    }
    case singular_end::both: {
      // E = mid + half*cos(theta) turns the integral into the theta-midpoint
      // sum; node count doubles until two successive levels agree.
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * (b - a);
      quadrature_result out;
      double prev = 0.0;
      bool have_prev = false;
      for (int n = 8;; n *= 2) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double theta = std::numbers::pi * (k - 0.5) / n;
          s += f(mid + half * std::cos(theta));
        }
        s *= std::numbers::pi / n;
        out.evaluations += n;
        out.value = s;
        if (have_prev) {
          out.est_error = std::abs(s - prev);
          if (out.est_error <= tol) return out;
        }
        prev = s;
        have_prev = true;
        if (out.evaluations > budget)
          raise(errc::non_convergence,
                "integrate_sqrt_singular: evaluation budget of " + std::to_string(budget) +
                    " exhausted on double-ended weight");
      }
    }
  }
  raise(errc::domain_error, "integrate_sqrt_singular: unknown singular_end");
}

// int_alpha^beta dE / sqrt((beta-E)(E-alpha)) -- equal to pi for every
// alpha < beta.  This constant is what collapses the composition of two
// Abel kernels over the triangular domain.
inline double kernel_composition_integral(double alpha, double beta) {
  if (!(alpha < beta))
    raise(errc::invalid_interval, "kernel_composition_integral: requires alpha < beta");
  return std::numbers::pi;
}

// int_alpha^beta sqrt((beta-E)/(E-alpha)) dE = (beta-alpha) * pi/2.
inline double sqrt_ratio_integral(double alpha, double beta) {
  if (!(alpha < beta))
    raise(errc::invalid_interval, "sqrt_ratio_integral: requires alpha < beta");
  return (beta - alpha) * std::numbers::pi / 2.0;
}

}  // namespace barrierinv
