#pragma once

// Strictly monotone tables and the two interpolants used on them:
//  - monotone_cubic: shape-preserving Fritsch-Carlson cubic, used wherever
//    the interpolant must stay invertible (tabulated potentials, width data);
//  - cubic_spline: not-a-knot C^2 spline, used by the inversion formulas,
//    which differentiate the interpolant and need cubic exactness.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "barrierinv/errors.hpp"

namespace barrierinv {

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) raise(errc::invalid_grid, "linspace: need at least 2 points");
  if (!(lo < hi)) raise(errc::invalid_grid, "linspace: need lo < hi");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

struct tabulated_function {
  std::vector<double> abscissa;  // strictly increasing
  std::vector<double> values;

  tabulated_function() = default;
  tabulated_function(std::vector<double> xs, std::vector<double> ys)
      : abscissa(std::move(xs)), values(std::move(ys)) {
    validate();
  }

  std::size_t size() const { return abscissa.size(); }
  double x_min() const { return abscissa.front(); }
  double x_max() const { return abscissa.back(); }

  void validate() const {
    if (abscissa.size() != values.size())
      raise(errc::domain_error, "tabulated_function: abscissa/value length mismatch");
    if (abscissa.size() < 2)
      raise(errc::domain_error, "tabulated_function: needs at least two samples");
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (!std::isfinite(abscissa[i]) || !std::isfinite(values[i]))
        raise(errc::domain_error, "tabulated_function: non-finite entry");
      if (i > 0 && !(abscissa[i] > abscissa[i - 1]))
        raise(errc::domain_error, "tabulated_function: abscissa must be strictly increasing");
    }
  }
};

namespace detail {

// Largest panel index i with x >= xs[i], clamped to [0, n-2].
inline std::size_t find_panel(const std::vector<double>& xs, double x) {
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (i > 0) --i;
  if (i > xs.size() - 2) i = xs.size() - 2;
  return i;
}

inline void check_in_range(const std::vector<double>& xs, double x, const char* who) {
  const double span = xs.back() - xs.front();
  const double slack = 1e-12 * std::max({1.0, std::abs(xs.front()), std::abs(xs.back()), span});
  if (!(x >= xs.front() - slack) || !(x <= xs.back() + slack))
    raise(errc::out_of_domain, std::string(who) + ": abscissa " + std::to_string(x) +
                                   " outside table range [" + std::to_string(xs.front()) + ", " +
                                   std::to_string(xs.back()) + "]");
}

}  // namespace detail

// Fritsch-Carlson monotone cubic Hermite interpolant.  Data that are
// monotone on a panel stay monotone in the interpolant.
class monotone_cubic {
public:
  monotone_cubic(std::vector<double> xs, std::vector<double> ys)
      : x_(std::move(xs)), y_(std::move(ys)) {
    tabulated_function{x_, y_};  // reuse validation
    build();
  }

  explicit monotone_cubic(const tabulated_function& t) : monotone_cubic(t.abscissa, t.values) {}

  double value(double x) const {
    detail::check_in_range(x_, x, "monotone_cubic");
    const std::size_t i = detail::find_panel(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * d_[i + 1];
  }

  double derivative(double x) const {
    detail::check_in_range(x_, x, "monotone_cubic");
    const std::size_t i = detail::find_panel(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return (6 * t2 - 6 * t) * (y_[i] - y_[i + 1]) / h + (3 * t2 - 4 * t + 1) * d_[i] +
           (3 * t2 - 2 * t) * d_[i + 1];
  }

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& knot_values() const { return y_; }
  std::size_t panel_index(double x) const { return detail::find_panel(x_, x); }

private:
  static double edge_slope(double h0, double h1, double s0, double s1) {
    double d = ((2 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0)
      d = 0.0;
    else if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0))
      d = 3.0 * s0;
    return d;
  }

  void build() {
    const std::size_t n = x_.size();
    d_.assign(n, 0.0);
    if (n == 2) {
      d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
      return;
    }
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (s[i - 1] * s[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2 * h[i] + h[i - 1];
        const double w2 = h[i] + 2 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
      }
    }
    d_[0] = edge_slope(h[0], h[1], s[0], s[1]);
    d_[n - 1] = edge_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
  }

  std::vector<double> x_, y_, d_;
};

// Not-a-knot cubic spline (moment form).  Reproduces cubic data exactly,
// which the inversion formulas rely on after the square-root change of
// abscissa.  Not shape preserving.
class cubic_spline {
public:
  cubic_spline(std::vector<double> xs, std::vector<double> ys)
      : x_(std::move(xs)), y_(std::move(ys)) {
    tabulated_function{x_, y_};
    build();
  }

  explicit cubic_spline(const tabulated_function& t) : cubic_spline(t.abscissa, t.values) {}

  double value(double x) const {
    detail::check_in_range(x_, x, "cubic_spline");
    const std::size_t i = detail::find_panel(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double u = x_[i + 1] - x;
    const double v = x - x_[i];
    return m_[i] * u * u * u / (6 * h) + m_[i + 1] * v * v * v / (6 * h) +
           (y_[i] - m_[i] * h * h / 6) * u / h + (y_[i + 1] - m_[i + 1] * h * h / 6) * v / h;
  }

  double derivative(double x) const {
    detail::check_in_range(x_, x, "cubic_spline");
    const std::size_t i = detail::find_panel(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double u = x_[i + 1] - x;
    const double v = x - x_[i];
    return -m_[i] * u * u / (2 * h) + m_[i + 1] * v * v / (2 * h) + (y_[i + 1] - y_[i]) / h -
           (m_[i + 1] - m_[i]) * h / 6;
  }

  const std::vector<double>& knots() const { return x_; }

private:
  void build() {
    const std::size_t n = x_.size();
    m_.assign(n, 0.0);
    if (n == 2) return;  // linear

    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      s[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    if (n == 3) {
      // single parabola through the three points
      const double m = 2.0 * (s[1] - s[0]) / (h[0] + h[1]);
      m_[0] = m_[1] = m_[2] = m;
      return;
    }

    // Interior continuity equations for the moments M_i, with the boundary
    // moments eliminated through the not-a-knot relations
    //   M_0 = ((h0+h1) M_1 - h0 M_2) / h1,
    //   M_{n-1} = ((h_{n-3}+h_{n-2}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}.
    const std::size_t q = n - 2;  // unknowns M_1 .. M_{n-2}
    std::vector<double> sub(q, 0.0), diag(q, 0.0), sup(q, 0.0), rhs(q, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const std::size_t r = i - 1;
      sub[r] = h[i - 1] / 6.0;
      diag[r] = (h[i - 1] + h[i]) / 3.0;
      sup[r] = h[i] / 6.0;
      rhs[r] = s[i] - s[i - 1];
    }
    diag[0] += sub[0] * (h[0] + h[1]) / h[1];
    sup[0] += sub[0] * (-h[0] / h[1]);
    sub[0] = 0.0;
    diag[q - 1] += sup[q - 1] * (h[n - 3] + h[n - 2]) / h[n - 3];
    sub[q - 1] += sup[q - 1] * (-h[n - 2] / h[n - 3]);
    sup[q - 1] = 0.0;

    // Thomas elimination
    for (std::size_t r = 1; r < q; ++r) {
      if (diag[r - 1] == 0.0)
        raise(errc::singular_system, "cubic_spline: degenerate not-a-knot system");
      const double w = sub[r] / diag[r - 1];
      diag[r] -= w * sup[r - 1];
      rhs[r] -= w * rhs[r - 1];
    }
    if (diag[q - 1] == 0.0)
      raise(errc::singular_system, "cubic_spline: degenerate not-a-knot system");
    std::vector<double> sol(q);
    sol[q - 1] = rhs[q - 1] / diag[q - 1];
    for (std::size_t r = q - 1; r-- > 0;) sol[r] = (rhs[r] - sup[r] * sol[r + 1]) / diag[r];

    for (std::size_t i = 0; i < q; ++i) m_[i + 1] = sol[i];
    m_[0] = ((h[0] + h[1]) * m_[1] - h[0] * m_[2]) / h[1];
    m_[n - 1] = ((h[n - 3] + h[n - 2]) * m_[n - 2] - h[n - 2] * m_[n - 3]) / h[n - 3];
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace barrierinv
