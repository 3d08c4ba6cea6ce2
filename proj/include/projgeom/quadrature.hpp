#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "projgeom/errors.hpp"

namespace projgeom {
namespace quad {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0)
    throw ConvergenceError("adaptive simpson: max depth reached on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "]");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature with Richardson correction.
template <class F>
double adaptive_simpson(F f, double a, double b, double tol = 1e-13,
                        int max_depth = 60) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
// iteration on the Legendre polynomial.
inline const std::vector<std::pair<double, double>>& gauss16_nodes() {
  static const std::vector<std::pair<double, double>> nodes = [] {
    constexpr int n = 16;
    std::vector<std::pair<double, double>> out;
    for (int k = 1; k <= n; ++k) {
      double x = std::cos(M_PI * (k - 0.25) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      out.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
    }
    return out;
  }();
  return nodes;
}

// Composite 16-point Gauss-Legendre rule, a structurally independent check
// against the adaptive Simpson result.
template <class F>
double gauss_legendre(F f, double a, double b, int panels = 8) {
  if (panels < 1) throw PreconditionError("gauss_legendre: panels < 1");
  const auto& nodes = gauss16_nodes();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (const auto& [x, w] : nodes) s += w * f(mid + 0.5 * h * x);
    total += 0.5 * h * s;
  }
  return total;
}

// Bisection for a root of F on [lo, hi] with F(lo) < 0 < F(hi); returns the
// final bracket of width <= width_tol.
template <class F>
std::pair<double, double> bisect(F f, double lo, double hi, double width_tol,
                                 int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (!(flo < 0.0) || !(fhi > 0.0))
    throw PreconditionError("bisect: bracket does not straddle a sign change");
  for (int it = 0; it < max_iter && (hi - lo) > width_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  if ((hi - lo) > width_tol)
    throw ConvergenceError("bisect: bracket width " + std::to_string(hi - lo) +
                           " above tolerance after iteration cap");
  return {lo, hi};
}

// Trapezoid rule over sampled values, plus a Richardson-style error estimate
// obtained by comparing with the half-resolution rule.
inline std::pair<double, double> trapezoid_sampled(const std::vector<double>& t,
                                                   const std::vector<double>& f) {
  if (t.size() != f.size() || t.size() < 2)
    throw PreconditionError("trapezoid_sampled: need matching samples, >= 2");
  double full = 0.0;
  for (size_t j = 0; j + 1 < t.size(); ++j)
    full += 0.5 * (f[j] + f[j + 1]) * (t[j + 1] - t[j]);
  if (t.size() < 3) return {full, 0.0};
  double half = 0.0;
  size_t prev = 0;
  for (size_t j = 2; j < t.size(); j += 2) {
    half += 0.5 * (f[prev] + f[j]) * (t[j] - t[prev]);
    prev = j;
  }
  if (prev + 1 < t.size())  // odd tail
    half += 0.5 * (f[prev] + f.back()) * (t.back() - t[prev]);
  return {full, std::abs(full - half) / 3.0};
}

}  // namespace quad
}  // namespace projgeom
