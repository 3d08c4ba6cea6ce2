#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "projgeom/quadrature.hpp"

namespace projgeom {

// Integrand of the off-diagonal coupling bound,
//   1 / (2 - sqrt(1 + 4 tau^2)),
// positive and increasing on [0, sqrt(3)/2) with a pole at sqrt(3)/2.
inline double offdiag_integrand(double tau) {
  if (tau < 0.0) throw DomainError("offdiag_integrand: negative argument");
  const double root = std::sqrt(1.0 + 4.0 * tau * tau);
  if (!(root < 2.0))
    throw DomainError("offdiag_integrand: pole at tau = sqrt(3)/2 reached (tau = " +
                      std::to_string(tau) + ")");
  return 1.0 / (2.0 - root);
}

// The same function written through the half-angle shift of the spectrum,
//   1 / (1 - 2 tau tan(arctan(2 tau) / 2)).
// Agreement of the two forms is one of the rewriting identities verified by
// the test suite.
inline double offdiag_integrand_alt(double tau) {
  if (tau < 0.0) throw DomainError("offdiag_integrand_alt: negative argument");
  const double denom = 1.0 - 2.0 * tau * std::tan(0.5 * std::atan(2.0 * tau));
  if (!(denom > 0.0))
    throw DomainError("offdiag_integrand_alt: pole reached (tau = " +
                      std::to_string(tau) + ")");
  return 1.0 / denom;
}

// Cumulative integral of the off-diagonal integrand from 0 to s. The simple
// pole is split off exactly,
//   1/(2 - sqrt(1+4 t^2)) = 1/(sqrt(3) (sqrt(3)/2 - t))
//                           + 1/(sqrt(3) (sqrt(3) sqrt(1+4 t^2) + 4 t)),
// so the quadrature only ever sees the smooth second term and the endpoint
// may approach the pole at no extra cost; the pole term integrates to a
// logarithm.
inline double offdiag_integral(double s, double tol = 1e-13) {
  if (s < 0.0) throw DomainError("offdiag_integral: negative endpoint");
  if (s == 0.0) return 0.0;
  const double pole = std::sqrt(3.0) / 2.0;
  if (!(s < pole))
    throw DomainError("offdiag_integral: endpoint at or beyond the pole");
  const double rt3 = std::sqrt(3.0);
  const double smooth = quad::adaptive_simpson(
      [rt3](double t) {
        return 1.0 / (rt3 * (rt3 * std::sqrt(1.0 + 4.0 * t * t) + 4.0 * t));
      },
      0.0, s, tol);
  return smooth + std::log(pole / (pole - s)) / rt3;
}

struct ConstantResult {
  std::string name;
  double value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::string method;
};

// Critical coupling ratio for the off-diagonal bound: the unique s with
// integral_0^s dtau / (2 - sqrt(1 + 4 tau^2)) = 1. Bisection over the
// adaptive quadrature; the returned bracket has width <= precision.
inline ConstantResult compute_c_star(double precision = 1e-12) {
  if (precision < 1e-12)
    throw PreconditionError("compute_c_star: precision below 1e-12 is not "
                            "supported by the quadrature");
  auto f = [](double s) { return offdiag_integral(s, 1e-14) - 1.0; };
  const auto [lo, hi] = quad::bisect(f, 0.5, 0.8, precision);
  ConstantResult out;
  out.name = "c_star";
  out.value = 0.5 * (lo + hi);
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.method = "bisection over adaptive Simpson quadrature";
  return out;
}

// Critical coupling ratio of the older off-diagonal estimate: the positive
// root of (pi/2) x = 1 - x tan(arctan(2x)/2), in closed form
//   (3 pi - sqrt(pi^2 + 32)) / (pi^2 - 4).
inline ConstantResult compute_c_pi() {
  ConstantResult out;
  out.name = "c_pi";
  out.value = (3.0 * M_PI - std::sqrt(M_PI * M_PI + 32.0)) / (M_PI * M_PI - 4.0);
  out.bracket_lo = out.value;
  out.bracket_hi = out.value;
  out.method = "closed form";
  return out;
}

struct GridCheck {
  int grid = 0;
  double min_slack = 0.0;        // min over the grid of (rhs - lhs)
  double argmin = 0.0;           // grid point attaining it
  double min_slack_aux = 0.0;    // companion inequality, when there is one
  double argmin_aux = 0.0;
  double identity_max_err = 0.0; // rewriting identities, absolute error
  bool ok = false;
};

// Grid check of the dominance inequality for the diagonal-perturbation
// bounds: sin((pi/4) log((1+x)/(1-x))) < (pi/2) x on (0, 1), the sine
// argument clipped at pi/2 (beyond it the right side already exceeds 1).
// Also checks the derivative comparison (pi/2)/(1-x^2) < pi/sqrt(4-pi^2 x^2)
// on (0, 2/pi].
inline GridCheck verify_appendix_a(int grid = 10000) {
  if (grid < 2) throw PreconditionError("verify_appendix_a: grid too small");
  GridCheck out;
  out.grid = grid;
  out.min_slack = std::numeric_limits<double>::infinity();
  out.min_slack_aux = std::numeric_limits<double>::infinity();
  for (int k = 1; k < grid; ++k) {
    const double x = static_cast<double>(k) / grid;
    const double arg = 0.25 * M_PI * std::log((1.0 + x) / (1.0 - x));
    const double lhs = std::sin(std::min(arg, 0.5 * M_PI));
    const double slack = 0.5 * M_PI * x - lhs;
    if (slack < out.min_slack) {
      out.min_slack = slack;
      out.argmin = x;
    }
  }
  for (int k = 1; k <= grid; ++k) {
    const double x = (2.0 / M_PI) * static_cast<double>(k) / grid;
    const double lhs = 0.5 * M_PI / (1.0 - x * x);
    const double disc = 4.0 - M_PI * M_PI * x * x;
    const double rhs = disc > 0.0 ? M_PI / std::sqrt(disc)
                                  : std::numeric_limits<double>::infinity();
    const double slack = rhs - lhs;
    if (slack < out.min_slack_aux) {
      out.min_slack_aux = slack;
      out.argmin_aux = x;
    }
  }
  out.ok = out.min_slack > 0.0 && out.min_slack_aux > 0.0;
  return out;
}

// Grid check that the sine-of-integral bound stays strictly below the older
// rational bound on (0, sqrt(3)/2):
//   sin((pi/2) I(t)) < (pi/2) 2t / (3 - sqrt(1 + 4 t^2)),
// the left side clamped to 1 once I(t) >= 1. Also verifies the rewriting
// identity behind both alternate integrand forms,
//   2 t tan(arctan(2t)/2) = sqrt(1 + 4 t^2) - 1,
// pointwise to 1e-14 relative. The reciprocal forms divide by 2 - sqrt(...),
// which vanishes at the pole, so their literal relative agreement degrades
// like the reciprocal of the distance to the pole; the cancellation-free
// core above is the well-posed statement of the same identity.
inline GridCheck verify_appendix_b(int grid = 10000) {
  if (grid < 2) throw PreconditionError("verify_appendix_b: grid too small");
  GridCheck out;
  out.grid = grid;
  out.min_slack = std::numeric_limits<double>::infinity();
  out.min_slack_aux = std::numeric_limits<double>::infinity();
  const double tmax = std::sqrt(3.0) / 2.0;
  double integral = 0.0;
  double prev_t = 0.0;
  bool clamped = false;
  for (int k = 1; k < grid; ++k) {
    const double t = tmax * static_cast<double>(k) / grid;
    if (!clamped) {
      integral += quad::adaptive_simpson(
          [](double x) { return offdiag_integrand(x); }, prev_t, t, 1e-13);
      prev_t = t;
      if (integral >= 1.0) clamped = true;  // lhs saturates at 1 from here on
    }
    const double lhs = clamped ? 1.0 : std::sin(0.5 * M_PI * integral);
    const double rhs =
        M_PI * t / (3.0 - std::sqrt(1.0 + 4.0 * t * t));
    const double slack = rhs - lhs;
    if (slack < out.min_slack) {
      out.min_slack = slack;
      out.argmin = t;
    }

    const double root = std::sqrt(1.0 + 4.0 * t * t);
    const double core = 2.0 * t * std::tan(0.5 * std::atan(2.0 * t));
    // sqrt(1+4t^2) - 1 without the small-t cancellation
    const double mass = 4.0 * t * t / (1.0 + root);
    out.identity_max_err =
        std::max(out.identity_max_err,
                 std::abs(core - mass) /
                     std::max(mass, std::numeric_limits<double>::min()));
  }
  out.ok = out.min_slack > 0.0 && out.identity_max_err <= 1e-14;
  out.min_slack_aux = out.min_slack;
  out.argmin_aux = out.argmin;
  return out;
}

}  // namespace projgeom
