#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "projgeom/constants.hpp"
#include "projgeom/path.hpp"

namespace projgeom {

// A two-component splitting of a finite spectrum: omega is one cluster,
// omega_big the other, dist their separation. Both clusters are nonempty
// and stored sorted.
struct SpectralSplit {
  std::vector<double> omega;
  std::vector<double> omega_big;
  double dist = 0.0;
};

namespace detail {

inline double dist_to_set(double x, const std::vector<double>& set) {
  double d = std::numeric_limits<double>::infinity();
  for (double s : set) d = std::min(d, std::abs(x - s));
  return d;
}

inline double cross_distance(const std::vector<double>& a,
                             const std::vector<double>& b) {
  double d = std::numeric_limits<double>::infinity();
  for (double x : a) d = std::min(d, dist_to_set(x, b));
  return d;
}

}  // namespace detail

inline SpectralSplit make_split(std::vector<double> omega,
                                std::vector<double> omega_big) {
  if (omega.empty() || omega_big.empty())
    throw PreconditionError("make_split: both components must be nonempty");
  std::sort(omega.begin(), omega.end());
  std::sort(omega_big.begin(), omega_big.end());
  SpectralSplit s;
  s.dist = detail::cross_distance(omega, omega_big);
  if (!(s.dist > 0.0))
    throw HypothesisError("make_split: components are not separated");
  s.omega = std::move(omega);
  s.omega_big = std::move(omega_big);
  return s;
}

// Spectral projection of A onto the eigenvalues selected by the predicate.
template <class F>
inline Projection spectral_projection(const HermMatrix& a, F&& member) {
  EigDecomposition e = eig_hermitian(a);
  std::vector<int> keep;
  for (int k = 0; k < a.dim(); ++k)
    if (member(e.eigenvalues[k])) keep.push_back(k);
  Matrix b(a.dim(), static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j)
    for (int i = 0; i < a.dim(); ++i)
      b(i, static_cast<int>(j)) = e.eigenvectors(i, keep[j]);
  return Projection::from_orthonormal_columns(b);
}

// Split the spectrum of A at its largest eigenvalue gap, provided that gap
// is at least gap_threshold. The lower cluster is omega by convention, and
// dist is the realized separation (which for a sorted split is exactly the
// chosen gap).
inline SpectralSplit split_spectrum(const HermMatrix& a, double gap_threshold) {
  if (a.dim() < 2)
    throw PreconditionError("split_spectrum: need at least two eigenvalues");
  const EigDecomposition e = eig_hermitian(a);
  int cut = -1;
  double best = 0.0;
  for (int k = 0; k + 1 < a.dim(); ++k) {
    const double gap = e.eigenvalues[k + 1] - e.eigenvalues[k];
    if (gap > best) {
      best = gap;
      cut = k;
    }
  }
  if (cut < 0 || best < gap_threshold)
    throw NoGapError("split_spectrum: largest gap " + std::to_string(best) +
                     " below threshold " + std::to_string(gap_threshold));
  SpectralSplit s;
  s.omega.assign(e.eigenvalues.begin(), e.eigenvalues.begin() + cut + 1);
  s.omega_big.assign(e.eigenvalues.begin() + cut + 1, e.eigenvalues.end());
  s.dist = detail::cross_distance(s.omega, s.omega_big);
  return s;
}

// Sampled Hermitian operator path t -> B_t, with optional derivative samples.
struct OperatorPath {
  std::vector<double> times;
  std::vector<HermMatrix> operators;
  std::vector<HermMatrix> derivatives;  // empty, or one per sample

  int samples() const { return static_cast<int>(times.size()); }
  bool has_derivative() const { return !derivatives.empty(); }

  void validate() const {
    if (times.size() != operators.size())
      throw DimensionError("operator path: times/operators size mismatch");
    if (has_derivative() && derivatives.size() != operators.size())
      throw DimensionError("operator path: derivatives size mismatch");
    if (times.size() < 2)
      throw PreconditionError("operator path: need at least 2 samples");
    for (size_t j = 1; j < times.size(); ++j)
      if (!(times[j] > times[j - 1]))
        throw PreconditionError("operator path: times not strictly increasing");
  }
};

// View a projection path as an operator path (projections are Hermitian, and
// the stored velocities are their derivatives).
inline OperatorPath as_operator_path(const ProjectionPath& path) {
  path.validate();
  OperatorPath out;
  out.times = path.times;
  out.operators.reserve(path.points.size());
  for (const auto& p : path.points)
    out.operators.emplace_back(p.matrix(), 1e-9);
  if (path.has_velocity())
    for (const auto& v : path.velocities) out.derivatives.emplace_back(v, 1e-9);
  return out;
}

// Uniformly sampled linear path B_t = A + tV on [0, t_end], with the exact
// constant derivative V attached.
inline OperatorPath linear_operator_path(const HermMatrix& a,
                                         const HermMatrix& v, double t_end,
                                         int samples) {
  if (a.dim() != v.dim())
    throw DimensionError("linear_operator_path: dimension mismatch");
  if (samples < 2)
    throw PreconditionError("linear_operator_path: need at least 2 samples");
  if (!(t_end > 0.0))
    throw PreconditionError("linear_operator_path: need t_end > 0");
  OperatorPath path;
  path.times.reserve(samples);
  path.operators.reserve(samples);
  path.derivatives.reserve(samples);
  for (int j = 0; j < samples; ++j) {
    const double t = t_end * j / (samples - 1);
    path.times.push_back(t);
    path.operators.emplace_back(a.mat() + t * v.mat(), 1e-9);
    path.derivatives.push_back(v);
  }
  return path;
}

/*
 * Track the two spectral components of B_t along the path inside the fixed
 * half-gap neighborhoods of the initial split: with d = split0.dist, every
 * eigenvalue of every sample must stay inside
 *   O_{d/2}(omega)  union  O_{d/2}(omega_big)
 * (open neighborhoods of the initial clusters). The two neighborhoods are
 * disjoint, so membership is unambiguous; an eigenvalue escaping both, a
 * cluster emptying out, or the realized per-sample separation collapsing to
 * zero raises GapClosedError naming the sample time.
 */
inline std::vector<SpectralSplit> track_components(const OperatorPath& path,
                                                   const SpectralSplit& split0) {
  path.validate();
  const double radius = 0.5 * split0.dist;
  std::vector<SpectralSplit> out;
  out.reserve(path.times.size());
  for (int j = 0; j < path.samples(); ++j) {
    const EigDecomposition e = eig_hermitian(path.operators[j]);
    SpectralSplit s;
    for (double lam : e.eigenvalues) {
      const double dlo = detail::dist_to_set(lam, split0.omega);
      const double dhi = detail::dist_to_set(lam, split0.omega_big);
      if (dlo < radius) {
        s.omega.push_back(lam);
      } else if (dhi < radius) {
        s.omega_big.push_back(lam);
      } else {
        throw GapClosedError("track_components: eigenvalue " +
                             std::to_string(lam) + " escaped both component "
                             "neighborhoods at t = " + std::to_string(path.times[j]));
      }
    }
    if (s.omega.empty() || s.omega_big.empty())
      throw GapClosedError("track_components: a component emptied out at t = " +
                           std::to_string(path.times[j]));
    s.dist = detail::cross_distance(s.omega, s.omega_big);
    if (!(s.dist > 0.0))
      throw GapClosedError("track_components: components collided at t = " +
                           std::to_string(path.times[j]));
    out.push_back(std::move(s));
  }
  return out;
}

// One verified bound against its brute-forced truth.
//   kind      "integral" | "diag" | "offdiag" | ...
//   bound     for "integral" the arcsin-side value c * int ||B'|| / dist;
//             for closed-form kinds the sine-side value
//   actual    brute-force ||E_0 - E_t||
//   margin    bound minus the matching side of actual
struct BoundReport {
  std::string kind;
  double bound = 0.0;
  double actual = 0.0;
  bool valid = false;
  double margin = 0.0;
  double quad_error = 0.0;
};

// The path-integral subspace bound: with c = pi/2 in general and c = 1 when
// the two components are subordinated (one lies wholly to one side of the
// other throughout),
//   arcsin ||E_T - E_0|| <= c * integral ||B'_t|| / dist(omega_t, Omega_t) dt.
// The integral is a trapezoid over the samples, with a half-resolution
// Richardson estimate reported as quad_error. The brute-force actual is the
// norm distance between the initial and final tracked spectral projections.
inline BoundReport integral_bound(const OperatorPath& path,
                                  const std::vector<SpectralSplit>& splits,
                                  bool subordinated = false) {
  path.validate();
  if (splits.size() != path.times.size())
    throw DimensionError("integral_bound: one split per sample required");
  const int n = path.samples();
  std::vector<double> integrand(n);
  for (int j = 0; j < n; ++j) {
    double speed;
    if (path.has_derivative()) {
      speed = operator_norm(path.derivatives[j]);
    } else {
      const int lo = (j == 0) ? 0 : j - 1;
      const int hi = (j == n - 1) ? n - 1 : j + 1;
      speed = operator_norm(path.operators[hi].mat() - path.operators[lo].mat()) /
              (path.times[hi] - path.times[lo]);
    }
    integrand[j] = speed / splits[j].dist;
  }
  const double c = subordinated ? 1.0 : 0.5 * M_PI;
  const auto [raw, err] = quad::trapezoid_sampled(path.times, integrand);

  const SpectralSplit& s0 = splits.front();
  const SpectralSplit& sT = splits.back();
  const Projection p0 = spectral_projection(path.operators.front(), [&](double lam) {
    return detail::dist_to_set(lam, s0.omega) < detail::dist_to_set(lam, s0.omega_big);
  });
  const Projection pT = spectral_projection(path.operators.back(), [&](double lam) {
    return detail::dist_to_set(lam, sT.omega) < detail::dist_to_set(lam, sT.omega_big);
  });

  BoundReport rep;
  rep.kind = subordinated ? "integral-subordinated" : "integral";
  rep.bound = c * raw;
  rep.quad_error = c * err;
  rep.actual = distance(p0, pT);
  rep.valid = true;
  rep.margin = rep.bound - std::asin(std::min(rep.actual, 1.0));
  return rep;
}

// Closed-form prediction of a perturbation bound: the sine-side value, the
// arcsin-side argument it came from, and whether the hypothesis guaranteeing
// it is met. Outside the guaranteed regime the value is still computed
// (where finite) with valid = false.
struct BoundPrediction {
  double value = 0.0;        // sine side, in [0, 1]
  double arcsin_side = 0.0;  // argument before the sine, may exceed pi/2
  bool valid = false;
};

// Validity edge of the diagonal bound: ||V|| < d * (1 - e^{-2}) / 2.
inline double diag_bound_validity_ratio() { return 0.5 * (1.0 - std::exp(-2.0)); }

// Diagonal-perturbation subspace bound
//   ||E_A(omega) - E_{A+V}(O_{d/2}(omega))|| <= sin((pi/4) log(d / (d-2||V||)))
// valid for ||V|| < d (1 - e^{-2}) / 2 (where the sine argument stays below
// pi/2). The sine argument is clamped at pi/2, so value <= 1 always.
inline BoundPrediction diag_bound(double norm_v, double d) {
  if (!(d > 0.0) || norm_v < 0.0)
    throw PreconditionError("diag_bound: need d > 0 and ||V|| >= 0");
  BoundPrediction out;
  out.valid = norm_v < diag_bound_validity_ratio() * d;
  out.arcsin_side = (d - 2.0 * norm_v > 0.0)
                        ? 0.25 * M_PI * std::log(d / (d - 2.0 * norm_v))
                        : std::numeric_limits<double>::infinity();
  out.value = std::sin(std::min(out.arcsin_side, 0.5 * M_PI));
  return out;
}

// c_star, cached: the coupling ratio where the off-diagonal integral reaches
// 1. Bracketed to 1e-12 once per process.
inline double c_star_cached() {
  static const double value = compute_c_star(1e-12).value;
  return value;
}

// Off-diagonal perturbation bound
//   ||E_A(omega) - E_{A+V}(O_{d/2}(omega))||
//       <= sin( (pi/2) integral_0^{||V||/d} dtau / (2 - sqrt(1+4 tau^2)) ),
// valid for ||V|| < c_star * d; the integrand has a pole at sqrt(3)/2 and
// the integral is refused from there on.
inline BoundPrediction offdiag_bound(double norm_v, double d) {
  if (!(d > 0.0) || norm_v < 0.0)
    throw PreconditionError("offdiag_bound: need d > 0 and ||V|| >= 0");
  const double s = norm_v / d;
  if (!(s < std::sqrt(3.0) / 2.0))
    throw DomainError("offdiag_bound: ||V||/d = " + std::to_string(s) +
                      " at or beyond the integrand pole sqrt(3)/2");
  BoundPrediction out;
  out.arcsin_side = 0.5 * M_PI * offdiag_integral(s);
  out.value = std::sin(std::min(out.arcsin_side, 0.5 * M_PI));
  out.valid = s < c_star_cached();
  return out;
}

// Spectral shift radius of a purely off-diagonal perturbation and the
// resulting lower bound for the moving gap:
//   delta_V = ||V|| tan( arctan(2 ||V|| / d) / 2 ),
//   dist >= (2 - sqrt(1 + 4 (||V||/d)^2)) * d   while ||V||/d < sqrt(3)/2.
struct DeltaV {
  double delta = 0.0;
  double dist_lower_bound = 0.0;
};

inline DeltaV delta_v(double norm_v, double d) {
  if (!(d > 0.0) || norm_v < 0.0)
    throw PreconditionError("delta_v: need d > 0 and ||V|| >= 0");
  DeltaV out;
  out.delta = norm_v * std::tan(0.5 * std::atan(2.0 * norm_v / d));
  const double s = norm_v / d;
  out.dist_lower_bound = (2.0 - std::sqrt(1.0 + 4.0 * s * s)) * d;
  return out;
}

// Validity edge of the older diagonal bound: ||V|| < 2/(2+pi) d.
inline double old_diag_validity_ratio() { return 2.0 / (2.0 + M_PI); }

// The older rational bounds these results sharpen:
//   diagonal:       (pi/2) ||V|| / (d - ||V||),          ||V|| < 2/(2+pi) d,
//   off-diagonal:   (pi/2) ||V|| / (d - delta_V),        ||V|| < c_pi d.
inline BoundPrediction old_bound(double norm_v, double d, bool offdiagonal) {
  if (!(d > 0.0) || norm_v < 0.0)
    throw PreconditionError("old_bound: need d > 0 and ||V|| >= 0");
  BoundPrediction out;
  double denom;
  if (offdiagonal) {
    denom = d - norm_v * std::tan(0.5 * std::atan(2.0 * norm_v / d));
    out.valid = norm_v < compute_c_pi().value * d;
  } else {
    denom = d - norm_v;
    out.valid = norm_v < old_diag_validity_ratio() * d;
  }
  out.value = denom > 0.0 ? 0.5 * M_PI * norm_v / denom
                          : std::numeric_limits<double>::infinity();
  out.arcsin_side = std::asin(std::min(out.value, 1.0));
  return out;
}

// Ratio dist(omega, Omega) ||E_A(omega) E_B(Omega)|| / ||A - B|| for Borel
// selections omega from spec(A) and Omega from spec(B). At most pi/2 always,
// at most 1 when the convex hull of the omega selection misses the Omega
// selection. The distance is taken between the selected eigenvalue sets
// (the tightest Borel sets realizing the two projections).
template <class F, class G>
inline double mceachin_ratio(const HermMatrix& a, const HermMatrix& b, F&& omega,
                             G&& omega_big) {
  if (a.dim() != b.dim())
    throw DimensionError("mceachin_ratio: dimension mismatch");
  const EigDecomposition ea = eig_hermitian(a);
  const EigDecomposition eb = eig_hermitian(b);
  std::vector<double> sel_a, sel_b;
  for (double lam : ea.eigenvalues)
    if (omega(lam)) sel_a.push_back(lam);
  for (double lam : eb.eigenvalues)
    if (omega_big(lam)) sel_b.push_back(lam);
  if (sel_a.empty() || sel_b.empty()) return 0.0;

  const double diff = operator_norm(a.mat() - b.mat());
  if (diff == 0.0) return 0.0;  // coinciding operators: defined as 0

  const double dist = detail::cross_distance(sel_a, sel_b);
  if (!(dist > 0.0))
    throw HypothesisError("mceachin_ratio: the selected sets are not disjoint");

  const Projection pa = spectral_projection(a, omega);
  const Projection pb = spectral_projection(b, omega_big);
  return dist * operator_norm(pa.matrix() * pb.matrix()) / diff;
}

}  // namespace projgeom
