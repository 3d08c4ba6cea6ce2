#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "projgeom/subspace_pair.hpp"

namespace projgeom {

// Sampled path of projections. Velocities are optional; when present they
// are matched to the samples and used instead of finite differences.
struct ProjectionPath {
  std::vector<double> times;
  std::vector<Projection> points;
  std::vector<Matrix> velocities;  // empty, or one per sample

  int samples() const { return static_cast<int>(times.size()); }
  bool has_velocity() const { return !velocities.empty(); }

  void validate() const {
    if (times.size() != points.size())
      throw DimensionError("path: times/points size mismatch");
    if (has_velocity() && velocities.size() != points.size())
      throw DimensionError("path: velocities size mismatch");
    if (times.empty()) throw PreconditionError("path: empty");
    const int n = points.front().dim();
    for (size_t j = 0; j < times.size(); ++j) {
      if (points[j].dim() != n) throw DimensionError("path: mixed dimensions");
      if (j > 0 && !(times[j] > times[j - 1]))
        throw PreconditionError("path: times not strictly increasing at index " +
                                std::to_string(j));
    }
    for (size_t j = 0; j + 1 < points.size(); ++j) {
      if (!(distance(points[j], points[j + 1]) < 1.0))
        throw PreconditionError(
            "path: consecutive samples at full distance near t = " +
            std::to_string(times[j]) + "; sampling too coarse");
    }
  }
};

struct LengthReport {
  double polygonal = 0.0;
  std::optional<double> riemannian;
  double endpoints_arcsin = 0.0;
  // Discrete arcsine law. The raw chordal sum can undershoot
  // arcsin||endpoint difference|| on a coarse partition (sin is subadditive),
  // so the check applies arcsin segment-wise: endpoints_arcsin <=
  // sum_j arcsin||gamma(t_{j+1}) - gamma(t_j)|| + 1e-6, the triangle
  // inequality of the length metric. Under refinement the segment sum and
  // the chordal sum converge together, recovering the continuum law.
  bool arcsine_law_ok = true;
};

// Sum of ||gamma(t_{j+1}) - gamma(t_j)||. Nondecreasing under refinement.
inline double polygonal_length(const ProjectionPath& path) {
  path.validate();
  double s = 0.0;
  for (size_t j = 0; j + 1 < path.points.size(); ++j)
    s += distance(path.points[j], path.points[j + 1]);
  return s;
}

namespace detail {

// Speeds ||gamma'(t_j)||: from stored velocities when present, otherwise
// central differences in the interior and one-sided at the ends.
inline std::vector<double> path_speeds(const ProjectionPath& path) {
  const int n = path.samples();
  std::vector<double> sp(n);
  if (path.has_velocity()) {
    for (int j = 0; j < n; ++j) sp[j] = operator_norm(path.velocities[j]);
    return sp;
  }
  if (n < 3)
    throw PreconditionError(
        "riemannian length needs stored velocities or at least 3 samples");
  for (int j = 0; j < n; ++j) {
    const int lo = (j == 0) ? 0 : j - 1;
    const int hi = (j == n - 1) ? n - 1 : j + 1;
    sp[j] = operator_norm(path.points[hi].matrix() - path.points[lo].matrix()) /
            (path.times[hi] - path.times[lo]);
  }
  return sp;
}

}  // namespace detail

// Trapezoid rule over the sampled speed.
inline double riemannian_length(const ProjectionPath& path) {
  path.validate();
  const std::vector<double> sp = detail::path_speeds(path);
  double s = 0.0;
  for (size_t j = 0; j + 1 < sp.size(); ++j)
    s += 0.5 * (sp[j] + sp[j + 1]) * (path.times[j + 1] - path.times[j]);
  return s;
}

/*
 * Geodesic from P to Q for ||P - Q|| < 1, parametrized by arc length on
 * [0, l], l = arcsin||P - Q||.
 *
 * Built in the polar form of the graph operator: X = V tan(Theta) with a
 * partial isometry V and the operator angle Theta, and
 *
 *   gamma(t) = projection_from_graph( V tan(t Theta / l) ).
 *
 * In the frame W = [basis_p | basis_perp] this is the block matrix
 *   [ cos^2(tL)            cos(tL) sin(tL) V* ]      L = Theta / l,
 *   [ V sin(tL) cos(tL)    V sin^2(tL) V*     ]
 * whose derivative in t is
 *   [ -L sin(2tL)          L cos(2tL) V*      ]
 *   [ V L cos(2tL)         V L sin(2tL) V*    ]
 * of constant norm ||L|| = 1: the path has unit speed, so its length is l
 * and the distance between samples is sin|t - s|.
 */
inline ProjectionPath geodesic(const Projection& p, const Projection& q,
                               int samples = 201) {
  if (samples < 2) throw PreconditionError("geodesic: need at least 2 samples");
  const SubspacePair pair = angular_operator(p, q);
  const double l = std::asin(pair.dist);

  ProjectionPath path;
  if (l == 0.0) {  // constant path, a single sample
    path.times = {0.0};
    path.points = {p};
    path.velocities = {Matrix::zero(p.dim(), p.dim())};
    return path;
  }

  const EigDecomposition xe = eig_hermitian(gram(pair.x));  // X*X = Ve diag(mu) Ve*
  std::vector<double> sigma(xe.eigenvalues.size()), ang(xe.eigenvalues.size());
  for (size_t k = 0; k < sigma.size(); ++k) {
    sigma[k] = std::sqrt(std::max(xe.eigenvalues[k], 0.0));
    ang[k] = std::atan(sigma[k]);  // eigenvalues of Theta
  }
  // Partial isometry V with X = V tan(Theta): V = X Ve diag(1/sigma) Ve*,
  // zero on the kernel of Theta.
  std::vector<double> sig_pinv(sigma.size());
  const double sig_floor = 1e-13 * std::max(1.0, sigma.empty() ? 0.0 : sigma.back());
  for (size_t k = 0; k < sigma.size(); ++k)
    sig_pinv[k] = sigma[k] > sig_floor ? 1.0 / sigma[k] : 0.0;
  const Matrix v_iso = pair.x * assemble_hermitian(xe.eigenvectors, sig_pinv).mat();
  const Matrix w = hcat(pair.basis_p, pair.basis_perp);
  const Matrix wadj = w.adjoint();

  path.times.resize(samples);
  path.points.reserve(samples);
  path.velocities.reserve(samples);
  for (int j = 0; j < samples; ++j) {
    const double t = l * static_cast<double>(j) / (samples - 1);
    path.times[j] = t;
    std::vector<double> tan_t(ang.size()), dsin(ang.size()), dcos(ang.size());
    for (size_t k = 0; k < ang.size(); ++k) {
      const double a = ang[k] * t / l;     // t L eigenvalue
      const double rate = ang[k] / l;      // L eigenvalue
      tan_t[k] = std::tan(a);
      dsin[k] = rate * std::sin(2.0 * a);
      dcos[k] = rate * std::cos(2.0 * a);
    }
    const Matrix xt = v_iso * assemble_hermitian(xe.eigenvectors, tan_t).mat();
    path.points.push_back(projection_from_graph(xt, pair.basis_p, pair.basis_perp));
    const Matrix ms = assemble_hermitian(xe.eigenvectors, dsin).mat();
    const Matrix mc = assemble_hermitian(xe.eigenvectors, dcos).mat();
    const Matrix vel_block = detail::block2x2(-ms, mc * v_iso.adjoint(),
                                              v_iso * mc, v_iso * ms * v_iso.adjoint());
    path.velocities.push_back(w * vel_block * wadj);
  }
  return path;
}

// Geodesic metric rho(P, Q) = arcsin||P - Q|| when ||P - Q|| < 1. At the
// boundary the value pi/2 is attainable exactly when the ranks match (in
// finite dimension a connecting path then exists); otherwise only
// rho >= pi/2 is known and the value is flagged as not computed.
struct RhoResult {
  enum class Kind { finite, boundary_equal_rank, boundary_not_computed };
  double value = 0.0;
  Kind kind = Kind::finite;

  bool finite() const { return kind == Kind::finite; }
};

inline RhoResult rho(const Projection& p, const Projection& q) {
  RhoResult out;
  const double d = distance(p, q);
  if (d < 1.0 - detail::kGraphMargin) {
    out.value = std::asin(d);
    out.kind = RhoResult::Kind::finite;
  } else if (p.rank() == q.rank()) {
    out.value = std::asin(1.0);
    out.kind = RhoResult::Kind::boundary_equal_rank;
  } else {
    out.value = std::asin(1.0);  // lower bound only
    out.kind = RhoResult::Kind::boundary_not_computed;
  }
  return out;
}

// Length report for a sampled path: chordal and Riemannian lengths plus the
// arcsine of the endpoint distance, with the law checked (not thrown).
inline LengthReport verify_arcsine_law(const ProjectionPath& path) {
  path.validate();
  LengthReport rep;
  rep.polygonal = polygonal_length(path);
  if (path.has_velocity() || path.samples() >= 3)
    rep.riemannian = riemannian_length(path);
  rep.endpoints_arcsin =
      std::asin(distance(path.points.front(), path.points.back()));
  double metric_sum = 0.0;
  for (size_t j = 0; j + 1 < path.points.size(); ++j)
    metric_sum +=
        std::asin(std::min(1.0, distance(path.points[j], path.points[j + 1])));
  rep.arcsine_law_ok = rep.endpoints_arcsin <= metric_sum + 1e-6;
  return rep;
}

// Largest violation of the velocity inequality
//   ||X'(t)|| <= (1 + ||X_t||^2) ||gamma'(t)||
// over the interior samples, where X_t is the graph operator of gamma(t)
// over gamma(t_0) and X' is taken by central differences. Negative result:
// the inequality holds with that margin. Requires the whole path to stay in
// graph position with respect to its starting point.
inline double velocity_inequality_check(const ProjectionPath& path) {
  path.validate();
  const int n = path.samples();
  if (n < 3)
    throw PreconditionError("velocity_inequality_check: need at least 3 samples");
  std::vector<Matrix> xs(n);
  for (int j = 0; j < n; ++j) {
    try {
      xs[j] = angular_operator(path.points[0], path.points[j]).x;
    } catch (const NotAGraphError&) {
      throw HypothesisError(
          "velocity_inequality_check: graph hypothesis fails at sample " +
          std::to_string(j) + " (t = " + std::to_string(path.times[j]) + ")");
    }
  }
  const std::vector<double> speeds = detail::path_speeds(path);
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 1; j + 1 < n; ++j) {
    const double dt = path.times[j + 1] - path.times[j - 1];
    const double xdot = operator_norm(xs[j + 1] - xs[j - 1]) / dt;
    const double xn = operator_norm(xs[j]);
    worst = std::max(worst, xdot - (1.0 + xn * xn) * speeds[j]);
  }
  return worst;
}

}  // namespace projgeom
