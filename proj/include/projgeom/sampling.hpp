#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "projgeom/path.hpp"
#include "projgeom/perturbation.hpp"
#include "projgeom/subspace_pair.hpp"

namespace projgeom {

using Rng = std::mt19937_64;

inline Matrix random_gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    cplx* row = m.row_ptr(i);
    for (int j = 0; j < cols; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      row[j] = cplx(re, im);
    }
  }
  return m;
}

// Random Hermitian matrix; rescaled to the requested operator norm when
// norm_target > 0.
inline HermMatrix random_hermitian(Rng& rng, int n, double norm_target = 0.0) {
  const Matrix g = random_gaussian(rng, n, n);
  Matrix h = 0.5 * (g + g.adjoint());
  if (norm_target > 0.0) {
    const double nrm = operator_norm(h);
    if (nrm > 0.0) h *= norm_target / nrm;
  }
  return HermMatrix(std::move(h), 1e-9);
}

// Haar-ish random unitary: modified Gram-Schmidt on a Gaussian matrix, with
// a second orthogonalization pass for numerical cleanliness.
inline Matrix random_unitary(Rng& rng, int n) {
  Matrix a = random_gaussian(rng, n, n);
  Matrix q(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<cplx> col(n);
    for (int i = 0; i < n; ++i) col[i] = a(i, j);
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) {
        cplx proj = 0.0;
        for (int i = 0; i < n; ++i) proj += std::conj(q(i, k)) * col[i];
        for (int i = 0; i < n; ++i) col[i] -= proj * q(i, k);
      }
    double nrm = 0.0;
    for (const auto& x : col) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) {  // astronomically unlikely; restart the column
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int i = 0; i < n; ++i) col[i] = cplx(gauss(rng), gauss(rng));
      --j;
      continue;
    }
    for (int i = 0; i < n; ++i) q(i, j) = col[i] / nrm;
  }
  return q;
}

inline Projection random_projection(Rng& rng, int n, int rank) {
  if (rank < 0 || rank > n)
    throw PreconditionError("random_projection: rank out of range");
  const Matrix u = random_unitary(rng, n);
  Matrix b(n, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < n; ++i) b(i, j) = u(i, j);
  return Projection::from_orthonormal_columns(b);
}

// A pair of projections with prescribed distance: Q is the graph projection
// of a random X rescaled so that ||X|| = s / sqrt(1 - s^2), which makes
// ||P - Q|| = s exactly (up to roundoff).
struct RandomPair {
  Projection p;
  Projection q;
};

inline RandomPair random_pair_with_distance(Rng& rng, int n, int rank,
                                            double s) {
  if (rank < 1 || rank >= n)
    throw PreconditionError("random_pair_with_distance: need 1 <= rank < n");
  if (!(s >= 0.0 && s < 1.0))
    throw PreconditionError("random_pair_with_distance: need 0 <= s < 1");
  const Matrix u = random_unitary(rng, n);
  Matrix basis_p(n, rank), basis_perp(n, n - rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) basis_p(i, j) = u(i, j);
    for (int j = rank; j < n; ++j) basis_perp(i, j - rank) = u(i, j);
  }
  Matrix x = random_gaussian(rng, n - rank, rank);
  const double nrm = operator_norm(x);
  if (s == 0.0 || nrm == 0.0) {
    x = Matrix::zero(n - rank, rank);
  } else {
    x *= (s / std::sqrt(1.0 - s * s)) / nrm;
  }
  RandomPair out{Projection::from_orthonormal_columns(basis_p),
                 projection_from_graph(x, basis_p, basis_perp)};
  return out;
}

// Hermitian matrix with two spectral clusters separated by exactly d: the
// upper edge of the low cluster is pinned at -d/2 and the lower edge of the
// high cluster at +d/2, the rest spread away from the gap by up to `spread`.
struct GappedOperator {
  HermMatrix a;
  SpectralSplit split;
};

inline GappedOperator random_gapped_hermitian(Rng& rng, int n, int n_lower,
                                              double d, double spread) {
  if (n < 2 || n_lower < 1 || n_lower >= n)
    throw PreconditionError("random_gapped_hermitian: bad cluster sizes");
  if (!(d > 0.0) || spread < 0.0)
    throw PreconditionError("random_gapped_hermitian: need d > 0, spread >= 0");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> lower(n_lower), upper(n - n_lower);
  lower[0] = -0.5 * d;
  for (size_t i = 1; i < lower.size(); ++i)
    lower[i] = -0.5 * d - spread * unif(rng);
  upper[0] = 0.5 * d;
  for (size_t i = 1; i < upper.size(); ++i)
    upper[i] = 0.5 * d + spread * unif(rng);
  std::vector<double> eigs = lower;
  eigs.insert(eigs.end(), upper.begin(), upper.end());
  const Matrix u = random_unitary(rng, n);
  GappedOperator out{assemble_hermitian(u, eigs), make_split(lower, upper)};
  return out;
}

// Hermitian perturbation that is off-diagonal with respect to the spectral
// decomposition of A induced by the split, rescaled to ||V|| = norm_v.
inline HermMatrix random_offdiag_perturbation(Rng& rng, const HermMatrix& a,
                                              const SpectralSplit& split,
                                              double norm_v) {
  if (norm_v < 0.0)
    throw PreconditionError("random_offdiag_perturbation: need ||V|| >= 0");
  const int n = a.dim();
  const EigDecomposition e = eig_hermitian(a);
  std::vector<bool> in_lower(n);
  for (int k = 0; k < n; ++k) {
    const double dlo = detail::dist_to_set(e.eigenvalues[k], split.omega);
    const double dhi = detail::dist_to_set(e.eigenvalues[k], split.omega_big);
    in_lower[k] = dlo < dhi;
  }
  Matrix v_eig(n, n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (in_lower[i] == in_lower[j]) continue;
      const cplx z(gauss(rng), gauss(rng));
      v_eig(i, j) = z;
      v_eig(j, i) = std::conj(z);
    }
  Matrix v = e.eigenvectors * v_eig * e.eigenvectors.adjoint();
  const double nrm = operator_norm(v);
  if (nrm > 0.0 && norm_v > 0.0) {
    v *= norm_v / nrm;
  } else {
    v = Matrix::zero(n, n);
  }
  return HermMatrix(std::move(v), 1e-9);
}

// Piecewise-smooth projection path by one-parameter unitary conjugation:
// gamma(t) = e^{itK} P e^{-itK} with K a random Hermitian of unit norm.
// Velocities are the exact i[K, gamma(t)].
inline ProjectionPath conjugation_path(Rng& rng, int n, int rank, double t_end,
                                       int samples) {
  if (samples < 2)
    throw PreconditionError("conjugation_path: need at least 2 samples");
  if (!(t_end > 0.0))
    throw PreconditionError("conjugation_path: need t_end > 0");
  const HermMatrix k = random_hermitian(rng, n, 1.0);
  const Projection p0 = random_projection(rng, n, rank);
  ProjectionPath path;
  path.times.reserve(samples);
  path.points.reserve(samples);
  path.velocities.reserve(samples);
  for (int j = 0; j < samples; ++j) {
    const double t = t_end * j / (samples - 1);
    const Matrix u = unitary_exp(k, t);
    const Matrix gamma = u * p0.matrix() * u.adjoint();
    path.times.push_back(t);
    path.points.push_back(Projection::round(HermMatrix(gamma, 1e-8)));
    const Matrix comm = k.mat() * gamma - gamma * k.mat();
    path.velocities.push_back(cplx(0.0, 1.0) * comm);
  }
  path.validate();
  return path;
}

}  // namespace projgeom
