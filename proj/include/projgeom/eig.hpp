#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "projgeom/matrix.hpp"

namespace projgeom {

// H = V diag(eigenvalues) V*, eigenvalues ascending, V unitary with
// eigenvectors in the columns.
struct EigDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

namespace detail {

inline double offdiag_frobenius(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p,q). The 2x2 pivot block
// [[app, b e^{if}], [b e^{-if}, aqq]] is first dephased to a real symmetric
// block, then rotated; the combined unitary has columns
//   (c, s e^{-if})  and  (-s, c e^{-if}).
inline void jacobi_rotate(Matrix& a, Matrix& v, int p, int q) {
  const cplx apq = a(p, q);
  const double b = std::abs(apq);
  if (b == 0.0) return;
  const cplx phase = apq / b;                    // e^{if}
  const cplx phc = std::conj(phase);             // e^{-if}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double zeta = (aqq - app) / (2.0 * b);
  // smaller-magnitude root of t^2 - 2 zeta t - 1 = 0
  const double t = (zeta >= 0.0) ? -1.0 / (zeta + std::sqrt(1.0 + zeta * zeta))
                                 : 1.0 / (-zeta + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const int n = a.rows();
  for (int i = 0; i < n; ++i) {
    if (i == p || i == q) continue;
    const cplx aip = a(i, p);
    const cplx aiq = a(i, q);
    const cplx new_ip = c * aip + s * phc * aiq;
    const cplx new_iq = -s * aip + c * phc * aiq;
    a(i, p) = new_ip;
    a(p, i) = std::conj(new_ip);
    a(i, q) = new_iq;
    a(q, i) = std::conj(new_iq);
  }
  a(p, p) = app + t * b;
  a(q, q) = aqq - t * b;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (int i = 0; i < n; ++i) {
    const cplx vip = v(i, p);
    const cplx viq = v(i, q);
    v(i, p) = c * vip + s * phc * viq;
    v(i, q) = -s * vip + c * phc * viq;
  }
}

}  // namespace detail

// Cyclic Jacobi for complex Hermitian matrices. Stops once the off-diagonal
// Frobenius mass falls below 1e-13 * ||H||_F; throws ConvergenceError with
// the residual after 100 sweeps. Deterministic: fixed sweep order, stable
// eigenvalue sort.
inline EigDecomposition eig_hermitian(const HermMatrix& h) {
  const int n = h.dim();
  Matrix a = h.mat();
  Matrix v = Matrix::identity(n);
  const double scale = a.frobenius_norm();
  EigDecomposition out;
  out.eigenvalues.resize(n);

  if (scale > 0.0) {
    const double stop = 1e-13 * scale;
    const int max_sweeps = 100;
    bool converged = false;
    double off = 0.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      off = detail::offdiag_frobenius(a);
      if (off <= stop) {
        converged = true;
        break;
      }
      for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    }
    if (!converged && detail::offdiag_frobenius(a) > stop)
      throw ConvergenceError(
          "jacobi eigensolver did not converge in 100 sweeps; off-diagonal "
          "residual " +
          std::to_string(detail::offdiag_frobenius(a)) + " vs threshold " +
          std::to_string(stop));
  }

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  Matrix vec(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(idx[j], idx[j]).real();
    for (int i = 0; i < n; ++i) vec(i, j) = v(i, idx[j]);
  }
  out.eigenvectors = std::move(vec);
  return out;
}

// V diag(d) V* as an exactly Hermitian matrix.
inline HermMatrix assemble_hermitian(const Matrix& v, const std::vector<double>& d) {
  const int n = v.rows();
  if (v.cols() != static_cast<int>(d.size()))
    throw DimensionError("assemble_hermitian: size mismatch");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      cplx acc(0.0, 0.0);
      for (int k = 0; k < v.cols(); ++k)
        acc += v(i, k) * d[k] * std::conj(v(j, k));
      m(i, j) = acc;
      m(j, i) = std::conj(acc);
    }
    m(i, i) = cplx(m(i, i).real(), 0.0);
  }
  return HermMatrix(std::move(m), 1e-6);
}

}  // namespace projgeom
