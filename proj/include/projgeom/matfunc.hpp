#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "projgeom/eig.hpp"

namespace projgeom {

// f(H) through the spectral decomposition. f must be finite at every
// eigenvalue; otherwise a DomainError naming the offending eigenvalue is
// thrown.
template <class F>
inline HermMatrix matrix_function(const HermMatrix& h, F&& f) {
  EigDecomposition e = eig_hermitian(h);
  std::vector<double> fd(e.eigenvalues.size());
  for (size_t k = 0; k < e.eigenvalues.size(); ++k) {
    const double y = f(e.eigenvalues[k]);
    if (!std::isfinite(y))
      throw DomainError("matrix_function: f undefined at eigenvalue " +
                        std::to_string(e.eigenvalues[k]));
    fd[k] = y;
  }
  return assemble_hermitian(e.eigenvectors, fd);
}

// Largest singular value, computed exactly as the square root of the top
// eigenvalue of the smaller Gram matrix. Exact and deterministic at the
// desk scales this library targets; use power_operator_norm for the big
// truncations in the Fourier model.
inline double operator_norm(const Matrix& m) {
  if (m.empty()) return 0.0;
  const HermMatrix g = (m.rows() < m.cols()) ? gram(m.adjoint()) : gram(m);
  const EigDecomposition e = eig_hermitian(g);
  return std::sqrt(std::max(e.eigenvalues.back(), 0.0));
}

inline double operator_norm(const HermMatrix& h) { return operator_norm(h.mat()); }

namespace detail {

inline std::pair<EigDecomposition, double> checked_psd_eig(const HermMatrix& h,
                                                           const char* who) {
  EigDecomposition e = eig_hermitian(h);
  const double top = e.eigenvalues.empty()
                         ? 0.0
                         : std::max(std::abs(e.eigenvalues.front()),
                                    std::abs(e.eigenvalues.back()));
  const double tol = 1e-12 * std::max(1.0, top);
  if (!e.eigenvalues.empty() && e.eigenvalues.front() < -tol)
    throw NotPsdError(std::string(who) + ": negative eigenvalue " +
                      std::to_string(e.eigenvalues.front()));
  return {std::move(e), top};
}

}  // namespace detail

// Principal square root of a positive semidefinite matrix. Eigenvalues in
// [-1e-12 * ||H||, 0) are treated as rounding noise and clamped to zero.
inline HermMatrix sqrt_psd(const HermMatrix& h) {
  auto [e, top] = detail::checked_psd_eig(h, "sqrt_psd");
  std::vector<double> d(e.eigenvalues.size());
  for (size_t k = 0; k < d.size(); ++k)
    d[k] = std::sqrt(std::max(e.eigenvalues[k], 0.0));
  return assemble_hermitian(e.eigenvectors, d);
}

// H^{-1/2} for strictly positive definite H (min eigenvalue > 1e-12 * ||H||).
inline HermMatrix inv_sqrt_psd(const HermMatrix& h) {
  auto [e, top] = detail::checked_psd_eig(h, "inv_sqrt_psd");
  const double floor = 1e-12 * std::max(1.0, top);
  std::vector<double> d(e.eigenvalues.size());
  for (size_t k = 0; k < d.size(); ++k) {
    if (e.eigenvalues[k] <= floor)
      throw SingularError("inv_sqrt_psd: eigenvalue " +
                          std::to_string(e.eigenvalues[k]) +
                          " below invertibility floor");
    d[k] = 1.0 / std::sqrt(e.eigenvalues[k]);
  }
  return assemble_hermitian(e.eigenvectors, d);
}

// H^{-1}, same positivity requirement as inv_sqrt_psd.
inline HermMatrix inv_pd(const HermMatrix& h) {
  auto [e, top] = detail::checked_psd_eig(h, "inv_pd");
  const double floor = 1e-12 * std::max(1.0, top);
  std::vector<double> d(e.eigenvalues.size());
  for (size_t k = 0; k < d.size(); ++k) {
    if (e.eigenvalues[k] <= floor)
      throw SingularError("inv_pd: eigenvalue " + std::to_string(e.eigenvalues[k]) +
                          " below invertibility floor");
    d[k] = 1.0 / e.eigenvalues[k];
  }
  return assemble_hermitian(e.eigenvectors, d);
}

// e^{itH}, unitary for Hermitian H.
inline Matrix unitary_exp(const HermMatrix& h, double t) {
  EigDecomposition e = eig_hermitian(h);
  const int n = h.dim();
  Matrix m(n, n);
  std::vector<cplx> ph(n);
  for (int k = 0; k < n; ++k)
    ph[k] = std::exp(cplx(0.0, t * e.eigenvalues[k]));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx acc(0.0, 0.0);
      for (int k = 0; k < n; ++k)
        acc += e.eigenvectors(i, k) * ph[k] * std::conj(e.eigenvectors(j, k));
      m(i, j) = acc;
    }
  return m;
}

}  // namespace projgeom
