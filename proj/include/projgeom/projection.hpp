#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "projgeom/matfunc.hpp"

namespace projgeom {

// Orthogonal projection, stored dense together with its rank. Instances are
// produced either from an orthonormal basis of the range or by spectral
// rounding of a nearly idempotent Hermitian matrix; both paths record how
// much rounding was needed so degraded inputs stay visible.
class Projection {
 public:
  Projection() = default;

  // P = B B* for B with orthonormal columns (checked).
  static Projection from_orthonormal_columns(const Matrix& b) {
    const HermMatrix g = gram(b);
    double dev = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j)
        dev = std::max(dev, std::abs(g(i, j) - (i == j ? cplx(1.0) : cplx(0.0))));
    if (dev > 1e-10)
      throw PreconditionError("from_orthonormal_columns: columns are not "
                              "orthonormal, deviation " + std::to_string(dev));
    Projection p;
    p.p_ = outer_self(b);
    p.rank_ = b.cols();
    p.snap_defect_ = 0.0;
    return p;
  }

  // Snap a Hermitian matrix to the nearest projection: eigenvalues below 1/2
  // go to 0, the rest to 1. The spectral distance moved is recorded as
  // snap_defect; callers decide whether a large correction is acceptable.
  static Projection round(const HermMatrix& h) {
    EigDecomposition e = eig_hermitian(h);
    const int n = h.dim();
    int rank = 0;
    double defect = 0.0;
    std::vector<int> keep;
    for (int k = 0; k < n; ++k) {
      const double lam = e.eigenvalues[k];
      if (lam >= 0.5) {
        keep.push_back(k);
        ++rank;
        defect = std::max(defect, std::abs(lam - 1.0));
      } else {
        defect = std::max(defect, std::abs(lam));
      }
    }
    Matrix b(n, rank);
    for (int j = 0; j < rank; ++j)
      for (int i = 0; i < n; ++i) b(i, j) = e.eigenvectors(i, keep[j]);
    Projection p;
    p.p_ = outer_self(b);
    p.rank_ = rank;
    p.snap_defect_ = defect;
    return p;
  }

  const Matrix& matrix() const { return p_; }
  int dim() const { return p_.rows(); }
  int rank() const { return rank_; }
  double snap_defect() const { return snap_defect_; }

  Matrix complement() const { return Matrix::identity(dim()) - p_; }

  // ||P^2 - P||, for diagnostics.
  double idempotency_defect() const { return operator_norm(p_ * p_ - p_); }

  // Orthonormal eigenbasis split into range and kernel parts, columns
  // ordered by eigenvalue descending (range first), ties by eigensolver
  // output index. basis() = [basis_p | basis_perp] is unitary.
  struct Basis {
    Matrix range;   // dim x rank
    Matrix kernel;  // dim x (dim - rank)
  };

  Basis eigenbasis() const {
    EigDecomposition e = eig_hermitian(HermMatrix(p_, 1e-8));
    const int n = dim();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return e.eigenvalues[a] > e.eigenvalues[b];
    });
    Basis out;
    out.range = Matrix(n, rank_);
    out.kernel = Matrix(n, n - rank_);
    for (int j = 0; j < n; ++j) {
      const int src = order[j];
      if (j < rank_) {
        for (int i = 0; i < n; ++i) out.range(i, j) = e.eigenvectors(i, src);
      } else {
        for (int i = 0; i < n; ++i) out.kernel(i, j - rank_) = e.eigenvectors(i, src);
      }
    }
    return out;
  }

 private:
  static Matrix outer_self(const Matrix& b) {
    const int n = b.rows();
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        cplx acc(0.0, 0.0);
        for (int k = 0; k < b.cols(); ++k) acc += b(i, k) * std::conj(b(j, k));
        p(i, j) = acc;
        p(j, i) = std::conj(acc);
      }
      p(i, i) = cplx(p(i, i).real(), 0.0);
    }
    return p;
  }

  Matrix p_;
  int rank_ = 0;
  double snap_defect_ = 0.0;
};

// Projection onto the span of the given columns. Columns are orthonormalized
// by modified Gram-Schmidt; a column whose residual drops below 1e-12 of its
// original length is dependent and is dropped, so the rank is the number of
// survivors.
inline Projection project_onto_span(const Matrix& columns) {
  if (columns.empty()) throw DimensionError("project_onto_span: empty input");
  const int n = columns.rows();
  std::vector<std::vector<cplx>> basis;
  for (int j = 0; j < columns.cols(); ++j) {
    std::vector<cplx> v(n);
    double orig = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = columns(i, j);
      orig += std::norm(v[i]);
    }
    orig = std::sqrt(orig);
    if (orig == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {  // two MGS passes for orthogonality
      for (const auto& b : basis) {
        cplx c(0.0, 0.0);
        for (int i = 0; i < n; ++i) c += std::conj(b[i]) * v[i];
        for (int i = 0; i < n; ++i) v[i] -= c * b[i];
      }
    }
    double rem = 0.0;
    for (int i = 0; i < n; ++i) rem += std::norm(v[i]);
    rem = std::sqrt(rem);
    if (rem <= 1e-12 * orig) continue;
    for (int i = 0; i < n; ++i) v[i] /= rem;
    basis.push_back(std::move(v));
  }
  Matrix b(n, static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j)
    for (int i = 0; i < n; ++i) b(i, static_cast<int>(j)) = basis[j][i];
  return Projection::from_orthonormal_columns(b);
}

// ||P - Q||. Always in [0, 1] for projections; the result is checked against
// that range at tolerance 1e-10 and clamped onto it.
inline double distance(const Projection& p, const Projection& q) {
  if (p.dim() != q.dim())
    throw DimensionError("distance: dimension mismatch " +
                         std::to_string(p.dim()) + " vs " + std::to_string(q.dim()));
  const double d = operator_norm(p.matrix() - q.matrix());
  if (d > 1.0 + 1e-10)
    throw InvariantError("distance: ||P-Q|| = " + std::to_string(d) +
                         " exceeds 1 beyond tolerance");
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace projgeom
