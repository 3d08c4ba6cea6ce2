#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "projgeom/errors.hpp"

namespace projgeom {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. Everything in this library is small and
// dense; clarity beats cleverness here.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  // Row-of-rows construction, mostly for tests and small fixtures.
  Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    a_.resize(static_cast<size_t>(rows_) * cols_);
    int i = 0;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_)
        throw DimensionError("ragged initializer for Matrix");
      int j = 0;
      for (const cplx& v : r) (*this)(i, j++) = v;
      ++i;
    }
  }

  static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const std::vector<double>& d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  const cplx* row_ptr(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }
  cplx* row_ptr(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }

  Matrix adjoint() const {
    Matrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o, "+=");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o, "-=");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= cplx(s, 0.0); }
  friend Matrix operator*(double s, Matrix a) { return a *= cplx(s, 0.0); }
  friend Matrix operator-(Matrix a) { return a *= cplx(-1.0, 0.0); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("matrix product shape mismatch: " + a.shape_str() +
                           " * " + b.shape_str());
    Matrix c(a.rows_, b.cols_);
    // ikj order keeps the inner loops on contiguous rows.
    for (int i = 0; i < a.rows_; ++i) {
      cplx* ci = c.row_ptr(i);
      for (int k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx(0.0, 0.0)) continue;
        const cplx* bk = b.row_ptr(k);
        for (int j = 0; j < b.cols_; ++j) ci[j] += aik * bk[j];
      }
    }
    return c;
  }

  // y = M v
  std::vector<cplx> apply(const std::vector<cplx>& v) const {
    if (static_cast<int>(v.size()) != cols_)
      throw DimensionError("apply: vector length mismatch");
    std::vector<cplx> y(rows_);
    for (int i = 0; i < rows_; ++i) {
      const cplx* r = row_ptr(i);
      cplx acc(0.0, 0.0);
      for (int j = 0; j < cols_; ++j) acc += r[j] * v[j];
      y[i] = acc;
    }
    return y;
  }

  // y = M* v, scanning rows so memory access stays contiguous.
  std::vector<cplx> apply_adjoint(const std::vector<cplx>& v) const {
    if (static_cast<int>(v.size()) != rows_)
      throw DimensionError("apply_adjoint: vector length mismatch");
    std::vector<cplx> y(cols_);
    for (int i = 0; i < rows_; ++i) {
      const cplx* r = row_ptr(i);
      const cplx vi = v[i];
      for (int j = 0; j < cols_; ++j) y[j] += std::conj(r[j]) * vi;
    }
    return y;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (const auto& v : a_) s = std::max(s, std::abs(v));
    return s;
  }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void check_same_shape(const Matrix& o, const char* op) const {
    if (!same_shape(o))
      throw DimensionError(std::string("shape mismatch in ") + op + ": " +
                           shape_str() + " vs " + o.shape_str());
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

inline Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hcat: row count mismatch");
  Matrix m(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

// max_ij |M - M*|_ij, a cheap hermiticity measure used by loaders.
inline double hermiticity_defect(const Matrix& m) {
  if (!m.square()) throw DimensionError("hermiticity_defect needs a square matrix");
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j)
      s = std::max(s, std::abs(m(i, j) - std::conj(m(j, i))));
  return s;
}

// Hermitian matrix. Construction symmetrizes (M + M*)/2 so the invariant
// entries[i][j] == conj(entries[j][i]) holds exactly afterwards; input that
// is not Hermitian to within 1e-12 (relative to its magnitude) is rejected
// rather than silently averaged away.
class HermMatrix {
 public:
  HermMatrix() = default;

  explicit HermMatrix(Matrix m, double reject_tol = 1e-12) : m_(std::move(m)) {
    if (!m_.square()) throw DimensionError("HermMatrix needs a square matrix");
    const double defect = hermiticity_defect(m_);
    if (defect > reject_tol * (1.0 + m_.max_abs()))
      throw PreconditionError("matrix is not Hermitian: defect " +
                              std::to_string(defect));
    for (int i = 0; i < m_.rows(); ++i) {
      m_(i, i) = cplx(m_(i, i).real(), 0.0);
      for (int j = i + 1; j < m_.cols(); ++j) {
        const cplx v = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
        m_(i, j) = v;
        m_(j, i) = std::conj(v);
      }
    }
  }

  static HermMatrix diagonal(const std::vector<double>& d) {
    return HermMatrix(Matrix::diagonal(d));
  }

  static HermMatrix zero(int n) { return HermMatrix(Matrix::zero(n, n)); }
  static HermMatrix identity(int n) { return HermMatrix(Matrix::identity(n)); }

  int dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  const cplx& operator()(int i, int j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.frobenius_norm(); }

 private:
  Matrix m_;
};

// A* A, exactly Hermitian by construction (upper triangle computed, lower
// mirrored), with contiguous row scans over the adjoint.
inline HermMatrix gram(const Matrix& a) {
  const Matrix at = a.adjoint();  // rows of at are the conjugated columns of a
  const int r = at.rows();
  const int n = at.cols();
  Matrix g(r, r);
  for (int i = 0; i < r; ++i) {
    const cplx* ri = at.row_ptr(i);
    for (int j = i; j < r; ++j) {
      const cplx* rj = at.row_ptr(j);
      cplx acc(0.0, 0.0);
      for (int k = 0; k < n; ++k) acc += ri[k] * std::conj(rj[k]);
      g(i, j) = acc;
      g(j, i) = std::conj(acc);
    }
    g(i, i) = cplx(g(i, i).real(), 0.0);
  }
  return HermMatrix(std::move(g), 1e-9);
}

// Cholesky factor L (lower triangular, LL* = H) of a positive definite
// Hermitian matrix. Throws NotPsdError when a pivot fails.
inline Matrix cholesky(const HermMatrix& h) {
  const int n = h.dim();
  Matrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0))
      throw NotPsdError("cholesky: nonpositive pivot at index " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = h(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

// Solve L L* x = b given the Cholesky factor.
inline std::vector<cplx> cholesky_solve(const Matrix& l, std::vector<cplx> b) {
  const int n = l.rows();
  if (static_cast<int>(b.size()) != n)
    throw DimensionError("cholesky_solve: vector length mismatch");
  for (int i = 0; i < n; ++i) {  // forward: L y = b
    cplx s = b[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {  // backward: L* x = y
    cplx s = b[i];
    for (int k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * b[k];
    b[i] = s / l(i, i).real();
  }
  return b;
}

// L^{-1} B for a lower-triangular L (multi-column forward substitution).
inline Matrix forward_solve(const Matrix& l, const Matrix& b) {
  const int n = l.rows();
  if (b.rows() != n)
    throw DimensionError("forward_solve: row count mismatch");
  Matrix x = b;
  const int w = x.cols();
  for (int i = 0; i < n; ++i) {
    cplx* xi = x.row_ptr(i);
    for (int k = 0; k < i; ++k) {
      const cplx lik = l(i, k);
      if (lik == cplx(0.0, 0.0)) continue;
      const cplx* xk = x.row_ptr(k);
      for (int j = 0; j < w; ++j) xi[j] -= lik * xk[j];
    }
    const cplx d = l(i, i);
    for (int j = 0; j < w; ++j) xi[j] /= d;
  }
  return x;
}

namespace detail {

// Deterministic start vector for power iterations: all ones with a small
// index-dependent ripple so symmetric structures cannot hide the top space.
inline std::vector<cplx> power_start(int n) {
  std::vector<cplx> v(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = cplx(1.0 + 1e-3 * ((i % 7) - 3), 1e-4 * (i % 5));
    s += std::norm(v[i]);
  }
  s = std::sqrt(s);
  for (auto& x : v) x /= s;
  return v;
}

inline double vec_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace detail

// Largest singular value by power iteration on M*M. Deterministic: fixed
// start vector, fixed stopping rule. The Rayleigh quotient climbs
// monotonically, so a small relative step change means the remaining gap is
// of the same order. Intended for matrices too large for the dense
// eigensolver; operator_norm (matfunc.hpp) is exact at small sizes.
inline double power_operator_norm(const Matrix& m, double tol = 1e-13,
                                  int max_iter = 20000) {
  if (m.empty()) return 0.0;
  std::vector<cplx> v = detail::power_start(m.cols());
  double s2 = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<cplx> u = m.apply_adjoint(m.apply(v));  // u = M*M v
    double rq = 0.0;  // <v, u> is real for Hermitian M*M
    for (size_t k = 0; k < u.size(); ++k)
      rq += (std::conj(v[k]) * u[k]).real();
    const double nu = detail::vec_norm(u);
    if (nu == 0.0) return 0.0;
    for (auto& x : u) x /= nu;
    v = std::move(u);
    if (it > 0 && std::abs(rq - s2) <= tol * std::max(1.0, std::abs(rq))) {
      s2 = rq;
      break;
    }
    s2 = rq;
  }
  return std::sqrt(std::max(s2, 0.0));
}

}  // namespace projgeom
