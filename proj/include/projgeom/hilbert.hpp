#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "projgeom/eig.hpp"
#include "projgeom/matfunc.hpp"
#include "projgeom/projection.hpp"

namespace projgeom {

/*
 * Finite Fourier model on L2(-1,1) with orthonormal basis
 *   e_k(x) = e^{i pi k x} / sqrt(2),   k = -n..n.
 * The operators modeled here:
 *   U_t   multiplication by e^{2itx}; matrix entries are sinc values,
 *         (U_t)_{mk} = (1/2) int_{-1}^{1} e^{i((k-m)pi + 2t)x} dx
 *                    = sinc((k-m)pi + 2t),
 *         exactly unitary only in the untruncated limit;
 *   P     the projection onto even-k harmonics (a 0/1 diagonal selector);
 *   x^    multiplication by x; entries i(-1)^{j+1}/(j pi) for j = k-m != 0.
 * The conjugated family U_t P U_t* rotates the even-harmonic subspace at
 * unit speed; its distance from P tends to sin t as n grows.
 */
struct FourierModel {
  int n = 0;

  explicit FourierModel(int order) : n(order) {
    if (order < 1)
      throw PreconditionError("FourierModel: truncation order must be >= 1");
  }
  int dim() const { return 2 * n + 1; }
  // row/column index i corresponds to harmonic k = i - n
  bool even_index(int i) const { return (i - n) % 2 == 0; }
  int even_count() const { return 2 * (n / 2) + 1; }
};

namespace detail {

inline double sinc(double z) {
  return std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
}

// Smallest eigenvalue of a positive semidefinite Hermitian matrix by inverse
// iteration: a plain phase to land near the bottom of the spectrum, then a
// shifted phase that makes the bottom eigenvalue dominant by orders of
// magnitude. Returns 0 when the matrix is numerically singular.
inline double smallest_eig_psd(const HermMatrix& h) {
  const int n = h.dim();
  Matrix l(0, 0);
  try {
    l = cholesky(h);
  } catch (const NotPsdError&) {
    return 0.0;
  }
  std::vector<cplx> v = power_start(n);
  auto rayleigh = [&](const std::vector<cplx>& w) {
    const std::vector<cplx> hw = h.mat().apply(w);
    double r = 0.0;
    for (int i = 0; i < n; ++i) r += (std::conj(w[i]) * hw[i]).real();
    return r;
  };
  double est = rayleigh(v);
  for (int it = 0; it < 120; ++it) {
    v = cholesky_solve(l, v);
    const double nv = vec_norm(v);
    if (nv == 0.0) return 0.0;
    for (auto& x : v) x /= nv;
    const double r = rayleigh(v);
    if (it > 4 && std::abs(r - est) <= 1e-11 * std::max(1.0, std::abs(r))) {
      est = r;
      break;
    }
    est = r;
  }
  // est >= lambda_min; push the shift below the target until the shifted
  // matrix is positive definite, then polish.
  for (double margin : {1e-4, 1e-3, 1e-2, 1e-1, 0.5}) {
    const double sigma = est * (1.0 - margin);
    if (!(sigma > 0.0)) break;
    Matrix shifted = h.mat();
    for (int i = 0; i < n; ++i) shifted(i, i) -= sigma;
    Matrix ls(0, 0);
    try {
      ls = cholesky(HermMatrix(std::move(shifted), 1e-9));
    } catch (const NotPsdError&) {
      continue;
    }
    for (int it = 0; it < 60; ++it) {
      v = cholesky_solve(ls, v);
      const double nv = vec_norm(v);
      if (nv == 0.0) return 0.0;
      for (auto& x : v) x /= nv;
    }
    return rayleigh(v);
  }
  return est;
}

}  // namespace detail

inline Matrix u_t_matrix(const FourierModel& model, double t) {
  const int d = model.dim();
  Matrix u(d, d);
  for (int im = 0; im < d; ++im) {
    cplx* row = u.row_ptr(im);
    for (int ik = 0; ik < d; ++ik)
      row[ik] = detail::sinc((ik - im) * M_PI + 2.0 * t);
  }
  return u;
}

// How far the truncated U_t is from unitary. The operator norm of U*U - I
// stays O(1) in n (the outermost harmonics always leak past the window), so
// the dimension-normalized Frobenius defect is reported alongside it as the
// measure that actually decays.
struct UnitarityDefect {
  double op_norm = 0.0;
  double frobenius_normalized = 0.0;
};

inline UnitarityDefect u_t_unitarity_defect(const FourierModel& model, double t) {
  const Matrix u = u_t_matrix(model, t);
  Matrix d = gram(u).mat();
  for (int i = 0; i < d.rows(); ++i) d(i, i) -= 1.0;
  UnitarityDefect out;
  out.op_norm = power_operator_norm(d, 1e-13, 4000);
  out.frobenius_normalized = d.frobenius_norm() / std::sqrt(double(model.dim()));
  return out;
}

inline Projection even_projection(const FourierModel& model) {
  const int d = model.dim();
  Matrix b(d, model.even_count());
  int col = 0;
  for (int i = 0; i < d; ++i)
    if (model.even_index(i)) b(i, col++) = 1.0;
  return Projection::from_orthonormal_columns(b);
}

// Multiplication by x in the Fourier basis:
//   (x^)_{mk} = (1/2) int_{-1}^{1} x e^{i(k-m)pi x} dx
//             = i (-1)^{j+1} / (j pi) for j = k-m != 0, and 0 on the diagonal.
inline Matrix position_matrix(const FourierModel& model) {
  const int d = model.dim();
  Matrix x(d, d);
  for (int im = 0; im < d; ++im) {
    cplx* row = x.row_ptr(im);
    for (int ik = 0; ik < d; ++ik) {
      const int j = ik - im;
      if (j == 0) continue;
      const double sign = (j % 2 == 0) ? -1.0 : 1.0;  // (-1)^{j+1}
      row[ik] = cplx(0.0, sign / (j * M_PI));
    }
  }
  return x;
}

// || [2 x^, P] || on the truncated model; tends to 1 as n grows.
inline double commutator_norm_check(const FourierModel& model) {
  const Matrix x = position_matrix(model);
  const int d = model.dim();
  Matrix p(d, d);
  for (int i = 0; i < d; ++i)
    if (model.even_index(i)) p(i, i) = 1.0;
  const Matrix k = 2.0 * (x * p - p * x);
  return power_operator_norm(k, 1e-13, 4000);
}

/*
 * Deviation of the conjugated projection path from its infinite-dimensional
 * geodesic law. C = U_t P U_t* = G G* with G the even columns of U_t; since
 * truncation makes C only approximately idempotent, it is rounded to the
 * projection onto Range(G) - the rank-preserving spectral rounding. (The
 * boundary harmonics keep one eigenvalue of G*G near 0.36 at every n, so a
 * "nearest projection" cut at 1/2 would drop the rank and report distance 1
 * forever; preserving the rank is what converges.) Then
 *   actual    = ||P_t - P|| via principal angles: with B = G L^{-*} an
 *               orthonormal basis (L the Cholesky factor of G*G) and W the
 *               even rows of B, actual = sqrt(1 - lambda_min(W*W));
 *   predicted = sin t;
 *   defect    = max |spec(C) \ {0}  - 1| = ||G*G - I||, the truncation
 *               damage the rounding repaired.
 * When G*G is singular (t = pi/2 turns U_t into a shift that annihilates the
 * top harmonic) the eigendecomposition route is used and a genuine rank drop
 * reports actual = 1.
 */
struct PathDeviation {
  double actual = 0.0;
  double predicted = 0.0;
  double defect = 0.0;
};

inline PathDeviation projection_path_deviation(const FourierModel& model,
                                               double t) {
  if (!(t >= 0.0 && t <= 0.5 * M_PI + 1e-12))
    throw DomainError("projection_path_deviation: t must lie in [0, pi/2]");
  PathDeviation out;
  out.predicted = std::sin(t);

  const int d = model.dim();
  const int r = model.even_count();
  const Matrix u = u_t_matrix(model, t);
  Matrix g(d, r);
  {
    int col = 0;
    for (int ik = 0; ik < d; ++ik) {
      if (!model.even_index(ik)) continue;
      for (int im = 0; im < d; ++im) g(im, col) = u(im, ik);
      ++col;
    }
  }
  const HermMatrix h = gram(g);

  try {
    const Matrix l = cholesky(h);
    Matrix ge(r, r);  // even rows of G
    {
      int row = 0;
      for (int im = 0; im < d; ++im) {
        if (!model.even_index(im)) continue;
        for (int j = 0; j < r; ++j) ge(row, j) = g(im, j);
        ++row;
      }
    }
    // W = G_e L^{-*}; lambda(W*W) are the squared cosines of the principal
    // angles between Range(P) and Range(G).
    const Matrix wadj = forward_solve(l, ge.adjoint());
    const double cos2 = detail::smallest_eig_psd(gram(wadj.adjoint()));
    out.actual = std::sqrt(std::max(0.0, 1.0 - std::min(cos2, 1.0)));

    Matrix dev = h.mat();
    for (int i = 0; i < r; ++i) dev(i, i) -= 1.0;
    out.defect = power_operator_norm(dev, 1e-13, 4000);
  } catch (const NotPsdError&) {
    const EigDecomposition e = eig_hermitian(h);
    const double top = std::max(e.eigenvalues.back(), 0.0);
    const double cut = 1e-10 * std::max(top, 1.0);
    std::vector<int> keep;
    double defect = 0.0;
    for (int k = 0; k < r; ++k) {
      if (e.eigenvalues[k] > cut) {
        keep.push_back(k);
        defect = std::max(defect, std::abs(e.eigenvalues[k] - 1.0));
      } else {
        defect = std::max(defect, std::abs(e.eigenvalues[k]));
      }
    }
    out.defect = defect;
    const int rq = static_cast<int>(keep.size());
    if (rq != r) {
      out.actual = 1.0;  // rank drop: a whole direction was lost
      return out;
    }
    Matrix bq(d, rq);  // columns G v_k / sqrt(lambda_k), orthonormal
    for (int c = 0; c < rq; ++c) {
      const int k = keep[c];
      const double scale = 1.0 / std::sqrt(e.eigenvalues[k]);
      for (int im = 0; im < d; ++im) {
        cplx acc = 0.0;
        for (int j = 0; j < r; ++j) acc += g(im, j) * e.eigenvectors(j, k);
        bq(im, c) = acc * scale;
      }
    }
    Matrix w(r, rq);
    {
      int row = 0;
      for (int im = 0; im < d; ++im) {
        if (!model.even_index(im)) continue;
        for (int c = 0; c < rq; ++c) w(row, c) = bq(im, c);
        ++row;
      }
    }
    const double cos2 = detail::smallest_eig_psd(gram(w));
    out.actual = std::sqrt(std::max(0.0, 1.0 - std::min(cos2, 1.0)));
  }
  return out;
}

// Truncated regularized discrete Hilbert transform: the (2m+1) x (2m+1)
// Toeplitz matrix with entries 1/(j-k+p), indices j,k = -m..m.
struct ToeplitzHp {
  double p = 0.5;
  int m = 1;

  ToeplitzHp(double p_, int m_) : p(p_), m(m_) {
    if (!(p > 0.0 && p < 1.0))
      throw PreconditionError("ToeplitzHp: p must lie in (0,1)");
    if (m < 1) throw PreconditionError("ToeplitzHp: m must be >= 1");
  }
  int dim() const { return 2 * m + 1; }
};

inline Matrix toeplitz_matrix(const ToeplitzHp& hp) {
  const int d = hp.dim();
  Matrix h(d, d);
  for (int j = 0; j < d; ++j) {
    cplx* row = h.row_ptr(j);
    for (int k = 0; k < d; ++k) row[k] = 1.0 / (j - k + hp.p);
  }
  return h;
}

inline double hilbert_norm_limit(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("hilbert_norm_limit: p must lie in (0,1)");
  return M_PI / std::sin(M_PI * p);
}

/*
 * Operator norm of the Toeplitz truncation by power iteration on H*H,
 * applied through the convolution kernel (no dense matrix is formed). The
 * Rayleigh estimates ||H v_k|| climb monotonically, so the returned value is
 * a lower bound on the true norm. The singular values of H_p cluster toward
 * pi/sin(pi p) exponentially fast in m, which caps the practically reachable
 * accuracy of any power method near 1e-3 relative; hilbert_norm_exact is the
 * dense-eigensolver evaluation for small m where tighter accuracy is needed.
 */
inline double hilbert_norm(const ToeplitzHp& hp, int max_iter = 300,
                           double tol = 1e-13) {
  const int d = hp.dim();
  std::vector<double> kern(2 * d - 1);
  for (int s = 0; s < 2 * d - 1; ++s) kern[s] = 1.0 / (s - (d - 1) + hp.p);
  std::vector<double> v(d, 1.0 / std::sqrt(double(d))), w(d), u(d);
  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    for (int j = 0; j < d; ++j) {  // w = H v
      double acc = 0.0;
      const double* kj = kern.data() + j;  // kern[j - k + (d-1)] backwards
      for (int k = 0; k < d; ++k) acc += kj[d - 1 - k] * v[k];
      w[j] = acc;
    }
    double nw = 0.0;
    for (double x : w) nw += x * x;
    nw = std::sqrt(nw);
    for (int k = 0; k < d; ++k) {  // u = H^T w
      double acc = 0.0;
      const double* kk = kern.data() + (d - 1 - k);
      for (int j = 0; j < d; ++j) acc += kk[j] * w[j];
      u[k] = acc;
    }
    double nu = 0.0;
    for (double x : u) nu += x * x;
    nu = std::sqrt(nu);
    if (nu == 0.0) return 0.0;
    for (int k = 0; k < d; ++k) v[k] = u[k] / nu;
    if (it > 0 && std::abs(nw - est) <= tol * std::max(1.0, nw)) {
      est = nw;
      break;
    }
    est = nw;
  }
  return est;
}

// Dense evaluation of the same norm (exact up to the eigensolver threshold);
// meant for small m.
inline double hilbert_norm_exact(const ToeplitzHp& hp) {
  return operator_norm(toeplitz_matrix(hp));
}

// Both sides of the cross-term identity
//   ||P U_t P_perp|| = (sin 2t / 2pi) ||H_p||,  p = (2t + pi) / (2pi),
// evaluated at matched truncation (Toeplitz half-width m = n/2). The
// identity is an exact rewriting of the even-row/odd-column block of U_t up
// to the window edge, so the residual sits at roundoff scale.
struct CrossIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

inline CrossIdentity cross_identity_check(const FourierModel& model, double t) {
  if (!(t > 0.0 && t < 0.5 * M_PI))
    throw DomainError("cross_identity_check: t must lie in (0, pi/2)");
  const int d = model.dim();
  const int re = model.even_count();
  const int ro = d - re;
  const Matrix u = u_t_matrix(model, t);
  Matrix cross(re, ro);
  {
    int row = 0;
    for (int im = 0; im < d; ++im) {
      if (!model.even_index(im)) continue;
      int col = 0;
      for (int ik = 0; ik < d; ++ik)
        if (!model.even_index(ik)) cross(row, col++) = u(im, ik);
      ++row;
    }
  }
  const auto norm_of = [](const Matrix& a) {
    return std::max(a.rows(), a.cols()) <= 320
               ? operator_norm(a)
               : power_operator_norm(a, 1e-13, 4000);
  };
  CrossIdentity out;
  out.lhs = norm_of(cross);
  const double p = (2.0 * t + M_PI) / (2.0 * M_PI);
  const ToeplitzHp hp(p, std::max(1, model.n / 2));
  out.rhs = std::sin(2.0 * t) / (2.0 * M_PI) * norm_of(toeplitz_matrix(hp));
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace projgeom
