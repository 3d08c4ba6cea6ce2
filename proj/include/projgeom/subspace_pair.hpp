#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "projgeom/projection.hpp"

namespace projgeom {

/*
 * Graph coordinates for a pair of projections with ||P - Q|| < 1.
 *
 * In the orthonormal frame W = [basis_p | basis_perp] adapted to P, the
 * range of Q is the graph of a unique operator X : Ran P -> Ran P^perp and
 * Q takes the block form
 *
 *       [ (I + X*X)^{-1}        (I + X*X)^{-1} X*      ]
 *   Q = [                                              ]
 *       [ X (I + X*X)^{-1}      X (I + X*X)^{-1} X*    ]
 *
 * The operator angle is Theta = arctan (X*X)^{1/2}, and the norms tie
 * together as ||X|| = tan||Theta||, ||P - Q|| = sin||Theta||.
 */
struct SubspacePair {
  Projection p, q;
  Matrix basis_p;     // dim x rank, orthonormal basis of Ran P
  Matrix basis_perp;  // dim x (dim-rank), orthonormal basis of Ran P^perp
  Matrix x;           // (dim-rank) x rank, graph operator in these coordinates
  HermMatrix theta;   // rank x rank operator angle, spectrum in [0, pi/2)
  Matrix u;           // dim x dim direct rotation unitary with P = U* Q U
  double dist = 0.0;  // ||P - Q||

  double x_norm() const { return operator_norm(x); }
  double theta_norm() const { return std::atan(x_norm()); }
};

namespace detail {

// Margin below 1 under which ||P - Q|| < 1 is accepted; closer pairs are
// numerically indistinguishable from non-graph position.
constexpr double kGraphMargin = 1e-10;

inline Matrix block2x2(const Matrix& tl, const Matrix& tr, const Matrix& bl,
                       const Matrix& br) {
  const int r = tl.rows() + bl.rows();
  const int c = tl.cols() + tr.cols();
  Matrix m(r, c);
  for (int i = 0; i < tl.rows(); ++i) {
    for (int j = 0; j < tl.cols(); ++j) m(i, j) = tl(i, j);
    for (int j = 0; j < tr.cols(); ++j) m(i, tl.cols() + j) = tr(i, j);
  }
  for (int i = 0; i < bl.rows(); ++i) {
    for (int j = 0; j < bl.cols(); ++j) m(tl.rows() + i, j) = bl(i, j);
    for (int j = 0; j < br.cols(); ++j) m(tl.rows() + i, tl.cols() + j) = br(i, j);
  }
  return m;
}

// Direct rotation in W-coordinates:
//   U = [ (I+X*X)^{-1/2}     -X* (I+XX*)^{-1/2} ]
//       [ X (I+X*X)^{-1/2}    (I+XX*)^{-1/2}    ]
inline Matrix rotation_block(const Matrix& x) {
  const int r = x.cols();
  const int m = x.rows();
  const HermMatrix i_xsx(Matrix::identity(r) + gram(x).mat(), 1e-9);
  const HermMatrix i_xxs(Matrix::identity(m) + gram(x.adjoint()).mat(), 1e-9);
  const Matrix e0 = inv_sqrt_psd(i_xsx).mat();
  const Matrix e1 = inv_sqrt_psd(i_xxs).mat();
  return block2x2(e0, -(x.adjoint() * e1), x * e0, e1);
}

}  // namespace detail

// Q in graph coordinates: given X and the adapted bases of the reference
// projection, assemble the projection with range graph(X). The bases must be
// orthonormal, mutually orthogonal and jointly spanning.
inline Projection projection_from_graph(const Matrix& x, const Matrix& basis_p,
                                        const Matrix& basis_perp) {
  const int n = basis_p.rows();
  const int r = basis_p.cols();
  const int m = basis_perp.cols();
  if (basis_perp.rows() != n || r + m != n)
    throw DimensionError("projection_from_graph: bases do not span");
  if (x.rows() != m || x.cols() != r)
    throw DimensionError("projection_from_graph: X must be " + std::to_string(m) +
                         "x" + std::to_string(r) + ", got " + x.shape_str());
  const Matrix w = hcat(basis_p, basis_perp);
  {  // joint orthonormality check
    const HermMatrix g = gram(w);
    double dev = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dev = std::max(dev, std::abs(g(i, j) - (i == j ? cplx(1.0) : cplx(0.0))));
    if (dev > 1e-10)
      throw PreconditionError("projection_from_graph: bases not jointly "
                              "orthonormal, deviation " + std::to_string(dev));
  }
  const HermMatrix i_xsx(Matrix::identity(r) + gram(x).mat(), 1e-9);
  const Matrix inv = inv_pd(i_xsx).mat();   // (I + X*X)^{-1}
  const Matrix xinv = x * inv;
  const Matrix qc = detail::block2x2(inv, xinv.adjoint(), xinv,
                                     x * inv * x.adjoint());
  const Matrix q = w * qc * w.adjoint();
  Projection out = Projection::round(HermMatrix(q, 1e-9));
  if (out.rank() != r)
    throw InconsistentPairError("projection_from_graph: rounded rank " +
                                std::to_string(out.rank()) + " != " +
                                std::to_string(r));
  return out;
}

// Solve for the graph operator of Q over P. Requires ||P - Q|| < 1 - 1e-10;
// beyond that the pair is flagged as not in graph position.
inline SubspacePair angular_operator(const Projection& p, const Projection& q) {
  SubspacePair out;
  out.p = p;
  out.q = q;
  out.dist = distance(p, q);
  if (out.dist >= 1.0 - detail::kGraphMargin)
    throw NotAGraphError("angular_operator: ||P-Q|| = " + std::to_string(out.dist) +
                         " is too close to 1; Ran Q is not a graph over Ran P");
  const Projection::Basis basis = p.eigenbasis();
  out.basis_p = basis.range;
  out.basis_perp = basis.kernel;

  // S = (compression of Q to Ran P), T = (P^perp Q P) part, in coordinates.
  const Matrix qbp = q.matrix() * out.basis_p;            // n x r
  const Matrix s = out.basis_p.adjoint() * qbp;           // r x r
  const Matrix t = out.basis_perp.adjoint() * qbp;        // (n-r) x r
  const HermMatrix s_h(s, 1e-9);
  EigDecomposition se = eig_hermitian(s_h);
  if (!se.eigenvalues.empty() && se.eigenvalues.front() <= 1e-12)
    throw InconsistentPairError(
        "angular_operator: P Q P singular on Ran P (min eigenvalue " +
        std::to_string(se.eigenvalues.empty() ? 0.0 : se.eigenvalues.front()) +
        ") although ||P-Q|| < 1");
  std::vector<double> sinv(se.eigenvalues.size());
  for (size_t k = 0; k < sinv.size(); ++k) sinv[k] = 1.0 / se.eigenvalues[k];
  out.x = t * assemble_hermitian(se.eigenvectors, sinv).mat();

  out.theta = matrix_function(gram(out.x), [](double lam) {
    return std::atan(std::sqrt(std::max(lam, 0.0)));
  });
  const Matrix w = hcat(out.basis_p, out.basis_perp);
  out.u = w * detail::rotation_block(out.x) * w.adjoint();
  return out;
}

// The direct rotation unitary of a pair, in ambient coordinates.
inline const Matrix& rotation_unitary(const SubspacePair& pair) { return pair.u; }

// Factorization data for a triple (P, Q1, Q2) in the coordinates of P:
// with Xi the graph operators of Qi over P,
//   A = diag(I + X1*X1, I + X1 X1*),   B = [ I + X1*X2 ; X2 - X1 ],
//   C = (I + X2*X2)^{-1},
// and A^{-1/2} B C B* A^{-1/2} equals Q1's rotation applied to Q2.
struct FourProjections {
  Matrix a;        // n x n block diagonal
  Matrix b;        // n x r block column
  Matrix c;        // r x r
  Matrix q_check;  // n x n, the assembled projection in coordinates
  double residual; // || q_check - U1* Q2 U1 (in coordinates) ||
};

inline FourProjections four_projections_factorization(const Projection& p,
                                                      const Projection& q1,
                                                      const Projection& q2) {
  const SubspacePair s1 = angular_operator(p, q1);
  const SubspacePair s2 = angular_operator(p, q2);
  const int r = p.rank();
  const int m = p.dim() - r;
  const Matrix& x1 = s1.x;
  const Matrix& x2 = s2.x;

  FourProjections out;
  const Matrix a0 = Matrix::identity(r) + gram(x1).mat();
  const Matrix a1 = Matrix::identity(m) + gram(x1.adjoint()).mat();
  out.a = detail::block2x2(a0, Matrix::zero(r, m), Matrix::zero(m, r), a1);
  out.b = detail::block2x2(Matrix::identity(r) + x1.adjoint() * x2,
                           Matrix::zero(r, 0), x2 - x1, Matrix::zero(m, 0));  // block column
  out.c = inv_pd(HermMatrix(Matrix::identity(r) + gram(x2).mat(), 1e-9)).mat();

  const Matrix ainvh = detail::block2x2(
      inv_sqrt_psd(HermMatrix(a0, 1e-9)).mat(), Matrix::zero(r, m),
      Matrix::zero(m, r), inv_sqrt_psd(HermMatrix(a1, 1e-9)).mat());
  out.q_check = ainvh * out.b * out.c * out.b.adjoint() * ainvh;

  const Matrix w = hcat(s1.basis_p, s1.basis_perp);
  const Matrix u1c = detail::rotation_block(x1);
  const Matrix reference = u1c.adjoint() * (w.adjoint() * q2.matrix() * w) * u1c;
  out.residual = operator_norm(out.q_check - reference);
  return out;
}

// Residual of the angle-addition identity
//   X2 - X1 = (I + X1 X1*)^{1/2} Z (I + X1*X1)^{-1/2} (I + X1*X2),
// where Z is the graph operator of U1* Q2 U1 over P. Zero (to numerical
// precision) whenever I + X1*X2 has full range; that hypothesis is checked.
inline double angle_addition_residual(const Matrix& x1, const Matrix& x2,
                                      const Matrix& z) {
  if (!x1.same_shape(x2) || !x1.same_shape(z))
    throw DimensionError("angle_addition_residual: shape mismatch");
  const int r = x1.cols();
  const int m = x1.rows();
  const Matrix g = Matrix::identity(r) + x1.adjoint() * x2;
  // smallest singular value of I + X1*X2
  const HermMatrix gg = gram(g);
  const EigDecomposition ge = eig_hermitian(gg);
  const double smin = std::sqrt(std::max(ge.eigenvalues.front(), 0.0));
  const double smax = std::sqrt(std::max(ge.eigenvalues.back(), 0.0));
  if (smin <= 1e-12 * std::max(1.0, smax))
    throw HypothesisError("angle_addition_residual: I + X1*X2 is singular "
                          "(full-range hypothesis violated)");
  const Matrix lhs = x2 - x1;
  const Matrix rhs = sqrt_psd(HermMatrix(Matrix::identity(m) + gram(x1.adjoint()).mat(), 1e-9)).mat() *
                     z *
                     inv_sqrt_psd(HermMatrix(Matrix::identity(r) + gram(x1).mat(), 1e-9)).mat() *
                     g;
  return operator_norm(lhs - rhs);
}

}  // namespace projgeom
