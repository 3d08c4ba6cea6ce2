#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "projgeom/constants.hpp"
#include "projgeom/matfunc.hpp"
#include "projgeom/quadrature.hpp"
#include "projgeom/sampling.hpp"

using namespace projgeom;

TEST_CASE("matrix product, adjoint and norms", "[matrix]") {
  Matrix a(2, 3);
  a(0, 0) = {1, 1};
  a(0, 2) = {0, -2};
  a(1, 1) = {3, 0};
  const Matrix aa = a * a.adjoint();
  REQUIRE(aa.rows() == 2);
  REQUIRE(aa.cols() == 2);
  CHECK(std::abs(aa(0, 0) - cplx(6, 0)) < 1e-15);
  CHECK(std::abs(aa(1, 1) - cplx(9, 0)) < 1e-15);
  CHECK(std::abs(aa(0, 1)) < 1e-15);
  CHECK(hermiticity_defect(aa) < 1e-15);
  CHECK(a.frobenius_norm() == Catch::Approx(std::sqrt(15.0)).margin(1e-14));
}

TEST_CASE("forward substitution solves lower triangular systems", "[matrix]") {
  Rng rng(11);
  const int n = 9;
  Matrix l = random_gaussian(rng, n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) l(i, j) = 0.0;
    l(i, i) += cplx(4.0, 0.0);  // keep it well conditioned
  }
  const Matrix b = random_gaussian(rng, n, 4);
  const Matrix x = forward_solve(l, b);
  CHECK(operator_norm(l * x - b) < 1e-12);
}

TEST_CASE("cholesky factorization and solve", "[matrix]") {
  Rng rng(12);
  const Matrix g = random_gaussian(rng, 8, 8);
  const HermMatrix a(gram(g).mat() + Matrix::identity(8), 1e-12);
  const Matrix l = cholesky(a);
  CHECK(operator_norm(l * l.adjoint() - a.mat()) < 1e-12 * operator_norm(a));
  std::vector<cplx> b(8);
  for (int i = 0; i < 8; ++i) b[i] = cplx(i + 1, -i);
  const std::vector<cplx> x = cholesky_solve(l, b);
  // residual of A x - b
  double res = 0.0;
  for (int i = 0; i < 8; ++i) {
    cplx s = -b[i];
    for (int j = 0; j < 8; ++j) s += a.mat()(i, j) * x[j];
    res = std::max(res, std::abs(s));
  }
  CHECK(res < 1e-10);
  const HermMatrix indef = HermMatrix::diagonal({1.0, -0.5, 2.0});
  CHECK_THROWS_AS(cholesky(indef), NotPsdError);
}

TEST_CASE("jacobi eigendecomposition reconstructs and orders", "[eig]") {
  SECTION("closed form 2x2") {
    Matrix m(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 2.0;
    m(0, 1) = {0, 1};
    m(1, 0) = {0, -1};
    const EigDecomposition e = eig_hermitian(HermMatrix(m, 1e-14));
    REQUIRE(e.eigenvalues.size() == 2);
    CHECK(e.eigenvalues[0] == Catch::Approx(1.0).margin(1e-13));
    CHECK(e.eigenvalues[1] == Catch::Approx(3.0).margin(1e-13));
  }
  SECTION("random reconstruction") {
    Rng rng(13);
    const HermMatrix h = random_hermitian(rng, 16, 2.0);
    const EigDecomposition e = eig_hermitian(h);
    for (size_t k = 1; k < e.eigenvalues.size(); ++k)
      CHECK(e.eigenvalues[k] >= e.eigenvalues[k - 1]);
    const HermMatrix back = assemble_hermitian(e.eigenvectors, e.eigenvalues);
    CHECK(operator_norm(back.mat() - h.mat()) < 1e-12 * operator_norm(h));
    CHECK(operator_norm(gram(e.eigenvectors).mat() - Matrix::identity(16)) <
          1e-12);
  }
}

TEST_CASE("operator norm: exact, power iteration, rank one", "[matfunc]") {
  Rng rng(14);
  const Matrix m = random_gaussian(rng, 25, 30);
  const double exact = operator_norm(m);
  const double power = power_operator_norm(m);
  CHECK(std::abs(exact - power) < 1e-9 * exact);

  Matrix u(5, 1), v(4, 1);
  for (int i = 0; i < 5; ++i) u(i, 0) = cplx(i + 1, -1);
  for (int i = 0; i < 4; ++i) v(i, 0) = cplx(1, i);
  double nu = 0.0, nv = 0.0;
  for (int i = 0; i < 5; ++i) nu += std::norm(u(i, 0));
  for (int i = 0; i < 4; ++i) nv += std::norm(v(i, 0));
  const Matrix rank1 = u * v.adjoint();
  CHECK(operator_norm(rank1) ==
        Catch::Approx(std::sqrt(nu * nv)).epsilon(1e-12));
}

TEST_CASE("matrix functions: sqrt, inverse, exponential", "[matfunc]") {
  Rng rng(15);
  const Matrix g = random_gaussian(rng, 7, 7);
  const HermMatrix a(gram(g).mat() + 0.5 * Matrix::identity(7), 1e-12);
  const HermMatrix r = sqrt_psd(a);
  CHECK(operator_norm(r.mat() * r.mat() - a.mat()) < 1e-11 * operator_norm(a));
  const HermMatrix rinv = inv_sqrt_psd(a);
  CHECK(operator_norm(r.mat() * rinv.mat() - Matrix::identity(7)) < 1e-10);
  const HermMatrix ainv = inv_pd(a);
  CHECK(operator_norm(ainv.mat() * a.mat() - Matrix::identity(7)) < 1e-10);

  const HermMatrix k = random_hermitian(rng, 6, 1.0);
  const Matrix u = unitary_exp(k, 0.7);
  CHECK(operator_norm(gram(u).mat() - Matrix::identity(6)) < 1e-12);
  const Matrix u2 = unitary_exp(k, 1.4);
  CHECK(operator_norm(u * u - u2) < 1e-11);

  CHECK_THROWS_AS(sqrt_psd(HermMatrix::diagonal({1.0, -0.1})), NotPsdError);
}

TEST_CASE("quadrature and root bracketing", "[quadrature]") {
  const auto s = [](double x) { return std::sin(x); };
  CHECK(quad::adaptive_simpson(s, 0.0, M_PI, 1e-13) ==
        Catch::Approx(2.0).margin(1e-12));
  CHECK(quad::gauss_legendre(s, 0.0, M_PI, 8) ==
        Catch::Approx(2.0).margin(1e-12));

  // linear data is integrated exactly by the trapezoid rule
  std::vector<double> t(11), f(11);
  for (int i = 0; i <= 10; ++i) {
    t[i] = 0.3 * i;
    f[i] = 2.0 * t[i] + 1.0;
  }
  const auto [integral, err] = quad::trapezoid_sampled(t, f);
  CHECK(integral == Catch::Approx(3.0 * 3.0 + 3.0).margin(1e-13));
  CHECK(err < 1e-12);

  const auto [lo, hi] =
      quad::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-13);
  CHECK(0.5 * (lo + hi) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
  CHECK(hi - lo <= 1e-13);
}

TEST_CASE("two quadratures agree on the coupling integrand", "[quadrature]") {
  // the integrand is smooth away from its pole, so adaptive Simpson and
  // composite Gauss-Legendre must agree far beyond their nominal tolerances
  for (double s : {0.1, 0.3, 0.5, 0.6, 0.65}) {
    const double a =
        quad::adaptive_simpson([](double t) { return offdiag_integrand(t); },
                               0.0, s, 1e-14);
    const double b = quad::gauss_legendre(
        [](double t) { return offdiag_integrand(t); }, 0.0, s, 32);
    CHECK(std::abs(a - b) < 1e-12);
  }
}
