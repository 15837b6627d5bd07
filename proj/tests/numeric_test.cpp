#include "gradedk/numeric.hpp"
#include "gradedk/random.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace gradedk;

namespace {

// Oracle: smallest residual |H v - lambda v| over the returned pairs.
double eigen_residual(const ComplexMatrix& h, const EigenSystem& es) {
  double worst = 0.0;
  for (Index i = 0; i < es.size(); ++i)
    worst = std::max(worst, (h * es.basis.col(i) - es.eigenvalues(i) * es.basis.col(i)).norm());
  return worst;
}

}  // namespace

TEST_CASE("eig_hermitian diagonalizes a real symmetric 2x2", "[numeric]") {
  ComplexMatrix h(2, 2);
  h << 2, 1, 1, 2;
  const EigenSystem es = eig_hermitian(h);
  CHECK(es.eigenvalues(0) == Catch::Approx(1.0).margin(1e-14));
  CHECK(es.eigenvalues(1) == Catch::Approx(3.0).margin(1e-14));
  CHECK((es.reconstruct() - h).norm() < 1e-14);
}

TEST_CASE("eig_hermitian on diag(1,-1) returns -1, 1", "[numeric]") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1;
  h(1, 1) = -1;
  const EigenSystem es = eig_hermitian(h);
  CHECK(es.eigenvalues(0) == -1.0);
  CHECK(es.eigenvalues(1) == 1.0);
}

TEST_CASE("eig_hermitian handles complex off-diagonal entries", "[numeric]") {
  ComplexMatrix h(2, 2);
  h << 0, kI, -kI, 0;
  const EigenSystem es = eig_hermitian(h);
  CHECK(es.eigenvalues(0) == Catch::Approx(-1.0).margin(1e-15));
  CHECK(es.eigenvalues(1) == Catch::Approx(1.0).margin(1e-15));
  CHECK(eigen_residual(h, es) < 1e-14);
}

TEST_CASE("Jacobi and tridiagonal solvers agree on random Hermitian matrices", "[numeric]") {
  Rng rng(11);
  for (Index n : {1, 2, 3, 7, 16, 40}) {
    const ComplexMatrix h = random_hermitian(rng, n);
    const EigenSystem a = eig_hermitian(h, EigenMethod::jacobi);
    const EigenSystem b = eig_hermitian(h, EigenMethod::tridiagonal);
    CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, h.norm()));
    CHECK(eigen_residual(h, a) < 1e-12 * std::max(1.0, h.norm()));
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    CHECK((a.basis.adjoint() * a.basis - id).norm() < 1e-12);
    CHECK((a.reconstruct() - h).norm() < 1e-12 * std::max(1.0, h.norm()));
  }
}

TEST_CASE("eig_hermitian phase-fixes eigenvectors", "[numeric]") {
  Rng rng(3);
  const ComplexMatrix h = random_hermitian(rng, 6);
  const EigenSystem es = eig_hermitian(h);
  for (Index j = 0; j < es.size(); ++j) {
    Index first = 0;
    while (std::abs(es.basis(first, j)) < 1e-8) ++first;
    CHECK(std::abs(es.basis(first, j).imag()) < 1e-14);
    CHECK(es.basis(first, j).real() > 0.0);
  }
}

TEST_CASE("eig_hermitian rejects non-Hermitian and non-finite input", "[numeric]") {
  ComplexMatrix h(2, 2);
  h << 1, 2, 0, 1;
  CHECK_THROWS_AS(eig_hermitian(h), Error);
  h << 1, std::nan(""), std::nan(""), 1;
  CHECK_THROWS_AS(eig_hermitian(h), Error);
  CHECK_THROWS_AS(eig_hermitian(ComplexMatrix::Zero(2, 3)), Error);
}

TEST_CASE("apply_function matches direct formulas", "[numeric]") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;
  const ComplexMatrix r = apply_function(h, [](double x) { return 1.0 / Complex(x, -1.0); });
  CHECK(std::abs(r(0, 0) - 1.0 / Complex(1.0, -1.0)) < 1e-15);
  CHECK(std::abs(r(1, 1) - 1.0 / Complex(-1.0, -1.0)) < 1e-15);

  // Resolvent oracle: LU inverse of H - i.
  Rng rng(5);
  const ComplexMatrix g = random_hermitian(rng, 9);
  const ComplexMatrix id = ComplexMatrix::Identity(9, 9);
  const ComplexMatrix lu = Eigen::PartialPivLU<ComplexMatrix>(g - kI * id).inverse();
  const ComplexMatrix fc = apply_function(g, [](double x) { return 1.0 / Complex(x, -1.0); });
  CHECK((lu - fc).norm() < 1e-13);
}

TEST_CASE("apply_function rejects functions that are not finite on the spectrum", "[numeric]") {
  const ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  CHECK_THROWS_AS(apply_function(z, [](double x) { return 1.0 / x; }), Error);
}

TEST_CASE("op_norm agrees with the Gram-matrix eigenvalue", "[numeric]") {
  Rng rng(17);
  for (Index r : {1, 3, 8}) {
    for (Index c : {1, 4, 8}) {
      const ComplexMatrix m = random_matrix(rng, r, c);
      const EigenSystem gram = eig_hermitian(hermitian_part(m.adjoint() * m), EigenMethod::jacobi);
      CHECK(op_norm(m) == Catch::Approx(std::sqrt(gram.eigenvalues.maxCoeff())).epsilon(1e-12));
    }
  }
  CHECK(op_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("svd_threshold counts kernel and cokernel", "[numeric]") {
  SECTION("identity has trivial kernel") {
    const ThresholdSvd s = svd_threshold(ComplexMatrix::Identity(4, 4));
    CHECK(s.kernel_dim() == 0);
    CHECK(s.cokernel_dim() == 0);
    CHECK_FALSE(s.ambiguous);
  }
  SECTION("zero matrix") {
    const ThresholdSvd s = svd_threshold(ComplexMatrix::Zero(3, 2));
    CHECK(s.kernel_dim() == 2);
    CHECK(s.cokernel_dim() == 3);
    CHECK((s.kernel_projection - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
  }
  SECTION("truncated shift on 64 modes") {
    const Index n = 64;
    ComplexMatrix shift = ComplexMatrix::Zero(n + 1, n);
    for (Index i = 0; i < n; ++i) shift(i + 1, i) = 1.0;
    const ThresholdSvd s = svd_threshold(shift);
    CHECK(s.kernel_dim() == 0);
    CHECK(s.cokernel_dim() == 1);
    const Eigen::FullPivLU<ComplexMatrix> lu(shift.adjoint());
    CHECK(s.cokernel_dim() == lu.dimensionOfKernel());
    // the missing direction is e_0
    CHECK(std::abs(s.cokernel_projection(0, 0) - 1.0) < 1e-12);
  }
  SECTION("rank-deficient random product") {
    Rng rng(23);
    const ComplexMatrix m = random_matrix(rng, 7, 3) * random_matrix(rng, 3, 5);
    const ThresholdSvd s = svd_threshold(m);
    CHECK(s.rank == 3);
    CHECK(s.kernel_dim() == 2);
    CHECK(s.cokernel_dim() == 4);
    CHECK((m * s.kernel_projection).norm() < 1e-10);
    CHECK((s.cokernel_projection * m).norm() < 1e-10);
    CHECK(projection_defect(s.kernel_projection) < 1e-12);
  }
  SECTION("singular value near the threshold is flagged") {
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    m(2, 2) = 2e-8;
    const ThresholdSvd s = svd_threshold(m);
    CHECK(s.ambiguous);
  }
  SECTION("explicit threshold") {
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    m(2, 2) = 1e-3;
    CHECK(svd_threshold(m, 1e-2).kernel_dim() == 1);
    CHECK(svd_threshold(m, 1e-4).kernel_dim() == 0);
    CHECK_THROWS_AS(svd_threshold(m, -1.0), Error);
  }
}

TEST_CASE("range_basis spans the range of a projection", "[numeric]") {
  Rng rng(29);
  const ComplexMatrix p = random_projection(rng, 6, 2);
  const ComplexMatrix b = range_basis(p);
  REQUIRE(b.cols() == 2);
  CHECK((b * b.adjoint() - p).norm() < 1e-12);
}

TEST_CASE("kron and block_diag", "[numeric]") {
  ComplexMatrix a(1, 1), b(2, 2);
  a << 2;
  b << 1, 2, 3, 4;
  CHECK((kron(a, b) - 2.0 * b).norm() == 0.0);
  const ComplexMatrix d = block_diag(a, b);
  CHECK(d.rows() == 3);
  CHECK(d(0, 0) == 2.0);
  CHECK(d(2, 1) == 3.0);
  CHECK(d(0, 1) == 0.0);
}

TEST_CASE("Rng is reproducible", "[numeric]") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const long k = c.integer(2, 8);
    CHECK((k >= 2 && k <= 8));
  }
  Rng d(2);
  const ComplexMatrix u = random_unitary(d, 5);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(5, 5)).norm() < 1e-13);
  const ComplexMatrix eps = random_grading(d, 2, 3, true);
  CHECK((eps * eps - ComplexMatrix::Identity(5, 5)).norm() < 1e-13);
  CHECK(std::abs(eps.trace().real() + 1.0) < 1e-13);
}
