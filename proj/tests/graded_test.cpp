#include "gradedk/graded.hpp"
#include "gradedk/random.hpp"

#include <catch_amalgamated.hpp>

using namespace gradedk;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

GradedMatrix random_element(Rng& rng, const GradingOperator& g, int degree) {
  return {random_homogeneous(rng, g.matrix(), degree), g};
}

GradingOperator random_grading_op(Rng& rng) {
  const Index n = rng.integer(2, 4);
  const Index even = rng.integer(1, n - 1);
  return GradingOperator(random_grading(rng, even, n - even, true));
}

int sign(int exponent) { return exponent % 2 == 0 ? 1 : -1; }

}  // namespace

TEST_CASE("GradingOperator validates self-adjoint unitaries", "[graded]") {
  CHECK_NOTHROW(GradingOperator::standard(2, 1));
  ComplexMatrix bad(2, 2);
  bad << 1, 0, 0, 2;
  CHECK_THROWS_AS(GradingOperator(bad), Error);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(GradingOperator(bad), Error);
  CHECK_THROWS_AS(GradingOperator(ComplexMatrix::Identity(2, 3)), Error);
}

TEST_CASE("parity_parts examples", "[graded]") {
  const GradingOperator eps = GradingOperator::standard(1, 1);
  {
    const auto [even, odd] = parity_parts({pauli_x(), eps});
    CHECK(even.norm() == 0.0);
    CHECK((odd - pauli_x()).norm() == 0.0);
  }
  {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 3;
    const auto [even, odd] = parity_parts({d, eps});
    CHECK((even - d).norm() == 0.0);
    CHECK(odd.norm() == 0.0);
  }
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const GradingOperator g = random_grading_op(rng);
    const ComplexMatrix a = random_matrix(rng, g.dim(), g.dim());
    const auto [even, odd] = parity_parts({a, g});
    CHECK((even + odd - a).norm() < 1e-14);
    CHECK((g.conjugate(even) - even).norm() < 1e-12);
    CHECK((g.conjugate(odd) + odd).norm() < 1e-12);
  }
}

TEST_CASE("degree_of", "[graded]") {
  const GradingOperator eps = GradingOperator::standard(1, 1);
  CHECK(degree_of({pauli_x(), eps}) == 1);
  CHECK(degree_of({ComplexMatrix::Identity(2, 2), eps}) == 0);
  CHECK(degree_of({ComplexMatrix::Zero(2, 2), eps}) == 0);
  CHECK_FALSE(degree_of({ComplexMatrix::Ones(2, 2), eps}).has_value());
  CHECK_THROWS_AS(graded_tensor_homogeneous({ComplexMatrix::Ones(2, 2), eps}, {pauli_x(), eps}),
                  Error);
}

TEST_CASE("graded_tensor sign rule on X (x) X", "[graded]") {
  const GradingOperator eps = GradingOperator::standard(1, 1);
  const GradedMatrix x{pauli_x(), eps};
  const GradedMatrix t = graded_tensor(x, x);
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  CHECK((t.value * t.value + id).norm() < 1e-15);
  CHECK((t.grading.matrix() - kron(eps.matrix(), eps.matrix())).norm() == 0.0);
  // (a (x) b)^* = -(a^* (x) b^*) for odd a, b
  const GradedMatrix xa{kI * pauli_x(), eps};
  CHECK((graded_tensor(xa, x).value.adjoint() + graded_tensor(graded_adjoint(xa), x).value).norm() <
        1e-15);
}

TEST_CASE("degree-0 a gives the ungraded tensor product", "[graded]") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const GradingOperator ga = random_grading_op(rng), gb = random_grading_op(rng);
    const GradedMatrix a = random_element(rng, ga, 0);
    const GradedMatrix b = random_element(rng, gb, trial % 2);
    CHECK((graded_tensor(a, b).value - kron(a.value, b.value)).norm() < 1e-14);
  }
}

TEST_CASE("Koszul product, involution, associativity and degree rules", "[graded]") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const GradingOperator ga = random_grading_op(rng), gb = random_grading_op(rng),
                          gc = random_grading_op(rng);
    const int da = static_cast<int>(rng.integer(0, 1)), db = static_cast<int>(rng.integer(0, 1)),
              da2 = static_cast<int>(rng.integer(0, 1)), db2 = static_cast<int>(rng.integer(0, 1)),
              dc = static_cast<int>(rng.integer(0, 1));
    const GradedMatrix a = random_element(rng, ga, da), a2 = random_element(rng, ga, da2);
    const GradedMatrix b = random_element(rng, gb, db), b2 = random_element(rng, gb, db2);
    const GradedMatrix c = random_element(rng, gc, dc);

    const ComplexMatrix lhs = graded_tensor(a, b).value * graded_tensor(a2, b2).value;
    const ComplexMatrix rhs =
        sign(db * da2) *
        graded_tensor(graded_product(a, a2), graded_product(b, b2)).value;
    CHECK((lhs - rhs).norm() < 1e-12);

    const ComplexMatrix adj = graded_tensor(a, b).value.adjoint();
    CHECK((adj - sign(da * db) * graded_tensor(graded_adjoint(a), graded_adjoint(b)).value).norm() <
          1e-12);

    const GradedMatrix left = graded_tensor(graded_tensor(a, b), c);
    const GradedMatrix right = graded_tensor(a, graded_tensor(b, c));
    CHECK((left.value - right.value).norm() < 1e-12);
    CHECK((left.grading.matrix() - right.grading.matrix()).norm() < 1e-12);

    const auto degree = degree_of(graded_tensor(a, b));
    REQUIRE(degree.has_value());
    CHECK(*degree == (da + db) % 2);
  }
}

TEST_CASE("standard_double", "[graded]") {
  const GradingOperator one = GradingOperator::trivial(1);
  CHECK((standard_double(one).matrix() - GradingOperator::standard(1, 1).matrix()).norm() == 0.0);
  const GradingOperator eps = GradingOperator::standard(1, 1);
  RealVector expected(4);
  expected << 1, -1, -1, 1;
  CHECK((standard_double(eps).matrix() - ComplexMatrix(expected.cast<Complex>().asDiagonal()))
            .norm() == 0.0);
  const GradingOperator twice = standard_double(standard_double(eps));
  const ComplexMatrix e = eps.matrix();
  ComplexMatrix pattern = block_diag(block_diag(e, -e), block_diag(-e, e));
  CHECK((twice.matrix() - pattern).norm() == 0.0);
}

TEST_CASE("even_grading_reblock", "[graded]") {
  const GradingOperator eps_b = GradingOperator::standard(1, 1);
  Rng rng(4);
  const GradingOperator ga = GradingOperator::standard(2, 1);

  SECTION("grading operator is required") {
    const GradedMatrix a = random_element(rng, ga, 0);
    CHECK_THROWS_AS(even_grading_reblock(a, eps_b.matrix(), std::nullopt), Error);
  }
  SECTION("b = eps_B gives a block-diagonal image, degree 0 for even a") {
    for (int deg : {0, 1}) {
      const GradedMatrix a = random_element(rng, ga, deg);
      const GradedMatrix img = even_grading_reblock(a, eps_b.matrix(), eps_b);
      const Index n = ga.dim();
      CHECK(img.value.topRightCorner(n, n).norm() == 0.0);
      CHECK(img.value.bottomLeftCorner(n, n).norm() == 0.0);
      if (deg == 0) CHECK(degree_of(img) == 0);
    }
  }
  SECTION("degree-0 a: reblocking is the plain tensor product") {
    const GradedMatrix a = random_element(rng, ga, 0);
    const ComplexMatrix b = random_matrix(rng, 2, 2);
    CHECK((even_grading_reblock(a, b, eps_b).value - kron(b, a.value)).norm() < 1e-14);
  }
  SECTION("grading of the image is diag(eps_A, -eps_A)") {
    const GradedMatrix a = random_element(rng, ga, 1);
    const GradedMatrix img = even_grading_reblock(a, pauli_x(), eps_b);
    CHECK((img.grading.matrix() - standard_double(ga).matrix()).norm() == 0.0);
  }
  SECTION("multiplicative against the Koszul product") {
    for (int trial = 0; trial < 30; ++trial) {
      const int da = static_cast<int>(rng.integer(0, 1)), da2 = static_cast<int>(rng.integer(0, 1));
      const int db = static_cast<int>(rng.integer(0, 1));
      const GradedMatrix a = random_element(rng, ga, da), a2 = random_element(rng, ga, da2);
      const ComplexMatrix b = random_homogeneous(rng, eps_b.matrix(), db);
      const ComplexMatrix b2 = random_homogeneous(rng, eps_b.matrix(), trial % 2);
      const ComplexMatrix lhs =
          even_grading_reblock(a, b, eps_b).value * even_grading_reblock(a2, b2, eps_b).value;
      const ComplexMatrix rhs =
          sign(db * da2) * even_grading_reblock(graded_product(a, a2), b * b2, eps_b).value;
      CHECK((lhs - rhs).norm() < 1e-12);
      // adjoint compatibility
      const ComplexMatrix adj = even_grading_reblock(a, b, eps_b).value.adjoint();
      CHECK((adj - sign(da * db) *
                       even_grading_reblock(graded_adjoint(a), b.adjoint(), eps_b).value)
                .norm() < 1e-12);
    }
  }
}
