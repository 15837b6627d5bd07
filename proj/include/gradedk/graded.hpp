#pragma once
//
// Evenly graded matrix *-algebras: a grading is a self-adjoint unitary eps,
// the grading automorphism is x -> eps x eps, and the graded tensor product
// carries the Koszul sign (-1)^{deg b * deg a'} in its product.
//

#include "gradedk/numeric.hpp"

#include <optional>
#include <utility>

namespace gradedk {

/// Relative tolerance for "the opposite-parity part vanishes".
inline constexpr double kHomogeneityTol = 1e-10;

class GradingOperator {
 public:
  explicit GradingOperator(ComplexMatrix eps) : eps_(std::move(eps)) {
    require(eps_.rows() == eps_.cols(), "GradingOperator: matrix is not square");
    require(all_finite(eps_), "GradingOperator: non-finite entries");
    const Index n = eps_.rows();
    const double tol = 1e-12 * std::max<double>(1.0, static_cast<double>(n));
    require(hermitian_defect(eps_) <= tol, "GradingOperator: not self-adjoint");
    require((eps_ * eps_ - ComplexMatrix::Identity(n, n)).norm() <= tol,
            "GradingOperator: square is not the identity");
  }

  /// eps = I (everything even).
  static GradingOperator trivial(Index n) {
    return GradingOperator(ComplexMatrix::Identity(n, n));
  }

  /// diag(I_even, -I_odd).
  static GradingOperator standard(Index n_even, Index n_odd) {
    RealVector signs(n_even + n_odd);
    signs.head(n_even).setOnes();
    signs.tail(n_odd).setConstant(-1.0);
    return GradingOperator(signs.cast<Complex>().asDiagonal());
  }

  const ComplexMatrix& matrix() const { return eps_; }
  Index dim() const { return eps_.rows(); }

  /// alpha(x) = eps x eps
  ComplexMatrix conjugate(const ComplexMatrix& x) const { return eps_ * x * eps_; }

  /// eps^degree, degree taken mod 2.
  ComplexMatrix power(int degree) const {
    return (degree % 2 == 0) ? ComplexMatrix::Identity(dim(), dim()) : eps_;
  }

 private:
  ComplexMatrix eps_;
};

struct GradedMatrix {
  ComplexMatrix value;
  GradingOperator grading;

  GradedMatrix(ComplexMatrix v, GradingOperator g) : value(std::move(v)), grading(std::move(g)) {
    require(value.rows() == grading.dim() && value.cols() == grading.dim(),
            "GradedMatrix: value and grading dimensions differ");
  }

  Index dim() const { return value.rows(); }
};

struct ParityParts {
  ComplexMatrix even;
  ComplexMatrix odd;
};

inline ParityParts parity_parts(const GradedMatrix& a) {
  const ComplexMatrix flipped = a.grading.conjugate(a.value);
  return {(a.value + flipped) * 0.5, (a.value - flipped) * 0.5};
}

/// 0 or 1 when the opposite-parity part is negligible; nullopt otherwise.
/// The zero matrix is reported as degree 0.
inline std::optional<int> degree_of(const GradedMatrix& a, double rel_tol = kHomogeneityTol) {
  const auto [even, odd] = parity_parts(a);
  const double scale = a.value.norm();
  if (odd.norm() <= rel_tol * scale) return 0;
  if (even.norm() <= rel_tol * scale) return 1;
  return std::nullopt;
}

inline int require_degree(const GradedMatrix& a, const char* who) {
  const auto degree = degree_of(a);
  require(degree.has_value(), std::string(who) + ": element is not homogeneous");
  return *degree;
}

/// Product inside one graded algebra (shared grading).
inline GradedMatrix graded_product(const GradedMatrix& a, const GradedMatrix& b) {
  require((a.grading.matrix() - b.grading.matrix()).norm() == 0.0,
          "graded_product: operands carry different gradings");
  return {a.value * b.value, a.grading};
}

inline GradedMatrix graded_adjoint(const GradedMatrix& a) {
  return {a.value.adjoint(), a.grading};
}

/// Concrete matrix of a (x)^ b on H1 (x) H2, graded by eps1 (x) eps2:
///   rho(a (x)^ b) = rho1(a) (x) eps2^{deg a} rho2(b),
/// extended bilinearly over the parity parts of a.
inline GradedMatrix graded_tensor(const GradedMatrix& a, const GradedMatrix& b) {
  const auto [a_even, a_odd] = parity_parts(a);
  const ComplexMatrix& eps_b = b.grading.matrix();
  ComplexMatrix value = kron(a_even, b.value) + kron(a_odd, eps_b * b.value);
  return {std::move(value), GradingOperator(kron(a.grading.matrix(), eps_b))};
}

/// As graded_tensor, but both factors must be homogeneous.
inline GradedMatrix graded_tensor_homogeneous(const GradedMatrix& a, const GradedMatrix& b) {
  require_degree(a, "graded_tensor");
  require_degree(b, "graded_tensor");
  return graded_tensor(a, b);
}

/// diag(eps, -eps): grading of H (+) H^op.
inline GradingOperator standard_double(const GradingOperator& eps) {
  const ComplexMatrix& e = eps.matrix();
  return GradingOperator(block_diag(e, -e));
}

/// Image of a (x)^ b in the ungraded tensor product when B is evenly graded,
/// written with the B factor outermost, i.e. as a dim(B) x dim(B) block matrix
/// over A:  eps_B^{deg a} b (x) a  (bilinear in the parity parts of a).
/// For eps_B = diag(1, -1) the returned grading is diag(eps_A, -eps_A).
inline GradedMatrix even_grading_reblock(const GradedMatrix& a, const ComplexMatrix& b,
                                         const std::optional<GradingOperator>& eps_b) {
  require(eps_b.has_value(), "even_grading_reblock: grading operator of B not supplied");
  require(b.rows() == eps_b->dim() && b.cols() == eps_b->dim(),
          "even_grading_reblock: b and its grading differ in dimension");
  const auto [a_even, a_odd] = parity_parts(a);
  ComplexMatrix value = kron(b, a_even) + kron(eps_b->matrix() * b, a_odd);
  return {std::move(value), GradingOperator(kron(eps_b->matrix(), a.grading.matrix()))};
}

}  // namespace gradedk
