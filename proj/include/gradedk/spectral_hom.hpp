#pragma once
//
// Graded *-homomorphisms C_0(R) -> M_N in converse-functional-calculus normal
// form: a support projection P (a graded subspace), and a degree-one Hermitian
// D living on range(P). Evaluation is phi(f) = f(D) on range(P), 0 elsewhere.
//

#include "gradedk/functions.hpp"
#include "gradedk/graded.hpp"
#include "gradedk/numeric.hpp"

#include <optional>
#include <utility>

namespace gradedk {

namespace detail {

inline double scaled_tol(double tol, double scale) { return tol * std::max(1.0, scale); }

}  // namespace detail

class SpectralHom {
 public:
  SpectralHom(GradingOperator grading, ComplexMatrix support, ComplexMatrix op)
      : grading_(std::move(grading)), support_(std::move(support)), op_(std::move(op)) {
    const Index n = grading_.dim();
    require(support_.rows() == n && support_.cols() == n && op_.rows() == n && op_.cols() == n,
            "SpectralHom: dimension mismatch");
    require(all_finite(support_) && all_finite(op_), "SpectralHom: non-finite entries");
    const double dim_scale = std::max<double>(1.0, static_cast<double>(n));
    const double op_scale = op_.norm();
    require(projection_defect(support_) <= 1e-12 * dim_scale,
            "SpectralHom: support is not a Hermitian projection");
    require((grading_.conjugate(support_) - support_).norm() <= 1e-12 * dim_scale,
            "SpectralHom: support is not a graded subspace");
    require(hermitian_defect(op_) <= detail::scaled_tol(1e-12, op_scale),
            "SpectralHom: operator is not Hermitian");
    require((grading_.conjugate(op_) + op_).norm() <= detail::scaled_tol(1e-12, op_scale),
            "SpectralHom: operator does not have degree one");
    require((support_ * op_ * support_ - op_).norm() <= detail::scaled_tol(1e-12, op_scale),
            "SpectralHom: operator is not supported on the support projection");

    const ComplexMatrix basis = range_basis(support_);
    const ComplexMatrix compressed = hermitian_part(basis.adjoint() * op_ * basis);
    const EigenSystem es = eig_hermitian(compressed);
    spectrum_ = es.eigenvalues;
    frame_ = basis * es.basis;
  }

  static SpectralHom zero(const GradingOperator& grading) {
    const Index n = grading.dim();
    return {grading, ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
  }

  /// Full support: phi(f) = f(D).
  static SpectralHom from_operator(const GradingOperator& grading, const ComplexMatrix& op) {
    const Index n = grading.dim();
    return {grading, ComplexMatrix::Identity(n, n), op};
  }

  const GradingOperator& grading() const { return grading_; }
  const ComplexMatrix& support() const { return support_; }
  const ComplexMatrix& op() const { return op_; }
  Index ambient_dim() const { return grading_.dim(); }
  Index support_rank() const { return spectrum_.size(); }

  /// Eigenvalues of D restricted to range(P), ascending.
  const RealVector& spectrum() const { return spectrum_; }

  /// Orthonormal eigenvectors of D spanning range(P) (ambient_dim x rank).
  const ComplexMatrix& frame() const { return frame_; }

  /// f(D) on range(P), zero on the complement. No C_0 check.
  template <class F>
  ComplexMatrix evaluate(F&& f) const {
    const Index r = spectrum_.size();
    ComplexVector values(r);
    for (Index i = 0; i < r; ++i) {
      const Complex v(f(spectrum_(i)));
      require(std::isfinite(v.real()) && std::isfinite(v.imag()),
              "SpectralHom: function is not finite on the spectrum");
      values(i) = v;
    }
    const ComplexMatrix scaled = frame_ * values.asDiagonal();
    return scaled * frame_.adjoint();
  }

 private:
  GradingOperator grading_;
  ComplexMatrix support_;
  ComplexMatrix op_;
  RealVector spectrum_;
  ComplexMatrix frame_;
};

/// phi(f) as a graded matrix. f must pass the C_0 surrogate.
inline GradedMatrix hom_apply(const SpectralHom& phi, const FunctionSpec& f) {
  require(f.vanishes_at_infinity(),
          "hom_apply: " + f.name + " has no decay witness (not in C_0(R))");
  return {phi.evaluate(f.evaluator), phi.grading()};
}

/// Converse functional calculus from R = phi(r_-): the support is range(R)
/// and D = (R restricted to its range)^{-1} + i. Throws when R is not the
/// resolvent image of a self-adjoint degree-one operator.
inline SpectralHom recover_operator(const ComplexMatrix& resolvent_image,
                                    const GradingOperator& grading,
                                    std::optional<double> tau = {}) {
  const ComplexMatrix& r = resolvent_image;
  const Index n = grading.dim();
  require(r.rows() == n && r.cols() == n, "recover_operator: dimension mismatch");
  const ThresholdSvd svd = svd_threshold(r, tau);
  const ComplexMatrix range_proj =
      hermitian_part(ComplexMatrix::Identity(n, n) - svd.cokernel_projection);
  const ComplexMatrix basis = range_basis(range_proj);
  const Index rank = basis.cols();
  if (rank == 0) return SpectralHom::zero(grading);

  const double r_scale = std::max(1e-300, op_norm(r));
  const ComplexMatrix compressed = basis.adjoint() * r * basis;
  require((basis * compressed * basis.adjoint() - r).norm() <= 1e-8 * r_scale *
                                                                 std::sqrt(static_cast<double>(n)),
          "recover_operator: image does not preserve its range (not a resolvent image)");

  Eigen::PartialPivLU<ComplexMatrix> lu(compressed);
  ComplexMatrix op_c = lu.inverse();
  op_c.diagonal().array() += kI;
  const double c_scale = op_c.norm();
  require(hermitian_defect(op_c) <= detail::scaled_tol(1e-8, c_scale),
          "recover_operator: recovered operator is not Hermitian (not a graded *-homomorphism)");
  op_c = hermitian_part(op_c);

  ComplexMatrix op = basis * op_c * basis.adjoint();
  require((grading.conjugate(op) + op).norm() <= detail::scaled_tol(1e-8, c_scale),
          "recover_operator: recovered operator does not have degree one");
  ComplexMatrix support = hermitian_part(basis * basis.adjoint());
  require((grading.conjugate(support) - support).norm() <=
              1e-8 * std::sqrt(static_cast<double>(n)),
          "recover_operator: range is not a graded subspace");
  support = hermitian_part(0.5 * (support + grading.conjugate(support)));
  op = hermitian_part(0.5 * (op - grading.conjugate(op)));
  op = hermitian_part(support * op * support);
  return {grading, std::move(support), std::move(op)};
}

struct CayleyUnitary {
  ComplexMatrix u;
};

/// u_phi = 1 + 2i phi(r_-), i.e. z(D) = (D + i)(D - i)^{-1} on the support
/// and the identity on its complement.
inline CayleyUnitary cayley_unitary(const SpectralHom& phi) {
  const Index n = phi.ambient_dim();
  const auto rminus = resolvent_minus();
  ComplexMatrix u = ComplexMatrix::Identity(n, n) + 2.0 * kI * phi.evaluate(rminus.evaluator);
  return {std::move(u)};
}

/// G(D) = D (D^2 + 1)^{-1/2} for a degree-one Hermitian D.
inline ComplexMatrix bounded_transform(const ComplexMatrix& op, const GradingOperator& grading) {
  require(op.rows() == grading.dim() && op.cols() == grading.dim(),
          "bounded_transform: dimension mismatch");
  require((grading.conjugate(op) + op).norm() <= detail::scaled_tol(1e-12, op.norm()),
          "bounded_transform: operator does not have degree one");
  const auto g = bounded_transform_function();
  return hermitian_part(apply_function(op, g.evaluator));
}

}  // namespace gradedk
