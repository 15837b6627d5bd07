#pragma once
//
// Seeded random matrices. Distributions are implemented here on top of the
// raw mt19937_64 stream so that a seed produces identical values on every
// standard library.
//

#include "gradedk/numeric.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gradedk {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  double normal() {
    if (spare_) {
      spare_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    cached_ = radius * std::sin(2.0 * std::numbers::pi * u2);
    spare_ = true;
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  std::mt19937_64 engine_;
  bool spare_ = false;
  double cached_ = 0.0;
};

inline ComplexMatrix random_matrix(Rng& rng, Index rows, Index cols) {
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, Index n) {
  return hermitian_part(random_matrix(rng, n, n));
}

/// Haar-like unitary from the QR factorization of a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, Index n) {
  const ComplexMatrix g = random_matrix(rng, n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Orthogonal projection of the given rank onto a random subspace.
inline ComplexMatrix random_projection(Rng& rng, Index n, Index rank) {
  require(rank >= 0 && rank <= n, "random_projection: rank out of range");
  if (rank == 0) return ComplexMatrix::Zero(n, n);
  const ComplexMatrix q = random_unitary(rng, n).leftCols(rank);
  return hermitian_part(q * q.adjoint());
}

/// Grading diag(+1 x n_even, -1 x n_odd), optionally conjugated by a random unitary.
inline ComplexMatrix random_grading(Rng& rng, Index n_even, Index n_odd, bool rotate) {
  RealVector signs(n_even + n_odd);
  signs.head(n_even).setOnes();
  signs.tail(n_odd).setConstant(-1.0);
  ComplexMatrix eps = signs.cast<Complex>().asDiagonal();
  if (!rotate) return eps;
  const ComplexMatrix u = random_unitary(rng, n_even + n_odd);
  return hermitian_part(u * eps * u.adjoint());
}

/// Homogeneous element of the given degree for the grading eps, scaled to
/// operator norm 1 (the zero matrix is never returned).
inline ComplexMatrix random_homogeneous(Rng& rng, const ComplexMatrix& eps, int degree) {
  const Index n = eps.rows();
  for (;;) {
    const ComplexMatrix m = random_matrix(rng, n, n);
    const ComplexMatrix flipped = eps * m * eps;
    const ComplexMatrix part = degree % 2 == 0 ? ComplexMatrix(0.5 * (m + flipped))
                                               : ComplexMatrix(0.5 * (m - flipped));
    Eigen::BDCSVD<ComplexMatrix> svd(part);
    const double norm = svd.singularValues()(0);
    if (norm > 1e-6) return part / norm;
  }
}

/// Hermitian operator anticommuting with eps.
inline ComplexMatrix random_odd_hermitian(Rng& rng, const ComplexMatrix& eps) {
  const ComplexMatrix h = random_hermitian(rng, eps.rows());
  return hermitian_part(0.5 * (h - eps * h * eps));
}

}  // namespace gradedk
