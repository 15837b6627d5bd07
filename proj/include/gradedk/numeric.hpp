#pragma once
//
// Dense complex linear algebra used by every other module: Hermitian
// eigendecomposition, functional calculus on spectra, thresholded SVD
// (kernel / cokernel projections) and operator norms.
//

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gradedk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& h) {
  return (h + h.adjoint()) * 0.5;
}

/// Frobenius norm of H - H*.
inline double hermitian_defect(const ComplexMatrix& h) {
  return (h - h.adjoint()).norm();
}

/// max(|P^2 - P|_F, |P - P*|_F)
inline double projection_defect(const ComplexMatrix& p) {
  return std::max((p * p - p).norm(), (p - p.adjoint()).norm());
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline ComplexMatrix block_diag(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition
// ---------------------------------------------------------------------------

struct EigenSystem {
  RealVector eigenvalues;  // ascending
  ComplexMatrix basis;     // unitary, eigenvectors in columns

  Index size() const { return eigenvalues.size(); }

  ComplexMatrix reconstruct() const {
    return basis * eigenvalues.cast<Complex>().asDiagonal() * basis.adjoint();
  }
};

enum class EigenMethod { automatic, jacobi, tridiagonal };

/// Largest dimension handled by the Jacobi path under EigenMethod::automatic.
inline constexpr Index kJacobiMaxDim = 96;

namespace detail {

// Cyclic Jacobi for a Hermitian matrix. On return `a` is (numerically)
// diagonal and `v` accumulates the rotations, so input = v * a * v^*.
inline void jacobi_sweeps(ComplexMatrix& a, ComplexMatrix& v) {
  const Index n = a.rows();
  v = ComplexMatrix::Identity(n, n);
  if (n < 2) return;
  const double scale = a.norm();
  if (scale == 0.0) return;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) return;

    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (sweep > 3 && std::abs(app) + 100.0 * r == std::abs(app) &&
            std::abs(aqq) + 100.0 * r == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = a(p, q) / r;
        const double theta = (aqq - app) / (2.0 * r);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // V = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex vpp = c, vpq = s;
        const Complex vqp = -s * std::conj(phase), vqq = c * std::conj(phase);

        const ComplexVector colp = a.col(p), colq = a.col(q);
        a.col(p) = colp * vpp + colq * vqp;
        a.col(q) = colp * vpq + colq * vqq;
        const Eigen::RowVectorXcd rowp = a.row(p), rowq = a.row(q);
        a.row(p) = std::conj(vpp) * rowp + std::conj(vqp) * rowq;
        a.row(q) = std::conj(vpq) * rowp + std::conj(vqq) * rowq;
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        const ComplexVector vp = v.col(p), vq = v.col(q);
        v.col(p) = vp * vpp + vq * vqp;
        v.col(q) = vp * vpq + vq * vqq;
      }
    }
  }
  throw Error("eig_hermitian: Jacobi iteration did not converge");
}

// Ascending order; each eigenvector's first non-negligible component is
// rotated to be real positive.
inline void normalize(EigenSystem& es) {
  const Index n = es.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
    return es.eigenvalues(x) < es.eigenvalues(y);
  });
  EigenSystem sorted{RealVector(n), ComplexMatrix(es.basis.rows(), n)};
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    sorted.eigenvalues(i) = es.eigenvalues(src);
    sorted.basis.col(i) = es.basis.col(src);
  }
  for (Index j = 0; j < n; ++j) {
    auto col = sorted.basis.col(j);
    const double peak = col.cwiseAbs().maxCoeff();
    for (Index i = 0; i < col.size(); ++i) {
      const double mag = std::abs(col(i));
      if (mag > 1e-8 * peak) {
        col *= std::conj(col(i)) / mag;
        break;
      }
    }
  }
  es = std::move(sorted);
}

}  // namespace detail

inline EigenSystem eig_hermitian(const ComplexMatrix& h,
                                 EigenMethod method = EigenMethod::automatic) {
  require(h.rows() == h.cols(), "eig_hermitian: matrix is not square");
  require(all_finite(h), "eig_hermitian: matrix has non-finite entries");
  const double scale = h.norm();
  require(hermitian_defect(h) <= 1e-10 * scale,
          "eig_hermitian: matrix is not Hermitian within tolerance");
  const ComplexMatrix sym = hermitian_part(h);
  const Index n = h.rows();

  if (method == EigenMethod::automatic)
    method = n <= kJacobiMaxDim ? EigenMethod::jacobi : EigenMethod::tridiagonal;

  EigenSystem es;
  if (method == EigenMethod::jacobi) {
    ComplexMatrix a = sym;
    ComplexMatrix v;
    detail::jacobi_sweeps(a, v);
    es.eigenvalues = a.diagonal().real();
    es.basis = std::move(v);
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    require(solver.info() == Eigen::Success, "eig_hermitian: tridiagonal QR failed");
    es.eigenvalues = solver.eigenvalues();
    es.basis = solver.eigenvectors();
  }
  detail::normalize(es);
  return es;
}

// ---------------------------------------------------------------------------
// Functional calculus
// ---------------------------------------------------------------------------

/// basis * diag(f(lambda_i)) * basis^*. Throws if f is non-finite on the spectrum.
template <class F>
ComplexMatrix apply_function(const EigenSystem& es, F&& f) {
  const Index n = es.size();
  ComplexVector values(n);
  for (Index i = 0; i < n; ++i) {
    const Complex value(f(es.eigenvalues(i)));
    require(std::isfinite(value.real()) && std::isfinite(value.imag()),
            "apply_function: function is not finite on the spectrum");
    values(i) = value;
  }
  const ComplexMatrix scaled = es.basis * values.asDiagonal();
  return scaled * es.basis.adjoint();
}

template <class F>
ComplexMatrix apply_function(const ComplexMatrix& h, F&& f) {
  return apply_function(eig_hermitian(h), std::forward<F>(f));
}

// ---------------------------------------------------------------------------
// Norms and thresholded SVD
// ---------------------------------------------------------------------------

/// Largest singular value.
inline double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  require(all_finite(m), "op_norm: matrix has non-finite entries");
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

struct ThresholdSvd {
  RealVector singular_values;         // descending, min(rows, cols) entries
  ComplexMatrix kernel_projection;    // cols x cols, right singular vectors with s < tau
  ComplexMatrix cokernel_projection;  // rows x rows, left singular vectors with s < tau
  Index rank = 0;
  double threshold = 0.0;
  bool ambiguous = false;  // some singular value lies in [tau/10, 10 tau]

  Index kernel_dim() const { return kernel_projection.rows() - rank; }
  Index cokernel_dim() const { return cokernel_projection.rows() - rank; }
};

/// Thresholded SVD through the Hermitian dilation [[0, M^*], [M, 0]]. The
/// spectral projection of the dilation onto (-tau, tau) commutes with
/// diag(I, -I), so its diagonal blocks are the kernel and cokernel projections.
/// Default threshold: 1e-8 * |M| (1e-8 absolute when M = 0).
inline ThresholdSvd svd_threshold(const ComplexMatrix& m, std::optional<double> tau = {}) {
  require(all_finite(m), "svd_threshold: matrix has non-finite entries");
  if (tau) require(*tau > 0.0, "svd_threshold: threshold must be positive");
  const Index rows = m.rows(), cols = m.cols();
  const Index dim = rows + cols;

  ComplexMatrix dilation = ComplexMatrix::Zero(dim, dim);
  dilation.topRightCorner(cols, rows) = m.adjoint();
  dilation.bottomLeftCorner(rows, cols) = m;
  const EigenSystem es = eig_hermitian(dilation);

  ThresholdSvd out;
  const Index count = std::min(rows, cols);
  out.singular_values.resize(count);
  for (Index i = 0; i < count; ++i)
    out.singular_values(i) = std::abs(es.eigenvalues(dim - 1 - i));
  const double norm = dim > 0 ? std::max(std::abs(es.eigenvalues(0)),
                                         std::abs(es.eigenvalues(dim - 1)))
                              : 0.0;
  out.threshold = tau ? *tau : (norm > 0.0 ? 1e-8 * norm : 1e-8);

  std::vector<Index> small;
  for (Index i = 0; i < dim; ++i)
    if (std::abs(es.eigenvalues(i)) < out.threshold) small.push_back(i);
  ComplexMatrix w(dim, static_cast<Index>(small.size()));
  for (std::size_t k = 0; k < small.size(); ++k)
    w.col(static_cast<Index>(k)) = es.basis.col(small[k]);

  out.kernel_projection = hermitian_part(w.topRows(cols) * w.topRows(cols).adjoint());
  out.cokernel_projection = hermitian_part(w.bottomRows(rows) * w.bottomRows(rows).adjoint());
  out.rank = 0;
  for (Index i = 0; i < count; ++i) {
    const double s = out.singular_values(i);
    if (s >= out.threshold) ++out.rank;
    if (s >= 0.1 * out.threshold && s <= 10.0 * out.threshold) out.ambiguous = true;
  }
  return out;
}

/// Orthonormal basis (columns) of the range of a Hermitian projection.
inline ComplexMatrix range_basis(const ComplexMatrix& projection) {
  const EigenSystem es = eig_hermitian(projection);
  Index first = 0;
  while (first < es.size() && es.eigenvalues(first) < 0.5) ++first;
  return es.basis.rightCols(es.size() - first);
}

}  // namespace gradedk
