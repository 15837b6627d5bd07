#pragma once
//
// Identity audit: each entry evaluates a displayed identity and its
// algebraically forced replacement on a small counterexample, then checks
// the forced identity on random inputs.
//

#include "gradedk/functions.hpp"
#include "gradedk/graded.hpp"
#include "gradedk/ktheory.hpp"
#include "gradedk/numeric.hpp"
#include "gradedk/random.hpp"
#include "gradedk/spectral_hom.hpp"

#include <string>
#include <vector>

namespace gradedk {

struct AuditEntry {
  std::string id;
  std::string anchor;          // descriptive tag of the displayed identity
  std::string displayed;       // identity as displayed
  std::string forced;          // identity that holds
  std::string counterexample;  // input on which the displayed form fails
  double displayed_residual = 0.0;  // on the counterexample
  double forced_residual = 0.0;     // worst over the counterexample and random inputs
  bool primary = false;             // one of the flagged corrections

  bool correction_confirmed() const {
    return displayed_residual > 1e-6 && forced_residual < 1e-12;
  }
};

namespace detail {

inline ComplexMatrix resolvent(const ComplexMatrix& d, Complex shift) {
  const Index n = d.rows();
  const ComplexMatrix m = d - shift * ComplexMatrix::Identity(n, n);
  return Eigen::PartialPivLU<ComplexMatrix>(m).inverse();
}

inline ComplexMatrix random_odd_hermitian(Rng& rng, Index half) {
  return gradedk::random_odd_hermitian(rng, GradingOperator::standard(half, half).matrix());
}

}  // namespace detail

/// (t - i)/(t + i) = 1 - 2i r_+(t), displayed with r_- in place of r_+.
inline AuditEntry audit_cayley_resolvent(std::uint64_t seed) {
  AuditEntry e{"cayley-resolvent",
               "cayley-transform-resolvent-identity",
               "(t-i)/(t+i) = 1 - 2i r_-(t)",
               "(t-i)/(t+i) = 1 - 2i r_+(t)",
               "t = 0 (1x1): left side -1, displayed right side 3",
               0.0,
               0.0,
               true};
  const ComplexMatrix zero = ComplexMatrix::Zero(1, 1);
  const ComplexMatrix id1 = ComplexMatrix::Identity(1, 1);
  const ComplexMatrix lhs0 = (zero - kI * id1) * detail::resolvent(zero, -kI);
  e.displayed_residual = (lhs0 - (id1 - 2.0 * kI * detail::resolvent(zero, kI))).norm();
  e.forced_residual = (lhs0 - (id1 - 2.0 * kI * detail::resolvent(zero, -kI))).norm();
  Rng rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 4;
    const ComplexMatrix d = random_hermitian(rng, n);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix lhs = (d - kI * id) * detail::resolvent(d, -kI);
    const ComplexMatrix rhs = id - 2.0 * kI * detail::resolvent(d, -kI);
    e.forced_residual = std::max(e.forced_residual, op_norm(lhs - rhs));
  }
  return e;
}

/// G(D)^2 - 1 = -(D^2 + 1)^{-1}, displayed without the minus sign.
inline AuditEntry audit_bounded_transform_square(std::uint64_t seed) {
  AuditEntry e{"bounded-transform-square",
               "bounded-transform-square-identity",
               "G(D)^2 - 1 = (D^2 + 1)^{-1}",
               "G(D)^2 - 1 = -(D^2 + 1)^{-1} = -phi(h), h(x) = (x^2 + 1)^{-1}",
               "D = 0 on C (+) C^op: G(D)^2 - 1 = -1, displayed right side +1",
               0.0,
               0.0,
               true};
  const GradingOperator eps2 = GradingOperator::standard(1, 1);
  {
    const ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix g = bounded_transform(d, eps2);
    const ComplexMatrix h = detail::resolvent(d * d, -1.0);
    e.displayed_residual = op_norm(g * g - id - h);
    e.forced_residual = op_norm(g * g - id + h);
  }
  Rng rng(seed);
  const auto h_fn = inverse_square_plus_one();
  for (int trial = 0; trial < 20; ++trial) {
    const Index half = 1 + trial % 3;
    const ComplexMatrix d = detail::random_odd_hermitian(rng, half);
    const GradingOperator eps = GradingOperator::standard(half, half);
    const ComplexMatrix id = ComplexMatrix::Identity(2 * half, 2 * half);
    const ComplexMatrix g = bounded_transform(d, eps);
    const ComplexMatrix h = SpectralHom::from_operator(eps, d).evaluate(h_fn.evaluator);
    e.forced_residual = std::max(e.forced_residual, op_norm(g * g - id + h));
    e.forced_residual =
        std::max(e.forced_residual, op_norm(h - detail::resolvent(d * d, -1.0)));
    // (D -+ i)^{-1} = D (D^2 + 1)^{-1} +- i (D^2 + 1)^{-1}
    e.forced_residual =
        std::max(e.forced_residual, op_norm(detail::resolvent(d, kI) - (d * h + kI * h)));
    e.forced_residual =
        std::max(e.forced_residual, op_norm(detail::resolvent(d, -kI) - (d * h - kI * h)));
  }
  return e;
}

/// p(eps) - p(eps u_phi) = -i eps phi(r_-), displayed as 2i phi(r_+).
inline AuditEntry audit_projection_difference(std::uint64_t seed) {
  AuditEntry e{"projection-difference",
               "cayley-projection-difference",
               "p(eps) - p(eps u) = 2i phi(r_+)",
               "p(eps) - p(eps u) = -i eps phi(r_-)",
               "D = 0 on C (+) C^op, full support: difference eps, displayed 2",
               0.0,
               0.0,
               false};
  auto residuals = [](const SpectralHom& phi) {
    const Index n = phi.ambient_dim();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix& eps = phi.grading().matrix();
    const ComplexMatrix u = cayley_unitary(phi).u;
    const ComplexMatrix diff = 0.5 * (eps + id) - 0.5 * (eps * u + id);
    const ComplexMatrix rm = phi.evaluate(resolvent_minus().evaluator);
    const ComplexMatrix rp = phi.evaluate(resolvent_plus().evaluator);
    return std::pair{op_norm(diff - 2.0 * kI * rp), op_norm(diff + kI * eps * rm)};
  };
  const auto [shown, forced] =
      residuals(SpectralHom::from_operator(GradingOperator::standard(1, 1), ComplexMatrix::Zero(2, 2)));
  e.displayed_residual = shown;
  e.forced_residual = forced;
  Rng rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    const Index half = 1 + trial % 3;
    const GradingOperator eps = GradingOperator::standard(half, half);
    const auto [s, f] =
        residuals(SpectralHom::from_operator(eps, detail::random_odd_hermitian(rng, half)));
    e.forced_residual = std::max(e.forced_residual, f);
  }
  return e;
}

/// rho(a (x) b) = rho1(a) (x) eps2^{deg a} rho2(b) respects the Koszul product;
/// the displayed placement rho1(a) eps1^{deg a} (x) rho2(b) does not.
inline AuditEntry audit_tensor_representation(std::uint64_t seed) {
  AuditEntry e{"tensor-representation",
               "graded-tensor-representation",
               "rho(a (x) b) = rho1(a) eps1^{deg a} (x) rho2(b)",
               "rho(a (x) b) = rho1(a) (x) eps2^{deg a} rho2(b)",
               "a = a' = [[0,1],[1,0]] odd on C^{1|1}, b = b' = 1: (a(x)b)^2 = 1, displayed gives -1",
               0.0,
               0.0,
               false};
  const GradingOperator eps_a = GradingOperator::standard(1, 1);
  const GradingOperator eps_b = GradingOperator::trivial(1);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  const ComplexMatrix expected = kron(x * x, one);
  const ComplexMatrix shown = kron(x * eps_a.matrix(), one);
  e.displayed_residual = op_norm(shown * shown - expected);
  const ComplexMatrix used = graded_tensor({x, eps_a}, {one, eps_b}).value;
  e.forced_residual = op_norm(used * used - expected);

  Rng rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    const Index p = 1 + trial % 2, q = 1 + (trial / 2) % 2;
    const GradingOperator ga = GradingOperator::standard(p, p), gb = GradingOperator::standard(q, q);
    auto homogeneous = [&rng](const GradingOperator& g, int deg) {
      const ComplexMatrix m = random_matrix(rng, g.dim(), g.dim());
      const ComplexMatrix c = g.conjugate(m);
      return deg == 0 ? ComplexMatrix(0.5 * (m + c)) : ComplexMatrix(0.5 * (m - c));
    };
    const int da = trial % 2, db = (trial / 3) % 2, da2 = (trial / 5) % 2;
    const GradedMatrix a{homogeneous(ga, da), ga}, a2{homogeneous(ga, da2), ga};
    const GradedMatrix b{homogeneous(gb, db), gb}, b2{homogeneous(gb, 0), gb};
    const double sign = (db * da2) % 2 == 0 ? 1.0 : -1.0;
    const ComplexMatrix lhs = graded_tensor(a, b).value * graded_tensor(a2, b2).value;
    const ComplexMatrix rhs =
        sign * graded_tensor({a.value * a2.value, ga}, {b.value * b2.value, gb}).value;
    e.forced_residual = std::max(e.forced_residual, op_norm(lhs - rhs));
  }
  return e;
}

/// The block operator [[D, t eps], [t eps, u D u^*]] in ambient coordinates
/// squares with a cross term; the realized homotopy squares to
/// diag(D^2 + t^2 P, u (D^2 + t^2 P) u^*).
inline AuditEntry audit_inverse_homotopy_square(std::uint64_t seed) {
  AuditEntry e{"inverse-homotopy-square",
               "inverse-class-homotopy-operator",
               "[[D, t eps], [t eps, D^op]]^2 = diag(D^2 + t^2, D^op^2 + t^2)",
               "[[D, t eps P u], [t u P eps, u D u^*]]^2 = diag(D^2 + t^2 P, u (D^2 + t^2 P) u^*)",
               "D = [[0, i], [-i, 0]], eps = diag(1, -1), t = 1: cross term 2 D eps",
               0.0,
               0.0,
               false};
  auto literal_residual = [](const SpectralHom& phi, double t) {
    const Index n = phi.ambient_dim();
    const ComplexMatrix& eps = phi.grading().matrix();
    const ComplexMatrix u = sector_swap(n / 2);
    const ComplexMatrix dop = u * phi.op() * u;
    ComplexMatrix big = block_diag(phi.op(), dop);
    big.topRightCorner(n, n) = t * eps;
    big.bottomLeftCorner(n, n) = t * eps;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix target =
        block_diag(phi.op() * phi.op() + t * t * id, dop * dop + t * t * id);
    return op_norm(big * big - target);
  };
  auto realized_residual = [](const SpectralHom& phi, double t) {
    const SpectralHom phi_t = inverse_homotopy_at(phi, t);
    const Index n = phi.ambient_dim();
    const ComplexMatrix u = sector_swap(n / 2);
    const ComplexMatrix sq = phi.op() * phi.op() + t * t * phi.support();
    const ComplexMatrix target = block_diag(sq, u * sq * u);
    return op_norm(phi_t.op() * phi_t.op() - target);
  };
  ComplexMatrix d(2, 2);
  d << 0, kI, -kI, 0;
  const SpectralHom phi = SpectralHom::from_operator(GradingOperator::standard(1, 1), d);
  e.displayed_residual = literal_residual(phi, 1.0);
  e.forced_residual = realized_residual(phi, 1.0);
  Rng rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    const Index half = 1 + trial % 3;
    const GradingOperator eps = GradingOperator::standard(half, half);
    const SpectralHom psi =
        SpectralHom::from_operator(eps, detail::random_odd_hermitian(rng, half));
    for (double t : {0.5, 1.0, 2.0})
      e.forced_residual = std::max(e.forced_residual, realized_residual(psi, t) / (1.0 + t * t));
  }
  return e;
}

inline std::vector<AuditEntry> identity_audit(std::uint64_t seed) {
  return {audit_cayley_resolvent(seed), audit_bounded_transform_square(seed + 1),
          audit_projection_difference(seed + 2), audit_tensor_representation(seed + 3),
          audit_inverse_homotopy_square(seed + 4)};
}

}  // namespace gradedk
