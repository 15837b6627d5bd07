#pragma once
//
// K_0 of finite-dimensional C*-algebras A = (+)_j M_{m_j}, the maps between
// K_0 classes [p] - [q] and graded homomorphisms C_0(R) -> M_2(A (x) M_L),
// direct sums and inverses of homomorphism classes, the homotopies that
// witness them, and the Fredholm index of a degree-one corner.
//
// Ambient layout for A (x) M_L doubled by the standard grading:
//   [sector 0 | sector 1], each sector = [block 0 | block 1 | ...],
//   block j has dimension L * m_j, grading diag(I, -I) over the sectors.
// K_0(M_m) = Z via the trace, so a class is a per-block vector of traces.
//

#include "gradedk/functions.hpp"
#include "gradedk/graded.hpp"
#include "gradedk/numeric.hpp"
#include "gradedk/random.hpp"
#include "gradedk/spectral_hom.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace gradedk {

struct FiniteCStar {
  std::vector<Index> blocks;  // matrix sizes m_j

  explicit FiniteCStar(std::vector<Index> sizes) : blocks(std::move(sizes)) {
    require(!blocks.empty(), "FiniteCStar: at least one block required");
    for (Index m : blocks) require(m >= 1, "FiniteCStar: block sizes must be >= 1");
  }

  Index dim() const {
    Index total = 0;
    for (Index m : blocks) total += m;
    return total;
  }
  std::size_t block_count() const { return blocks.size(); }
};

inline bool operator==(const FiniteCStar& a, const FiniteCStar& b) { return a.blocks == b.blocks; }

/// A contiguous run of basis vectors belonging to one simple summand.
struct Segment {
  Index offset;
  Index size;
  std::size_t block;
};
using BlockPartition = std::vector<Segment>;

inline BlockPartition single_block(Index n) { return {{0, n, 0}}; }

inline Index partition_dim(const BlockPartition& partition) {
  Index end = 0;
  for (const auto& s : partition) end = std::max(end, s.offset + s.size);
  return end;
}

inline std::vector<std::size_t> block_labels(const BlockPartition& partition) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(partition_dim(partition)));
  for (const auto& s : partition)
    for (Index i = 0; i < s.size; ++i) labels[static_cast<std::size_t>(s.offset + i)] = s.block;
  return labels;
}

/// Frobenius norm of the entries coupling different simple summands.
inline double off_block_norm(const ComplexMatrix& q, const BlockPartition& partition) {
  const auto labels = block_labels(partition);
  double sum = 0.0;
  for (Index j = 0; j < q.cols(); ++j)
    for (Index i = 0; i < q.rows(); ++i)
      if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)])
        sum += std::norm(q(i, j));
  return std::sqrt(sum);
}

inline std::vector<double> block_traces(const ComplexMatrix& q, const BlockPartition& partition,
                                        std::size_t block_count) {
  std::vector<double> traces(block_count, 0.0);
  for (const auto& s : partition)
    for (Index i = 0; i < s.size; ++i) traces[s.block] += q(s.offset + i, s.offset + i).real();
  return traces;
}

class AmbientLayout {
 public:
  AmbientLayout(FiniteCStar algebra, Index amplification)
      : algebra_(std::move(algebra)), amplification_(amplification) {
    require(amplification_ >= 1, "AmbientLayout: amplification must be >= 1");
  }

  const FiniteCStar& algebra() const { return algebra_; }
  Index amplification() const { return amplification_; }
  std::size_t block_count() const { return algebra_.block_count(); }
  Index half_dim() const { return amplification_ * algebra_.dim(); }
  Index dim() const { return 2 * half_dim(); }

  Index block_size(std::size_t j) const { return amplification_ * algebra_.blocks[j]; }
  Index block_offset(std::size_t j) const {
    Index offset = 0;
    for (std::size_t i = 0; i < j; ++i) offset += block_size(i);
    return offset;
  }

  BlockPartition half_partition() const {
    BlockPartition p;
    for (std::size_t j = 0; j < block_count(); ++j) p.push_back({block_offset(j), block_size(j), j});
    return p;
  }

  BlockPartition full_partition() const {
    BlockPartition p = half_partition();
    for (std::size_t j = 0; j < block_count(); ++j)
      p.push_back({half_dim() + block_offset(j), block_size(j), j});
    return p;
  }

  GradingOperator grading() const { return GradingOperator::standard(half_dim(), half_dim()); }

 private:
  FiniteCStar algebra_;
  Index amplification_;
};

namespace detail {

inline double projection_tol(Index n) {
  return 1e-12 * std::max(1.0, std::sqrt(static_cast<double>(n)));
}

inline long integral_trace(double trace, const char* who) {
  const double nearest = std::round(trace);
  require(std::abs(trace - nearest) <= 1e-9,
          std::string(who) + ": trace is not within 1e-9 of an integer");
  return static_cast<long>(nearest);
}

}  // namespace detail

/// [plus] - [minus] with its per-block rank vector.
struct KZeroClass {
  ComplexMatrix plus;
  ComplexMatrix minus;
  std::vector<long> rank_vector;

  static KZeroClass make(ComplexMatrix plus, ComplexMatrix minus,
                         const BlockPartition& plus_partition,
                         const BlockPartition& minus_partition, std::size_t block_count) {
    require(plus.rows() == partition_dim(plus_partition) &&
                minus.rows() == partition_dim(minus_partition),
            "KZeroClass: partition does not cover the projection");
    require(projection_defect(plus) <= detail::projection_tol(plus.rows()),
            "KZeroClass: plus is not a Hermitian projection");
    require(projection_defect(minus) <= detail::projection_tol(minus.rows()),
            "KZeroClass: minus is not a Hermitian projection");
    const auto tp = block_traces(plus, plus_partition, block_count);
    const auto tm = block_traces(minus, minus_partition, block_count);
    std::vector<long> ranks(block_count);
    for (std::size_t j = 0; j < block_count; ++j)
      ranks[j] = detail::integral_trace(tp[j], "KZeroClass") -
                 detail::integral_trace(tm[j], "KZeroClass");
    return {std::move(plus), std::move(minus), std::move(ranks)};
  }

  /// Class of projections p, q in A (x) M_L (the half-dimension of a layout).
  static KZeroClass over(const AmbientLayout& layout, ComplexMatrix p, ComplexMatrix q) {
    const auto partition = layout.half_partition();
    require(p.rows() == layout.half_dim() && q.rows() == layout.half_dim(),
            "KZeroClass: projection dimension does not match the layout");
    require(off_block_norm(p, partition) <= 1e-10 && off_block_norm(q, partition) <= 1e-10,
            "KZeroClass: projection is not in A (x) M_L (couples simple summands)");
    return make(std::move(p), std::move(q), partition, partition, layout.block_count());
  }
};

/// A homomorphism into M_2(A (x) M_L) together with its layout.
struct AmplifiedHom {
  SpectralHom hom;
  AmbientLayout layout;

  AmplifiedHom(SpectralHom h, AmbientLayout l) : hom(std::move(h)), layout(std::move(l)) {
    require(hom.ambient_dim() == layout.dim(), "AmplifiedHom: dimension mismatch");
    require((hom.grading().matrix() - layout.grading().matrix()).norm() == 0.0,
            "AmplifiedHom: ambient must carry the standard double grading");
    const auto partition = layout.full_partition();
    require(off_block_norm(hom.support(), partition) <= 1e-10 &&
                off_block_norm(hom.op(), partition) <= 1e-10 * std::max(1.0, hom.op().norm()),
            "AmplifiedHom: homomorphism does not take values in M_2(A (x) M_L)");
  }
};

/// Projection in A (x) M_L with the given rank in each simple summand.
inline ComplexMatrix random_block_projection(Rng& rng, const AmbientLayout& layout,
                                             const std::vector<Index>& ranks) {
  require(ranks.size() == layout.block_count(), "random_block_projection: one rank per block");
  ComplexMatrix p = ComplexMatrix::Zero(layout.half_dim(), layout.half_dim());
  for (std::size_t j = 0; j < layout.block_count(); ++j) {
    const Index o = layout.block_offset(j), n = layout.block_size(j);
    p.block(o, o, n, n) = random_projection(rng, n, ranks[j]);
  }
  return p;
}

/// Random class [p] - [q] with uniformly drawn blockwise ranks.
inline KZeroClass random_class(Rng& rng, const AmbientLayout& layout) {
  std::vector<Index> rp, rq;
  for (std::size_t j = 0; j < layout.block_count(); ++j) {
    rp.push_back(rng.integer(0, layout.block_size(j)));
    rq.push_back(rng.integer(0, layout.block_size(j)));
  }
  return KZeroClass::over(layout, random_block_projection(rng, layout, rp),
                          random_block_projection(rng, layout, rq));
}

/// Random homomorphism over the layout: graded support with random blockwise
/// ranks in each sector and a degree-one D compressed to it.
inline AmplifiedHom random_amplified_hom(Rng& rng, const AmbientLayout& layout) {
  std::vector<Index> r0, r1;
  for (std::size_t j = 0; j < layout.block_count(); ++j) {
    r0.push_back(rng.integer(0, layout.block_size(j)));
    r1.push_back(rng.integer(0, layout.block_size(j)));
  }
  const ComplexMatrix p = block_diag(random_block_projection(rng, layout, r0),
                                     random_block_projection(rng, layout, r1));
  const Index h = layout.half_dim();
  ComplexMatrix c = ComplexMatrix::Zero(h, h);
  for (std::size_t j = 0; j < layout.block_count(); ++j) {
    const Index o = layout.block_offset(j), n = layout.block_size(j);
    c.block(o, o, n, n) = random_matrix(rng, n, n);
  }
  ComplexMatrix d = ComplexMatrix::Zero(2 * h, 2 * h);
  d.topRightCorner(h, h) = c.adjoint();
  d.bottomLeftCorner(h, h) = c;
  return {SpectralHom(layout.grading(), p, hermitian_part(p * d * p)), layout};
}

// ---------------------------------------------------------------------------

/// p(w) = (w + 1)/2 for a self-adjoint involution w.
inline ComplexMatrix proj_from_involution(const ComplexMatrix& w) {
  require(w.rows() == w.cols(), "proj_from_involution: matrix is not square");
  const Index n = w.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  require(hermitian_defect(w) <= 1e-10 && (w * w - id).norm() <= 1e-10,
          "proj_from_involution: input is not a self-adjoint involution");
  return hermitian_part(0.5 * (w + id));
}

/// phi_x(f) = diag(f(0) p, f(0) q): support p (+) q, D = 0.
inline AmplifiedHom mu(const KZeroClass& x, const AmbientLayout& layout) {
  require(x.plus.rows() == layout.half_dim() && x.minus.rows() == layout.half_dim(),
          "mu: class does not live over the layout's half dimension");
  const Index n = layout.dim();
  return {SpectralHom(layout.grading(), block_diag(x.plus, x.minus), ComplexMatrix::Zero(n, n)),
          layout};
}

/// [p(eps)] - [p(eps u_phi)] with u_phi the Cayley unitary.
inline KZeroClass nu(const AmplifiedHom& phi) {
  const Index n = phi.layout.dim();
  const ComplexMatrix& eps = phi.hom.grading().matrix();
  const ComplexMatrix u = cayley_unitary(phi.hom).u;
  const ComplexMatrix w = eps * u;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  require(hermitian_defect(w) <= 1e-10 && (w * w - id).norm() <= 1e-10,
          "nu: eps u_phi is not a self-adjoint involution (homomorphism not graded)");
  ComplexMatrix p_eps = hermitian_part(0.5 * (eps + id));
  ComplexMatrix p_w = hermitian_part(0.5 * (w + id));

  // p(eps) - p(eps u) must lie in the non-unital part, i.e. inside the support.
  const ComplexMatrix diff = p_eps - p_w;
  const ComplexMatrix outside = id - phi.hom.support();
  require((outside * diff).norm() <= 1e-10 && (diff * outside).norm() <= 1e-10,
          "nu: p(eps) - p(eps u) is not supported on the homomorphism's support");

  const auto partition = phi.layout.full_partition();
  return KZeroClass::make(std::move(p_eps), std::move(p_w), partition, partition,
                          phi.layout.block_count());
}

struct RoundtripVerdict {
  bool equal = false;
  std::vector<long> input;
  std::vector<long> output;
};

inline RoundtripVerdict roundtrip_check(const KZeroClass& x, const AmbientLayout& layout) {
  const KZeroClass back = nu(mu(x, layout));
  return {back.rank_vector == x.rank_vector, x.rank_vector, back.rank_vector};
}

// Direct sums and inverses -------------------------------------------------

inline SpectralHom hom_direct_sum(const SpectralHom& phi, const SpectralHom& psi) {
  return {GradingOperator(block_diag(phi.grading().matrix(), psi.grading().matrix())),
          block_diag(phi.support(), psi.support()), block_diag(phi.op(), psi.op())};
}

/// Direct sum in the layout of A (x) M_{L1 + L2}: the block-diagonal sum is
/// regrouped by a degree-zero permutation so every (sector, block) run is
/// contiguous again.
inline AmplifiedHom hom_direct_sum(const AmplifiedHom& phi, const AmplifiedHom& psi) {
  require(phi.layout.algebra() == psi.layout.algebra(),
          "hom_direct_sum: homomorphisms have different coefficient algebras");
  const AmbientLayout layout(phi.layout.algebra(),
                             phi.layout.amplification() + psi.layout.amplification());
  const Index offset_psi = phi.layout.dim();
  std::vector<Index> order;  // order[new] = old index in block_diag(phi, psi)
  order.reserve(static_cast<std::size_t>(layout.dim()));
  for (int sector = 0; sector < 2; ++sector) {
    for (std::size_t j = 0; j < layout.block_count(); ++j) {
      const Index a0 = sector * phi.layout.half_dim() + phi.layout.block_offset(j);
      for (Index i = 0; i < phi.layout.block_size(j); ++i) order.push_back(a0 + i);
      const Index b0 = offset_psi + sector * psi.layout.half_dim() + psi.layout.block_offset(j);
      for (Index i = 0; i < psi.layout.block_size(j); ++i) order.push_back(b0 + i);
    }
  }
  const Index n = layout.dim();
  ComplexMatrix perm = ComplexMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) perm(k, order[static_cast<std::size_t>(k)]) = 1.0;
  const SpectralHom sum = hom_direct_sum(phi.hom, psi.hom);
  return {SpectralHom(layout.grading(), perm * sum.support() * perm.transpose(),
                      perm * sum.op() * perm.transpose()),
          layout};
}

/// u = [[0, 1], [1, 0]] exchanging the two sectors of a standard double.
inline ComplexMatrix sector_swap(Index half) {
  ComplexMatrix u = ComplexMatrix::Zero(2 * half, 2 * half);
  u.topRightCorner(half, half).setIdentity();
  u.bottomLeftCorner(half, half).setIdentity();
  return u;
}

inline bool is_standard_double(const GradingOperator& eps) {
  const Index n = eps.dim();
  if (n % 2 != 0) return false;
  return (eps.matrix() - GradingOperator::standard(n / 2, n / 2).matrix()).norm() == 0.0;
}

/// u phi u^*: D^op = u D u^*, support u P u^*.
inline SpectralHom hom_inverse(const SpectralHom& phi) {
  require(is_standard_double(phi.grading()),
          "hom_inverse: ambient is not a standard double (grading diag(I, -I))");
  const ComplexMatrix u = sector_swap(phi.ambient_dim() / 2);
  return {phi.grading(), u * phi.support() * u, u * phi.op() * u};
}

inline AmplifiedHom hom_inverse(const AmplifiedHom& phi) {
  return {hom_inverse(phi.hom), phi.layout};
}

// Homotopy witnesses -------------------------------------------------------

struct HomotopyTrace {
  std::vector<double> t_grid;
  std::vector<double> norms;
  std::vector<double> bounds;  // reference bound per grid point (NaN when none)
  std::vector<double> gaps;    // min eigenvalue of the squared operator on its support
  double endpoint_residual = 0.0;
  Index endpoint_rank = 0;

  struct Verdict {
    bool monotone = false;       // norms non-increasing along the grid
    bool bounded = true;         // norms <= bounds + 1e-10
    bool gap_ok = true;          // gaps >= t^2 - 1e-9
    double terminal_norm = 0.0;
  } verdict;
};

namespace detail {

inline void check_grid(const std::vector<double>& grid, bool increasing, const char* who) {
  require(!grid.empty(), std::string(who) + ": empty parameter grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(increasing ? grid[i] > grid[i - 1] : grid[i] < grid[i - 1],
            std::string(who) + (increasing ? ": grid must be strictly increasing"
                                           : ": grid must be strictly decreasing"));
}

inline void finish_trace(HomotopyTrace& trace) {
  for (double v : trace.norms) require(std::isfinite(v), "HomotopyTrace: non-finite norm");
  trace.verdict.monotone = true;
  for (std::size_t i = 1; i < trace.norms.size(); ++i)
    if (trace.norms[i] > trace.norms[i - 1] + 1e-14) trace.verdict.monotone = false;
  trace.verdict.terminal_norm = trace.norms.back();
}

}  // namespace detail

/// Phi_t: the operator [[D, t eps], [t eps, D]] on H_phi (+) H_phi^op, written in
/// ambient (+) ambient coordinates where the second copy is identified through
/// the sector swap u. There the operator reads
///   [[D, t eps P u], [t u P eps, u D u^*]],
/// the grading is diag(eps, eps) and Phi_0 = phi (+) u phi u^*.
inline SpectralHom inverse_homotopy_at(const SpectralHom& phi, double t) {
  require(t >= 0.0, "inverse_homotopy: t must be non-negative");
  const SpectralHom inv = hom_inverse(phi);
  const Index n = phi.ambient_dim();
  const ComplexMatrix& eps = phi.grading().matrix();
  const ComplexMatrix u = sector_swap(n / 2);
  const ComplexMatrix coupling = t * eps * phi.support() * u;
  ComplexMatrix op = block_diag(phi.op(), inv.op());
  op.topRightCorner(n, n) = coupling;
  op.bottomLeftCorner(n, n) = coupling.adjoint();
  return {GradingOperator(block_diag(eps, eps)), block_diag(phi.support(), inv.support()),
          std::move(op)};
}

inline HomotopyTrace inverse_homotopy_norms(const SpectralHom& phi, const FunctionSpec& f,
                                            const std::vector<double>& t_grid) {
  detail::check_grid(t_grid, true, "inverse_homotopy_norms");
  require(t_grid.front() >= 0.0, "inverse_homotopy_norms: t must be non-negative");
  require(f.vanishes_at_infinity(), "inverse_homotopy_norms: function is not in C_0(R)");

  HomotopyTrace trace;
  trace.t_grid = t_grid;
  {
    const SpectralHom start = inverse_homotopy_at(phi, 0.0);
    const ComplexMatrix u = sector_swap(phi.ambient_dim() / 2);
    const ComplexMatrix image = phi.evaluate(f.evaluator);
    trace.endpoint_residual =
        op_norm(start.evaluate(f.evaluator) - block_diag(image, u * image * u));
    trace.endpoint_rank = start.support_rank();
  }
  for (double t : t_grid) {
    const SpectralHom phi_t = inverse_homotopy_at(phi, t);
    const double norm = op_norm(phi_t.evaluate(f.evaluator));
    double gap = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < phi_t.spectrum().size(); ++i)
      gap = std::min(gap, phi_t.spectrum()(i) * phi_t.spectrum()(i));
    const double bound = tail_sup(f, t);
    trace.norms.push_back(norm);
    trace.gaps.push_back(gap);
    trace.bounds.push_back(bound);
    if (norm > bound + 1e-10) trace.verdict.bounded = false;
    if (gap < t * t - 1e-9) trace.verdict.gap_ok = false;
  }
  detail::finish_trace(trace);
  return trace;
}

// Fredholm index ------------------------------------------------------------

struct FredholmIndex {
  KZeroClass index_class;  // [kernel projection] - [cokernel projection]
  Index kernel_dim = 0;
  Index cokernel_dim = 0;
  RealVector singular_values;
  double threshold = 0.0;
  bool threshold_ambiguous = false;
  bool localization_ambiguous = false;

  long index() const {
    long total = 0;
    for (long r : index_class.rank_vector) total += r;
    return total;
  }
};

/// dim ker - dim coker of a (possibly rectangular) corner, blockwise when
/// partitions of domain and codomain into simple summands are given.
inline FredholmIndex fredholm_index(const ComplexMatrix& g_plus, const BlockPartition& domain,
                                    const BlockPartition& codomain, std::size_t block_count,
                                    std::optional<double> tau = {}) {
  const ThresholdSvd svd = svd_threshold(g_plus, tau);
  FredholmIndex out{KZeroClass::make(svd.kernel_projection, svd.cokernel_projection, domain,
                                     codomain, block_count),
                    svd.kernel_dim(),
                    svd.cokernel_dim(),
                    svd.singular_values,
                    svd.threshold,
                    svd.ambiguous,
                    false};
  return out;
}

inline FredholmIndex fredholm_index(const ComplexMatrix& g_plus, std::optional<double> tau = {}) {
  return fredholm_index(g_plus, single_block(g_plus.cols()), single_block(g_plus.rows()), 1, tau);
}

namespace detail {

// Part of the near-null subspace (range of `projection`) concentrated on the
// window: eigenvectors of the compressed window selector with eigenvalue > 1/2.
inline ComplexMatrix localized_part(const ComplexMatrix& projection,
                                    const std::vector<Index>& window, bool& ambiguous) {
  const Index n = projection.rows();
  const ComplexMatrix basis = range_basis(projection);
  if (basis.cols() == 0) return ComplexMatrix::Zero(n, n);
  ComplexMatrix selector = ComplexMatrix::Zero(n, n);
  for (Index i : window) {
    require(i >= 0 && i < n, "fredholm_index_localized: window index out of range");
    selector(i, i) = 1.0;
  }
  const EigenSystem es = eig_hermitian(hermitian_part(basis.adjoint() * selector * basis));
  std::vector<Index> keep;
  for (Index i = 0; i < es.size(); ++i) {
    const double w = es.eigenvalues(i);
    if (w > 0.1 && w < 0.9) ambiguous = true;
    if (w > 0.5) keep.push_back(i);
  }
  ComplexMatrix kept(basis.rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    kept.col(static_cast<Index>(k)) = basis * es.basis.col(keep[k]);
  return hermitian_part(kept * kept.adjoint());
}

}  // namespace detail

/// Index of a truncated operator with the truncation artifacts removed: only
/// near-kernel (near-cokernel) vectors concentrated on the given interior
/// window of the domain (codomain) are counted. The discarded vectors live at
/// the truncation edge, where the finite section differs from the operator by
/// a finite-rank perturbation.
inline FredholmIndex fredholm_index_localized(const ComplexMatrix& g_plus,
                                              const std::vector<Index>& domain_window,
                                              const std::vector<Index>& codomain_window,
                                              std::optional<double> tau = {}) {
  const ThresholdSvd svd = svd_threshold(g_plus, tau);
  bool ambiguous = false;
  ComplexMatrix plus = detail::localized_part(svd.kernel_projection, domain_window, ambiguous);
  ComplexMatrix minus = detail::localized_part(svd.cokernel_projection, codomain_window, ambiguous);
  KZeroClass cls = KZeroClass::make(std::move(plus), std::move(minus),
                                    single_block(g_plus.cols()), single_block(g_plus.rows()), 1);
  const double kdim = cls.plus.trace().real(), cdim = cls.minus.trace().real();
  return {std::move(cls),
          static_cast<Index>(std::lround(kdim)),
          static_cast<Index>(std::lround(cdim)),
          svd.singular_values,
          svd.threshold,
          svd.ambiguous,
          ambiguous};
}

/// Phi_t(f) = f(t^{-1} G(D)) as t -> 0, compared with the endpoint
/// phi_x(f) = f(0) (kernel projection of G(D)), the kernel being split into
/// ker G_+ (+) ker G_+^* along the grading.
inline HomotopyTrace compression_homotopy(const SpectralHom& phi, const FunctionSpec& f,
                                          const std::vector<double>& t_grid,
                                          std::optional<double> tau = {}) {
  detail::check_grid(t_grid, false, "compression_homotopy");
  require(t_grid.back() > 0.0, "compression_homotopy: t must stay positive");
  require(f.vanishes_at_infinity(), "compression_homotopy: function is not in C_0(R)");

  const ComplexMatrix basis = range_basis(phi.support());
  const Index r = basis.cols();
  const ComplexMatrix eps_c = hermitian_part(basis.adjoint() * phi.grading().matrix() * basis);
  const ComplexMatrix op_c = hermitian_part(basis.adjoint() * phi.op() * basis);
  const GradingOperator grading_c(eps_c);
  const ComplexMatrix g_c = r > 0 ? bounded_transform(op_c, grading_c) : op_c;

  // Split range(P) by the grading, then take the odd-to-even corner of G(D).
  ComplexMatrix kernel_c = ComplexMatrix::Zero(r, r);
  if (r > 0) {
    const EigenSystem ge = eig_hermitian(eps_c);
    Index n_minus = 0;
    while (n_minus < ge.size() && ge.eigenvalues(n_minus) < 0.0) ++n_minus;
    const ComplexMatrix e_minus = ge.basis.leftCols(n_minus);
    const ComplexMatrix e_plus = ge.basis.rightCols(r - n_minus);
    const ComplexMatrix corner = e_minus.adjoint() * g_c * e_plus;
    const FredholmIndex idx = fredholm_index(corner, tau);
    kernel_c = e_plus * idx.index_class.plus * e_plus.adjoint() +
               e_minus * idx.index_class.minus * e_minus.adjoint();
  }
  const ComplexMatrix kernel = hermitian_part(basis * kernel_c * basis.adjoint());
  const ComplexMatrix endpoint = f(0.0) * kernel;

  HomotopyTrace trace;
  trace.t_grid = t_grid;
  trace.endpoint_rank = static_cast<Index>(std::lround(kernel.trace().real()));
  const ComplexMatrix g = basis * g_c * basis.adjoint();
  for (double t : t_grid) {
    const SpectralHom phi_t(phi.grading(), phi.support(), hermitian_part(g / t));
    trace.norms.push_back(op_norm(phi_t.evaluate(f.evaluator) - endpoint));
    trace.bounds.push_back(std::numeric_limits<double>::quiet_NaN());
    trace.gaps.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  detail::finish_trace(trace);
  trace.endpoint_residual = trace.verdict.terminal_norm;
  return trace;
}

}  // namespace gradedk
