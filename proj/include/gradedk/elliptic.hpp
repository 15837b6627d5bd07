#pragma once
//
// First-order elliptic operators D = a(theta)(-i d/dtheta) + b(theta) on the
// circle with k x k matrix coefficients, truncated to Fourier modes |n| <= N.
// The doubled operator [[0, D^*], [D, 0]] is laid out sector-outer:
//   index = sector * (2N+1) k + (n + N) k + c.
// Symbols live on the doubled fiber C^k (+) C^k and are quantized in
// Kohn-Nirenberg (left) ordering: <e_m, Psi_t(s) e_n> = coeff_{m-n} of s(., n/t).
//

#include "gradedk/functions.hpp"
#include "gradedk/graded.hpp"
#include "gradedk/ktheory.hpp"
#include "gradedk/numeric.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gradedk {

using MatrixFunction = std::function<ComplexMatrix(double theta)>;

inline double grid_angle(Index j, Index samples) {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples);
}

struct CircleOperatorSpec {
  Index fiber_dim = 1;
  Index samples = 0;
  std::vector<ComplexMatrix> a;  // a(theta_j), theta_j = 2 pi j / samples
  std::vector<ComplexMatrix> b;

  /// Samples a, b on the uniform grid; checks ellipticity (smallest singular
  /// value of a > 1e-6) and periodicity (values at 0 and 2 pi agree).
  static CircleOperatorSpec sample(Index k, Index samples, const MatrixFunction& a_fn,
                                   const MatrixFunction& b_fn) {
    require(k >= 1, "CircleOperatorSpec: fiber dimension must be >= 1");
    require(samples >= 4, "CircleOperatorSpec: at least 4 theta samples required");
    CircleOperatorSpec spec;
    spec.fiber_dim = k;
    spec.samples = samples;
    for (const auto* fn : {&a_fn, &b_fn}) {
      const ComplexMatrix start = (*fn)(0.0), end = (*fn)(2.0 * std::numbers::pi);
      require(start.rows() == k && start.cols() == k,
              "CircleOperatorSpec: coefficient is not k x k");
      require((start - end).norm() <= 1e-10 * std::max(1.0, start.norm()),
              "CircleOperatorSpec: coefficient is not periodic");
    }
    for (Index j = 0; j < samples; ++j) {
      const double theta = grid_angle(j, samples);
      spec.a.push_back(a_fn(theta));
      spec.b.push_back(b_fn(theta));
      require(spec.a.back().rows() == k && spec.b.back().rows() == k && all_finite(spec.a.back()) &&
                  all_finite(spec.b.back()),
              "CircleOperatorSpec: coefficient sample is not a finite k x k matrix");
    }
    require(spec.min_singular_a() > 1e-6,
            "CircleOperatorSpec: leading coefficient is not invertible (ellipticity)");
    return spec;
  }

  double min_singular_a() const {
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& m : a) {
      Eigen::JacobiSVD<ComplexMatrix> svd(m);
      smallest = std::min(smallest, svd.singularValues().minCoeff());
    }
    return smallest;
  }

  bool theta_independent() const {
    for (std::size_t j = 1; j < a.size(); ++j)
      if ((a[j] - a[0]).norm() != 0.0 || (b[j] - b[0]).norm() != 0.0) return false;
    return true;
  }
};

/// Scalar-coefficient convenience: a, b given as complex functions of theta.
inline CircleOperatorSpec scalar_circle_spec(Index samples, const std::function<Complex(double)>& a,
                                             const std::function<Complex(double)>& b) {
  return CircleOperatorSpec::sample(
      1, samples, [a](double th) { return ComplexMatrix::Constant(1, 1, a(th)); },
      [b](double th) { return ComplexMatrix::Constant(1, 1, b(th)); });
}

// Fourier analysis ---------------------------------------------------------

/// c_q = (1/P) sum_j x_j e^{-i q theta_j} for |q| <= max_mode, stored at q + max_mode.
inline std::vector<Complex> fourier_coefficients(const std::vector<Complex>& samples,
                                                 Index max_mode) {
  const auto p = static_cast<Index>(samples.size());
  require(p > 2 * max_mode, "fourier_coefficients: too few samples for the requested modes");
  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, samples);
  std::vector<Complex> out(static_cast<std::size_t>(2 * max_mode + 1));
  for (Index q = -max_mode; q <= max_mode; ++q)
    out[static_cast<std::size_t>(q + max_mode)] =
        spectrum[static_cast<std::size_t>(((q % p) + p) % p)] / static_cast<double>(p);
  return out;
}

/// Matrix-valued version, entrywise.
inline std::vector<ComplexMatrix> fourier_coefficients(const std::vector<ComplexMatrix>& samples,
                                                       Index max_mode) {
  require(!samples.empty(), "fourier_coefficients: no samples");
  const Index rows = samples[0].rows(), cols = samples[0].cols();
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(2 * max_mode + 1),
                                 ComplexMatrix::Zero(rows, cols));
  std::vector<Complex> series(samples.size());
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      for (std::size_t j = 0; j < samples.size(); ++j) series[j] = samples[j](r, c);
      const auto coeffs = fourier_coefficients(series, max_mode);
      for (std::size_t q = 0; q < coeffs.size(); ++q) out[q](r, c) = coeffs[q];
    }
  }
  return out;
}

// Operator assembly ---------------------------------------------------------

inline Index mode_index(Index n, Index truncation, Index fiber_dim, Index component) {
  return (n + truncation) * fiber_dim + component;
}

/// D_N with blocks (m, n) = n a_{m-n} + b_{m-n} on modes |m|, |n| <= N.
inline ComplexMatrix assemble_corner(const CircleOperatorSpec& spec, Index truncation) {
  const Index n_max = truncation, k = spec.fiber_dim;
  require(n_max >= 1, "assemble_corner: truncation must be >= 1");
  require(spec.samples > 4 * n_max,
          "assemble_corner: theta grid too coarse for the truncation (need samples > 4N)");
  const auto a_hat = fourier_coefficients(spec.a, 2 * n_max);
  const auto b_hat = fourier_coefficients(spec.b, 2 * n_max);
  const Index dim = (2 * n_max + 1) * k;
  ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
  for (Index m = -n_max; m <= n_max; ++m) {
    for (Index n = -n_max; n <= n_max; ++n) {
      const auto q = static_cast<std::size_t>(m - n + 2 * n_max);
      d.block(mode_index(m, n_max, k, 0), mode_index(n, n_max, k, 0), k, k) =
          static_cast<double>(n) * a_hat[q] + b_hat[q];
    }
  }
  return d;
}

/// Doubled operator [[0, D_N^*], [D_N, 0]], Hermitian and odd for diag(I, -I).
inline ComplexMatrix assemble_operator(const CircleOperatorSpec& spec, Index truncation) {
  const ComplexMatrix d = assemble_corner(spec, truncation);
  const Index h = d.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * h, 2 * h);
  out.topRightCorner(h, h) = d.adjoint();
  out.bottomLeftCorner(h, h) = d;
  return out;
}

inline GradingOperator doubled_grading(const CircleOperatorSpec& spec, Index truncation) {
  const Index h = (2 * truncation + 1) * spec.fiber_dim;
  return GradingOperator::standard(h, h);
}

/// Reorders a matrix on [mode][sector][fiber] to [sector][mode][fiber].
inline ComplexMatrix sector_outer(const ComplexMatrix& m, Index truncation, Index fiber_dim) {
  const Index modes = 2 * truncation + 1, k = fiber_dim, dim = 2 * modes * k;
  require(m.rows() == dim && m.cols() == dim, "sector_outer: dimension mismatch");
  std::vector<Index> to(static_cast<std::size_t>(dim));
  for (Index mode = 0; mode < modes; ++mode)
    for (Index s = 0; s < 2; ++s)
      for (Index c = 0; c < k; ++c)
        to[static_cast<std::size_t>(mode * 2 * k + s * k + c)] = s * modes * k + mode * k + c;
  ComplexMatrix out(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i)
      out(to[static_cast<std::size_t>(i)], to[static_cast<std::size_t>(j)]) = m(i, j);
  return out;
}

// Principal symbol ---------------------------------------------------------

/// sigma(theta, xi) = xi a(theta) and its double [[0, sigma^*], [sigma, 0]] on
/// the theta grid of the operator spec and a uniform xi grid on [-Xi, Xi].
class SymbolField {
 public:
  SymbolField(const CircleOperatorSpec& spec, double xi_max, Index xi_points = 65)
      : fiber_dim_(spec.fiber_dim), samples_(spec.samples), xi_max_(xi_max), a_(spec.a) {
    require(xi_max > 0.0, "SymbolField: Xi must be positive");
    require(xi_points >= 3, "SymbolField: at least 3 xi points required");
    xi_ = RealVector::LinSpaced(xi_points, -xi_max, xi_max);
    for (const auto& a : a_) unit_.push_back(eig_hermitian(unit_double(a)));
  }

  Index fiber_dim() const { return fiber_dim_; }
  Index doubled_dim() const { return 2 * fiber_dim_; }
  Index samples() const { return samples_; }
  double xi_max() const { return xi_max_; }
  const RealVector& xi() const { return xi_; }
  double theta(Index j) const { return grid_angle(j, samples_); }

  ComplexMatrix sigma(Index j, double xi) const { return xi * a_[static_cast<std::size_t>(j)]; }

  ComplexMatrix doubled(Index j, double xi) const {
    return xi * unit_double(a_[static_cast<std::size_t>(j)]);
  }

  /// f(doubled(j, xi)) through the cached eigensystem of the unit double.
  template <class F>
  ComplexMatrix apply(Index j, double xi, F&& f) const {
    const EigenSystem& es = unit_[static_cast<std::size_t>(j)];
    ComplexVector values(es.size());
    for (Index i = 0; i < es.size(); ++i) values(i) = Complex(f(xi * es.eigenvalues(i)));
    return es.basis * values.asDiagonal() * es.basis.adjoint();
  }

  GradingOperator fiber_grading() const {
    return GradingOperator::standard(fiber_dim_, fiber_dim_);
  }

  /// max over samples of |sigma(theta, s xi) - s sigma(theta, xi)| for s in {2, 1/2, -1}.
  double homogeneity_defect() const {
    double worst = 0.0;
    for (Index j = 0; j < samples_; ++j)
      for (Index l = 0; l < xi_.size(); ++l)
        for (double s : {2.0, 0.5, -1.0})
          worst = std::max(worst, (sigma(j, s * xi_(l)) - s * sigma(j, xi_(l))).norm());
    return worst;
  }

 private:
  static ComplexMatrix unit_double(const ComplexMatrix& a) {
    const Index k = a.rows();
    ComplexMatrix out = ComplexMatrix::Zero(2 * k, 2 * k);
    out.topRightCorner(k, k) = a.adjoint();
    out.bottomLeftCorner(k, k) = a;
    return out;
  }

  Index fiber_dim_;
  Index samples_;
  double xi_max_;
  std::vector<ComplexMatrix> a_;
  RealVector xi_;
  std::vector<EigenSystem> unit_;
};

struct ResolventDecayRow {
  Index theta_index;
  double xi;
  double norm_minus;  // |(sigma - i)^{-1}|
  double norm_plus;   // |(sigma + i)^{-1}|
  double bound;       // C / (1 + |xi|)
};

struct ResolventDecayTable {
  double constant = 0.0;  // C = 1 + 1 / min singular value of a
  std::vector<ResolventDecayRow> rows;
  bool within_bound = true;
};

inline ResolventDecayTable symbol_resolvent_decay(const SymbolField& field) {
  ResolventDecayTable table;
  double smallest = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < field.samples(); ++j) {
    Eigen::JacobiSVD<ComplexMatrix> svd(field.sigma(j, 1.0));
    smallest = std::min(smallest, svd.singularValues().minCoeff());
  }
  table.constant = 1.0 + 1.0 / smallest;
  for (Index j = 0; j < field.samples(); ++j) {
    for (Index l = 0; l < field.xi().size(); ++l) {
      const double xi = field.xi()(l);
      const ComplexMatrix rm = field.apply(j, xi, [](double x) { return 1.0 / Complex(x, -1.0); });
      const ComplexMatrix rp = field.apply(j, xi, [](double x) { return 1.0 / Complex(x, 1.0); });
      ResolventDecayRow row{j, xi, op_norm(rm), op_norm(rp), table.constant / (1.0 + std::abs(xi))};
      if (row.norm_minus > row.bound * (1.0 + 1e-12) || row.norm_plus > row.bound * (1.0 + 1e-12))
        table.within_bound = false;
      table.rows.push_back(row);
    }
  }
  return table;
}

/// Smallest Xi = Xi0 * 2^k with |u(theta, +-Xi) - I| <= tau_tail on every sample.
inline double choose_xi_max(const CircleOperatorSpec& spec, double tau_tail, double initial = 8.0) {
  require(tau_tail > 0.0, "choose_xi_max: tau_tail must be positive");
  const SymbolField probe(spec, 1.0, 3);
  const double s_min = spec.min_singular_a();
  double xi = initial;
  for (int it = 0; it < 80; ++it, xi *= 2.0) {
    // |u - I| = 2 |(sigma - i)^{-1}| = 2 / sqrt(s_min^2 xi^2 + 1)
    if (2.0 / std::sqrt(s_min * s_min * xi * xi + 1.0) <= tau_tail) return xi;
  }
  throw Error("choose_xi_max: no admissible Xi found");
}

struct SymbolClassReport {
  double xi_max = 0.0;
  double boundary_defect = 0.0;    // max |u(theta, +-Xi) - I|
  double projection_defect = 0.0;  // max defect of p(u eps) as a Hermitian projection
  double cayley_at_zero_defect = 0.0;  // |u(theta, 0) + I|
  bool equal_rank = true;          // tr p(eps) = tr p(u eps) on every fiber
  std::vector<std::pair<std::string, double>> parity_defects;  // odd f: |eps f eps + f|
};

inline SymbolClassReport symbol_class(const SymbolField& field,
                                      const std::vector<FunctionSpec>& catalog,
                                      double tau_tail) {
  SymbolClassReport report;
  report.xi_max = field.xi_max();
  const ComplexMatrix eps = field.fiber_grading().matrix();
  const Index d = field.doubled_dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const auto cayley = [](double x) { return Complex(x, 1.0) / Complex(x, -1.0); };
  const double p_eps_rank = static_cast<double>(field.fiber_dim());
  for (Index j = 0; j < field.samples(); ++j) {
    for (double xi : {-field.xi_max(), field.xi_max()})
      report.boundary_defect =
          std::max(report.boundary_defect, op_norm(field.apply(j, xi, cayley) - id));
    report.cayley_at_zero_defect =
        std::max(report.cayley_at_zero_defect, op_norm(field.apply(j, 0.0, cayley) + id));
    for (Index l = 0; l < field.xi().size(); ++l) {
      const ComplexMatrix u = field.apply(j, field.xi()(l), cayley);
      const ComplexMatrix p = 0.5 * (u * eps + id);
      report.projection_defect = std::max(report.projection_defect, projection_defect(p));
      if (std::abs(p.trace().real() - p_eps_rank) > 1e-10) report.equal_rank = false;
    }
  }
  for (const auto& f : catalog) {
    if (f.parity != Parity::odd) continue;
    double worst = 0.0;
    for (Index j = 0; j < field.samples(); ++j)
      for (Index l = 0; l < field.xi().size(); ++l) {
        const ComplexMatrix v = field.apply(j, field.xi()(l), f.evaluator);
        worst = std::max(worst, (eps * v * eps + v).norm());
      }
    report.parity_defects.emplace_back(f.name, worst);
  }
  require(report.boundary_defect <= tau_tail,
          "symbol_class: Xi too small, Cayley transform not within tau_tail of I at |xi| = Xi");
  return report;
}

// Quantization ----------------------------------------------------------------

/// A matrix-valued symbol sampled on the uniform theta grid of `samples` points.
struct SampledSymbol {
  Index dim = 1;
  Index samples = 0;
  std::function<ComplexMatrix(Index theta_index, double xi)> at;

  static SampledSymbol from_function(Index dim, Index samples,
                                     std::function<ComplexMatrix(double, double)> fn) {
    return {dim, samples, [fn = std::move(fn), samples](Index j, double xi) {
              return fn(grid_angle(j, samples), xi);
            }};
  }
};

/// f(sigma-double) as a sampled symbol.
inline SampledSymbol functional_symbol(const SymbolField& field, const FunctionSpec& f) {
  return {field.doubled_dim(), field.samples(),
          [&field, g = f.evaluator](Index j, double xi) { return field.apply(j, xi, g); }};
}

struct QuantizationConfig {
  Index truncation = 64;   // modes |n| <= N
  Index samples = 260;     // theta grid size, > 4N
  double tau_tail = 1e-3;
  double xi_max = 0.0;     // 0: chosen from the operator spec
};

/// Psi_t(s) on modes |n| <= N, laid out [mode][component].
inline ComplexMatrix quantize(const SampledSymbol& s, double t, Index truncation,
                              std::optional<double> xi_max = {}) {
  const Index n_max = truncation, d = s.dim;
  require(t > 0.0, "quantize: t must be positive");
  require(s.samples > 4 * n_max, "quantize: theta grid too coarse for the truncation");
  require(!xi_max || static_cast<double>(n_max) / t <= *xi_max * (1.0 + 1e-12),
          "quantize: xi grid does not cover n/t for |n| <= N");
  const Index dim = (2 * n_max + 1) * d;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  std::vector<ComplexMatrix> values(static_cast<std::size_t>(s.samples));
  for (Index n = -n_max; n <= n_max; ++n) {
    const double xi = static_cast<double>(n) / t;
    for (Index j = 0; j < s.samples; ++j) values[static_cast<std::size_t>(j)] = s.at(j, xi);
    const auto coeffs = fourier_coefficients(values, 2 * n_max);
    for (Index m = -n_max; m <= n_max; ++m)
      out.block(mode_index(m, n_max, d, 0), mode_index(n, n_max, d, 0), d, d) =
          coeffs[static_cast<std::size_t>(m - n + 2 * n_max)];
  }
  return out;
}

// Winding numbers and indices ----------------------------------------------

/// Degree of a nonvanishing loop from argument increments on a uniform grid.
/// The grid is doubled until two consecutive grids both resolve every
/// increment below pi/2 and agree (a single coarse grid can alias).
inline long winding_number(const std::function<Complex(double)>& g, Index samples = 256) {
  require(samples >= 4, "winding_number: at least 4 samples required");
  std::optional<long> previous;
  for (Index p = samples; p <= (Index{1} << 22); p *= 2) {
    std::vector<Complex> values(static_cast<std::size_t>(p));
    double largest = 0.0;
    for (Index j = 0; j < p; ++j) {
      values[static_cast<std::size_t>(j)] = g(grid_angle(j, p));
      largest = std::max(largest, std::abs(values[static_cast<std::size_t>(j)]));
    }
    for (const auto& v : values)
      require(std::abs(v) > 1e-12 * std::max(1.0, largest), "winding_number: symbol vanishes");
    double total = 0.0;
    bool resolved = true;
    for (Index j = 0; j < p; ++j) {
      const Complex next = values[static_cast<std::size_t>((j + 1) % p)];
      const double step = std::arg(next / values[static_cast<std::size_t>(j)]);
      if (std::abs(step) >= std::numbers::pi / 2.0) {
        resolved = false;
        break;
      }
      total += step;
    }
    if (!resolved) {
      previous.reset();
      continue;
    }
    const long w = std::lround(total / (2.0 * std::numbers::pi));
    if (previous && *previous == w) return w;
    previous = w;
  }
  throw Error("winding_number: argument increments not resolved");
}

/// wind det s(., -Xi) - wind det s(., +Xi) for a symbol invertible off a
/// compact set in xi; zero for equal-rank bundles on the circle.
inline long symbolic_index(const std::function<ComplexMatrix(double theta, double xi)>& s,
                           double xi_max, Index samples = 256) {
  auto det_at = [&](double xi) {
    return [&s, xi](double th) { return s(th, xi).determinant(); };
  };
  return winding_number(det_at(-xi_max), samples) - winding_number(det_at(xi_max), samples);
}

/// Interior window |n| <= N/2 of the [mode][fiber] layout.
inline std::vector<Index> central_window(Index truncation, Index fiber_dim) {
  std::vector<Index> w;
  for (Index n = -truncation / 2; n <= truncation / 2; ++n)
    for (Index c = 0; c < fiber_dim; ++c) w.push_back(mode_index(n, truncation, fiber_dim, c));
  return w;
}

// Index theorem experiment ---------------------------------------------------

struct QuantizationCurve {
  std::string function;
  std::vector<double> errors;
  double fit_exponent = 0.0;
  bool strictly_decreasing = false;
  bool contaminated = false;  // |f| above tau_tail beyond the truncation at some t
};

struct IndexExperimentReport {
  std::vector<double> t_grid;
  std::vector<QuantizationCurve> curves;
  long index_analytic = 0;
  long index_symbolic = 0;
  bool index_ambiguous = false;
  double xi_max = 0.0;
  Index truncation = 0;
};

/// Least-squares slope of log e against log t.
inline double fit_exponent(const std::vector<double>& t, const std::vector<double>& e) {
  require(t.size() == e.size() && t.size() >= 2, "fit_exponent: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(t[i] > 0.0 && e[i] > 0.0, "fit_exponent: values must be positive");
    const double x = std::log(t[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Analytic index of the truncated D_N from near-kernel vectors concentrated
/// on the central modes.
inline FredholmIndex circle_analytic_index(const CircleOperatorSpec& spec, Index truncation) {
  const ComplexMatrix d = assemble_corner(spec, truncation);
  const auto window = central_window(truncation, spec.fiber_dim);
  return fredholm_index_localized(d, window, window);
}

inline long circle_symbolic_index(const CircleOperatorSpec& spec, double xi_max) {
  const SymbolField field(spec, xi_max, 3);
  const Index p = spec.samples;
  // sigma is sampled: evaluate on the operator spec grid by nearest sample.
  return symbolic_index(
      [&field, p](double th, double xi) {
        const auto j = static_cast<Index>(std::lround(th / (2.0 * std::numbers::pi) *
                                                      static_cast<double>(p))) % p;
        return field.sigma(j, xi);
      },
      xi_max, p);
}

/// e(t) = |Psi_t(f(sigma-double)) - f(t^{-1} D)| per catalog function and t.
inline IndexExperimentReport index_theorem_experiment(const CircleOperatorSpec& spec,
                                                      const std::vector<FunctionSpec>& catalog,
                                                      const std::vector<double>& t_grid,
                                                      const QuantizationConfig& config) {
  detail::check_grid(t_grid, true, "index_theorem_experiment");
  require(t_grid.front() > 0.0, "index_theorem_experiment: t must be positive");
  require(spec.samples == config.samples, "index_theorem_experiment: spec sampled off-config");
  const Index n_max = config.truncation, k = spec.fiber_dim;

  IndexExperimentReport report;
  report.t_grid = t_grid;
  report.truncation = n_max;
  report.xi_max = config.xi_max > 0.0 ? config.xi_max : choose_xi_max(spec, config.tau_tail);
  report.xi_max = std::max(report.xi_max, static_cast<double>(n_max) / t_grid.front());
  const SymbolField field(spec, report.xi_max);

  const EigenSystem full = eig_hermitian(assemble_operator(spec, n_max));
  for (const auto& f : catalog) {
    require(f.vanishes_at_infinity(), "index_theorem_experiment: " + f.name + " is not in C_0");
    QuantizationCurve curve;
    curve.function = f.name;
    const SampledSymbol symbol = functional_symbol(field, f);
    for (double t : t_grid) {
      if (tail_sup(f, static_cast<double>(n_max + 1) / t) > config.tau_tail) curve.contaminated = true;
      const ComplexMatrix psi = sector_outer(quantize(symbol, t, n_max, report.xi_max), n_max, k);
      const ComplexMatrix rhs =
          apply_function(full, [&f, t](double x) { return f(x / t); });
      curve.errors.push_back(op_norm(psi - rhs));
    }
    curve.strictly_decreasing = true;
    for (std::size_t i = 1; i < curve.errors.size(); ++i)
      if (!(curve.errors[i] < curve.errors[i - 1])) curve.strictly_decreasing = false;
    bool positive = true;
    for (double e : curve.errors) positive = positive && e > 0.0;
    curve.fit_exponent = positive && t_grid.size() >= 2
                             ? fit_exponent(t_grid, curve.errors)
                             : -std::numeric_limits<double>::infinity();
    report.curves.push_back(std::move(curve));
  }

  const FredholmIndex analytic = circle_analytic_index(spec, n_max);
  report.index_analytic = analytic.index();
  report.index_ambiguous = analytic.threshold_ambiguous || analytic.localization_ambiguous;
  report.index_symbolic = circle_symbolic_index(spec, report.xi_max);
  return report;
}

// Toeplitz ------------------------------------------------------------------

struct ToeplitzReport {
  Index truncation = 0;
  long index = 0;
  long winding = 0;
  long index_symbolic = 0;
  Index kernel_dim = 0;
  Index cokernel_dim = 0;
  Index stability_threshold = 0;
  bool stable = false;     // N >= 4 |winding| + 16
  bool ambiguous = false;
  bool agrees() const { return index == -winding; }
};

/// Square section T_{mn} = g_{m-n}, 0 <= m, n <= N, of the Toeplitz operator.
inline ComplexMatrix toeplitz_section(const std::function<Complex(double)>& g, Index truncation,
                                      Index samples = 0) {
  const Index n_max = truncation;
  const Index p = samples > 0 ? samples : 4 * n_max + 4;
  require(p > 2 * n_max, "toeplitz_section: too few samples");
  std::vector<Complex> values(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) values[static_cast<std::size_t>(j)] = g(grid_angle(j, p));
  const auto coeffs = fourier_coefficients(values, n_max);
  ComplexMatrix t(n_max + 1, n_max + 1);
  for (Index m = 0; m <= n_max; ++m)
    for (Index n = 0; n <= n_max; ++n) t(m, n) = coeffs[static_cast<std::size_t>(m - n + n_max)];
  return t;
}

inline ToeplitzReport toeplitz_experiment(const std::function<Complex(double)>& g,
                                          Index truncation) {
  require(truncation >= 1, "toeplitz_experiment: truncation must be >= 1");
  ToeplitzReport report;
  report.truncation = truncation;
  report.winding = winding_number(g);
  report.stability_threshold = 4 * std::abs(report.winding) + 16;
  report.stable = truncation >= report.stability_threshold;
  const ComplexMatrix t = toeplitz_section(g, truncation);
  std::vector<Index> window;
  for (Index n = 0; n <= truncation / 2; ++n) window.push_back(n);
  const FredholmIndex idx = fredholm_index_localized(t, window, window);
  report.index = idx.index();
  report.kernel_dim = idx.kernel_dim;
  report.cokernel_dim = idx.cokernel_dim;
  report.ambiguous = idx.threshold_ambiguous || idx.localization_ambiguous;
  // Symbol of the compression: g on xi > 0, 1 on xi < 0.
  report.index_symbolic = symbolic_index(
      [&g](double th, double xi) {
        return ComplexMatrix::Constant(1, 1, xi > 0.0 ? g(th) : Complex(1.0));
      },
      1.0);
  return report;
}

}  // namespace gradedk
