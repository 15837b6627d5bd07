#pragma once
//
// Functions on the real line fed to the functional calculus, tagged with
// their parity (the grading of C_0(R) splits even and odd functions) and a
// sampled decay witness standing in for "vanishes at infinity".
//

#include "gradedk/numeric.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gradedk {

enum class Parity { even, odd, general };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::general: return "general";
  }
  return "general";
}

/// Broad shape of a function's tail; rapid means faster than any power.
enum class TailKind { rational, rapid };

struct FunctionSpec {
  std::string name;
  std::function<Complex(double)> evaluator;
  Parity parity = Parity::general;
  TailKind tail = TailKind::rational;
  std::array<double, 3> decay_witness{};  // max |f(+-x)| for x = 10, 100, 1000

  Complex operator()(double x) const { return evaluator(x); }

  /// C_0 membership surrogate: witnesses non-increasing and small at 1000.
  bool vanishes_at_infinity() const {
    return decay_witness[0] >= decay_witness[1] && decay_witness[1] >= decay_witness[2] &&
           decay_witness[2] < 1e-2;
  }
};

namespace detail {

inline double parity_defect(const std::function<Complex(double)>& f, Parity parity) {
  if (parity == Parity::general) return 0.0;
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = -20.0 + 0.1 * i;
    const Complex fx = f(x);
    worst = std::max(worst, std::abs(f(-x) - sign * fx) / std::max(1.0, std::abs(fx)));
  }
  return worst;
}

}  // namespace detail

/// Builds a FunctionSpec, computing its decay witness and checking the
/// declared parity on a sample grid (throws when it fails by more than 1e-10).
inline FunctionSpec make_function(std::string name, std::function<Complex(double)> f,
                                  Parity parity, TailKind tail = TailKind::rational) {
  require(detail::parity_defect(f, parity) <= 1e-10,
          "make_function: declared parity does not hold for " + name);
  FunctionSpec spec{std::move(name), std::move(f), parity, tail, {}};
  const double radii[3] = {10.0, 100.0, 1000.0};
  for (std::size_t i = 0; i < 3; ++i)
    spec.decay_witness[i] =
        std::max(std::abs(spec.evaluator(radii[i])), std::abs(spec.evaluator(-radii[i])));
  return spec;
}

// Named functions ----------------------------------------------------------

/// r_-(x) = (x - i)^{-1}
inline FunctionSpec resolvent_minus() {
  return make_function("r_minus", [](double x) { return 1.0 / Complex(x, -1.0); }, Parity::general);
}

/// r_+(x) = (x + i)^{-1}
inline FunctionSpec resolvent_plus() {
  return make_function("r_plus", [](double x) { return 1.0 / Complex(x, 1.0); }, Parity::general);
}

/// G(x) = x (x^2 + 1)^{-1/2}; bounded but not in C_0.
inline FunctionSpec bounded_transform_function() {
  return make_function("bounded_transform",
                       [](double x) { return Complex(x / std::sqrt(x * x + 1.0)); }, Parity::odd);
}

/// (x^2 + 1)^{-1}
inline FunctionSpec inverse_square_plus_one() {
  return make_function("inv_one_plus_sq", [](double x) { return Complex(1.0 / (1.0 + x * x)); },
                       Parity::even);
}

namespace detail {

inline std::string width_tag(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

}  // namespace detail

inline FunctionSpec gaussian(double s) {
  return make_function("gauss_s" + detail::width_tag(s),
                       [s](double x) { return Complex(std::exp(-x * x / s)); }, Parity::even,
                       TailKind::rapid);
}

inline FunctionSpec odd_gaussian(double s) {
  return make_function("odd_gauss_s" + detail::width_tag(s),
                       [s](double x) { return Complex(x * std::exp(-x * x / s)); }, Parity::odd,
                       TailKind::rapid);
}

/// exp(-1/(1-x^2)) on |x| < 1, zero outside.
inline double bump(double x) {
  const double y = 1.0 - x * x;
  return y > 0.0 ? std::exp(-1.0 / y) : 0.0;
}

/// The 12-function test catalog: resolvents and their products, Gaussians,
/// odd Gaussians and compactly supported bumps.
inline std::vector<FunctionSpec> function_catalog() {
  std::vector<FunctionSpec> c;
  c.push_back(resolvent_minus());
  c.push_back(resolvent_plus());
  c.push_back(inverse_square_plus_one());
  c.push_back(make_function("x_over_one_plus_sq",
                            [](double x) { return Complex(x / (1.0 + x * x)); }, Parity::odd));
  c.push_back(make_function("r_minus_squared",
                            [](double x) {
                              const Complex r = 1.0 / Complex(x, -1.0);
                              return r * r;
                            },
                            Parity::general));
  c.push_back(gaussian(1.0));
  c.push_back(gaussian(4.0));
  c.push_back(odd_gaussian(1.0));
  c.push_back(odd_gaussian(4.0));
  c.push_back(make_function("bump", [](double x) { return Complex(bump(x)); }, Parity::even,
                            TailKind::rapid));
  c.push_back(make_function("shifted_bump",
                            [](double x) { return Complex(bump((x - 1.0) / 1.5)); },
                            Parity::general, TailKind::rapid));
  c.push_back(make_function("odd_bump", [](double x) { return Complex(x * bump(x / 2.0)); },
                            Parity::odd, TailKind::rapid));
  return c;
}

inline const FunctionSpec* find_function(const std::vector<FunctionSpec>& catalog,
                                         const std::string& name) {
  for (const auto& f : catalog)
    if (f.name == name) return &f;
  return nullptr;
}

/// Even and odd parts (f(x) + f(-x))/2, (f(x) - f(-x))/2.
inline std::pair<FunctionSpec, FunctionSpec> parity_split(const FunctionSpec& f) {
  auto g = f.evaluator;
  return {make_function(f.name + "_even", [g](double x) { return 0.5 * (g(x) + g(-x)); },
                        Parity::even, f.tail),
          make_function(f.name + "_odd", [g](double x) { return 0.5 * (g(x) - g(-x)); },
                        Parity::odd, f.tail)};
}

/// sup_{|x| >= t} |f(x)|, from a dense sample out to t + 4096 refined by a
/// golden-section search around the best sample.
inline double tail_sup(const FunctionSpec& f, double t) {
  require(t >= 0.0, "tail_sup: t must be non-negative");
  auto magnitude = [&](double x) {
    return std::max(std::abs(f(x)), std::abs(f(-x)));
  };
  double best_x = t, best = magnitude(t);
  double step = 1e-3;
  double x = t;
  while (x < t + 4096.0) {
    x += step;
    if (x - t > 64.0) step = std::min(1.0, step * 1.001);
    const double m = magnitude(x);
    if (m > best) {
      best = m;
      best_x = x;
    }
  }
  if (best_x > t) {
    double lo = std::max(t, best_x - 2.0 * step), hi = best_x + 2.0 * step;
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
      const double a = hi - golden * (hi - lo), b = lo + golden * (hi - lo);
      if (magnitude(a) > magnitude(b)) hi = b; else lo = a;
    }
    best = std::max(best, magnitude(0.5 * (lo + hi)));
  }
  return best;
}

}  // namespace gradedk
