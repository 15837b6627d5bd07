#include "gradedk/functions.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace gradedk;

TEST_CASE("catalog has twelve C_0 functions with declared parity", "[functions]") {
  const auto catalog = function_catalog();
  REQUIRE(catalog.size() == 12);
  for (const auto& f : catalog) {
    INFO(f.name);
    CHECK(f.vanishes_at_infinity());
    CHECK(detail::parity_defect(f.evaluator, f.parity) <= 1e-10);
  }
  CHECK(find_function(catalog, "gauss_s1") != nullptr);
  CHECK(find_function(catalog, "missing") == nullptr);
}

TEST_CASE("bounded transform is not in C_0", "[functions]") {
  CHECK_FALSE(bounded_transform_function().vanishes_at_infinity());
  CHECK_FALSE(make_function("one", [](double) { return Complex(1.0); }, Parity::even)
                  .vanishes_at_infinity());
}

TEST_CASE("wrong parity declaration is rejected", "[functions]") {
  CHECK_THROWS_AS(make_function("x", [](double x) { return Complex(x); }, Parity::even), Error);
  CHECK_NOTHROW(make_function("x", [](double x) { return Complex(x); }, Parity::odd));
}

TEST_CASE("parity_split reproduces the function", "[functions]") {
  const auto f = make_function("mixed", [](double x) { return Complex(std::exp(-(x - 1) * (x - 1))); },
                               Parity::general, TailKind::rapid);
  const auto [even, odd] = parity_split(f);
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    CHECK(std::abs(even(x) + odd(x) - f(x)) < 1e-15);
    CHECK(std::abs(even(-x) - even(x)) < 1e-15);
    CHECK(std::abs(odd(-x) + odd(x)) < 1e-15);
  }
}

TEST_CASE("resolvents", "[functions]") {
  CHECK(std::abs(resolvent_minus()(0.0) - kI) < 1e-16);
  CHECK(std::abs(resolvent_plus()(0.0) + kI) < 1e-16);
}

TEST_CASE("tail_sup matches closed forms", "[functions]") {
  const auto h = inverse_square_plus_one();
  for (double t : {0.0, 1.0, 2.0, 16.0}) CHECK(tail_sup(h, t) == Catch::Approx(1.0 / (1.0 + t * t)));
  // x/(1+x^2) peaks at x = 1 with value 1/2
  const auto catalog = function_catalog();
  const auto* odd = find_function(catalog, "x_over_one_plus_sq");
  REQUIRE(odd != nullptr);
  CHECK(tail_sup(*odd, 0.5) == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(tail_sup(*odd, 2.0) == Catch::Approx(0.4).epsilon(1e-12));
  // x exp(-x^2) peaks at 1/sqrt(2)
  const auto* og = find_function(catalog, "odd_gauss_s1");
  REQUIRE(og != nullptr);
  CHECK(tail_sup(*og, 0.0) == Catch::Approx(std::exp(-0.5) / std::sqrt(2.0)).epsilon(1e-12));
  // bump vanishes beyond 1
  const auto* b = find_function(catalog, "bump");
  REQUIRE(b != nullptr);
  CHECK(tail_sup(*b, 1.5) == 0.0);
}
