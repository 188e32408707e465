#include <cmath>

#include "bequest/numerics.hpp"
#include "doctest.h"

using namespace bequest::numerics;

TEST_CASE("bisection finds sqrt 2 and is reproducible") {
  const auto f = [](double x) { return x * x - 2.0; };
  const auto first = bisect(f, {0.0, 2.0, 1e-14, 200});
  CHECK(first.root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  const auto again = bisect(f, {first.lo, first.hi, 1e-14, 200});
  CHECK(again.root == first.root);
}

TEST_CASE("bisection errors") {
  const auto f = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(bisect(f, {0.0, 1.0, 1e-12, 100}), NoSignChange);
  CHECK_THROWS_AS(bisect([](double x) { return x - 0.3; }, {0.0, 1.0, 0.0, 3}), MaxIterationsExceeded);
  CHECK_THROWS_AS(bisect([](double x) { return x; }, {1.0, 0.0, 1e-12, 100}), std::invalid_argument);
}

TEST_CASE("pow_nonneg edges") {
  CHECK(pow_nonneg(0.0, 2.5) == 0.0);
  CHECK(pow_nonneg(1.0, 7.0) == 1.0);
  CHECK(pow_nonneg(-1e-18, 2.0) == 0.0);
  CHECK(std::isinf(pow_nonneg(0.0, -0.5)));
}

TEST_CASE("x_star for the base case") {
  // a = lambda/r = 8/3, c = lambda/(r+h) = 8/13
  const double a = 8.0 / 3.0, c = 8.0 / 13.0;
  const double x = x_star(a, c);
  CHECK(std::abs(f1(x, a, c)) < 1e-14);
  CHECK(0.1 * x / 0.13 == doctest::Approx(0.694894).epsilon(1e-6));
  CHECK(f1(0.5 * x, a, c) < 0.0);
  CHECK(f1(0.5 * (1.0 + x), a, c) > 0.0);
}

TEST_CASE("x_star close to one") {
  const double a = 4.0, c = 2.0 / 3.0;
  CHECK(x_star(a, c) == doctest::Approx(0.983142).epsilon(1e-6));
  CHECK(x_star(1.5, 0.99) <= 1.0);
}

TEST_CASE("test functions check their domain") {
  CHECK_THROWS_AS(f1(0.5, 0.5, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(f1(1.5, 2.0, 0.3), std::domain_error);
  CHECK_THROWS_AS(f2(1.0, 2.0, 0.3), std::domain_error);
}

TEST_CASE("finite differences") {
  const auto f = [](double x) { return std::sin(x); };
  CHECK(finite_diff(f, 1.0, 1e-6) == doctest::Approx(std::cos(1.0)).epsilon(1e-9));
  CHECK(finite_diff(f, 1.0, 1e-7, Side::Left) == doctest::Approx(std::cos(1.0)).epsilon(1e-6));
  CHECK(finite_diff(f, 1.0, 1e-7, Side::Right) == doctest::Approx(std::cos(1.0)).epsilon(1e-6));
}
