#include "doctest.h"
#include "fixtures.hpp"

using namespace bequest;

TEST_CASE("premium rates") {
  const auto p = fixtures::base();
  CHECK(single_premium_rate(p) == doctest::Approx(1.25 * 0.08 / 0.11).epsilon(1e-14));
  CHECK(continuous_premium_rate(p) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("validate collects every violation") {
  ModelParams p = fixtures::base();
  p.b = -1.0;
  p.lambda = 0.0;
  p.rho = 2.0;
  try {
    validate(p);
    FAIL("expected InvalidParameters");
  } catch (const InvalidParameters& e) {
    CHECK(e.violations().size() >= 3);
  }
}

TEST_CASE("H below one is required when r > 0") {
  ModelParams p = fixtures::base();
  p.theta = 1.0;  // H = 2 * 0.08 / 0.11 > 1
  CHECK_THROWS_AS(validate(p), InvalidParameters);
}

TEST_CASE("r = 0 is accepted but single premium is not") {
  ModelParams p = fixtures::base();
  p.r = 0.0;
  CHECK_NOTHROW(validate(p));
  CHECK_THROWS_AS(validate_single_premium(p), InvalidParameters);
}

TEST_CASE("state validation") {
  CHECK_NOTHROW(validate_state({0.0, 0.0}));
  CHECK_THROWS(validate_state({-0.1, 0.0}));
  CHECK_THROWS(validate_state({0.1, -0.1}));
}

TEST_CASE("product names round trip") {
  for (auto pr : {Product::SinglePremium, Product::SinglePremiumCash, Product::Term, Product::Whole})
    CHECK(product_from_string(to_string(pr)) == pr);
  CHECK_THROWS_AS(product_from_string("annuity"), std::invalid_argument);
}

TEST_CASE("params json defaults") {
  const auto p = params_from_json({{"b", 2.0}, {"r", 0.03}, {"lambda", 0.08}, {"theta", 0.2}});
  CHECK(p.theta_bar == 0.2);
  CHECK(p.rho == 1.0);
  const auto back = params_from_json(params_to_json(p));
  CHECK(back.b == p.b);
  CHECK(back.theta == p.theta);
}
