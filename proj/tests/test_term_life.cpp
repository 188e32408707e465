#include <cmath>

#include "bequest/term_life.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bequest;
using namespace bequest::term_life;

TEST_CASE("base solution") {
  const auto sol = solve_term(fixtures::base());
  CHECK(sol.safe_level == doctest::Approx(0.1 / 0.13).epsilon(1e-14));
  REQUIRE(sol.w_star);
  CHECK(*sol.w_star == doctest::Approx(0.694894).epsilon(1e-6));
  CHECK(sol.regime == Regime::LambdaGtR);
}

TEST_CASE("lambda <= r has no critical wealth") {
  const auto sol = solve_term(fixtures::slow_mortality());
  CHECK_FALSE(sol.w_star);
  CHECK(sol.regime == Regime::LambdaLeR);
  CHECK_FALSE(solve_term(fixtures::balanced()).w_star);
}

TEST_CASE("r = 0 limit") {
  auto p = fixtures::base();
  p.r = 0.0;
  const auto sol = solve_term(p);
  CHECK(sol.safe_level == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(sol.w_star);
  CHECK(*sol.w_star == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(optimal_coverage_term(p, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("goal probability") {
  const auto p = fixtures::base();
  CHECK(phi_term(p, 0.4) == doctest::Approx(0.363438).epsilon(1e-6));
  CHECK(phi_term(p, 0.75) == doctest::Approx(0.934714).epsilon(1e-6));
  CHECK(phi_term(p, 0.0) == 0.0);
  CHECK(phi_term(p, 0.9) == 1.0);
  // continuous at w*
  const double ws = *solve_term(p).w_star;
  CHECK(phi_term(p, std::nextafter(ws, 0.0)) == doctest::Approx(phi_term(p, ws)).epsilon(1e-12));
}

TEST_CASE("coverage") {
  const auto p = fixtures::base();
  CHECK(optimal_coverage_term(p, 0.4) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(optimal_coverage_term(p, 0.72) == 0.0);
  CHECK(optimal_coverage_term(p, 0.8) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(optimal_coverage_term(p, 1.2) == 0.0);
  CHECK(optimal_coverage_term(fixtures::slow_mortality(), 0.1) == 0.0);
}

TEST_CASE("hitting times") {
  const auto p = fixtures::base();
  const auto t = hitting_times_term(p, 0.4);
  CHECK(t.to_ruin == doctest::Approx(5.645917).epsilon(1e-6));
  CHECK(1.0 - std::exp(-p.lambda * t.to_ruin) == doctest::Approx(phi_term(p, 0.4)).epsilon(1e-12));
  CHECK(std::exp(-p.lambda * hitting_times_term(p, 0.72).to_safe_level) ==
        doctest::Approx(phi_term(p, 0.72)).epsilon(1e-12));
  CHECK(std::isinf(hitting_times_term(p, 0.0).to_safe_level));
}

TEST_CASE("expected bequest jumps up at w*") {
  const auto p = fixtures::base();
  const double ws = *solve_term(p).w_star;
  CHECK(expected_bequest_term(p, std::nextafter(ws, 0.0)) < expected_bequest_term(p, ws));
  CHECK(expected_bequest_term(p, solve_term(p).safe_level) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expected_bequest_term(p, 0.0) == 0.0);
}

TEST_CASE("sweeps") {
  const auto p = fixtures::base();
  const auto rows = w_star_sensitivities(p, SweepAxis::Lambda, {0.04, 0.05, 0.06, 0.08});
  REQUIRE(rows.size() == 4);
  CHECK(*rows[3].w_star == doctest::Approx(0.694894).epsilon(1e-6));
  CHECK(comparative_statics_hold(SweepAxis::Lambda, rows) == std::optional<bool>(true));
  const auto hs = w_star_sensitivities(p, SweepAxis::H, {0.1, 0.2});
  CHECK_FALSE(comparative_statics_hold(SweepAxis::H, hs));
  CHECK_THROWS_AS(w_star_sensitivities(p, SweepAxis::H, {0.05}), InvalidParameters);
  CHECK(sweep_axis_from_string(to_string(SweepAxis::R)) == SweepAxis::R);
  CHECK_THROWS(sweep_axis_from_string("theta"));
}
