#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bequest/model.hpp"

namespace bequest::term_life {

enum class Regime { LambdaLeR, LambdaGtR };

std::string to_string(Regime regime);

struct TermSolution {
  double safe_level = 0.0;        // hb / (r + h)
  std::optional<double> w_star;   // critical wealth; present iff lambda > r
  Regime regime = Regime::LambdaLeR;
};

/// Safe level and critical wealth for instantaneous term cover paid at rate h.
/// At r = 0 the waiting strategy never reaches the safe level b, so w* = b
/// and full insurance is optimal everywhere below it.
TermSolution solve_term(const ModelParams& params);

/// Maximum probability of dying with wealth plus cover at least b before
/// wealth is exhausted. Wealth at or above the safe level gives 1.
double phi_term(const ModelParams& params, double w);

/// Optimal cover: b - w below w*, nothing from w* up to the safe level, and
/// the top-up b - w (floored at 0) at or above the safe level.
double optimal_coverage_term(const ModelParams& params, double w);

/// Expected wealth at death under the optimal cover; defined on [0, safe level].
double expected_bequest_term(const ModelParams& params, double w);

/// Deterministic hitting times of the two candidate strategies from w:
/// zero wealth under full cover, and the safe level under no cover.
/// Unreachable levels are +infinity.
struct HittingTimes {
  double to_ruin = 0.0;
  double to_safe_level = 0.0;
};

HittingTimes hitting_times_term(const ModelParams& params, double w);

enum class SweepAxis { Lambda, R, H, B };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SensitivityRow {
  double value = 0.0;
  Regime regime = Regime::LambdaLeR;
  std::optional<double> w_star;
  double safe_level = 0.0;
};

/// w* over bumps of one parameter. Lambda bumps keep theta_bar fixed; H bumps
/// set h directly (theta_bar = h / lambda - 1) and require h >= lambda.
std::vector<SensitivityRow> w_star_sensitivities(const ModelParams& base, SweepAxis axis,
                                                 const std::vector<double>& values);

/// For lambda, r and b sweeps: whether w* moves in the direction the model
/// predicts (up in lambda, down in r, proportional in b) across rows that
/// share the LambdaGtR regime. nullopt for the h axis, which may go either way.
std::optional<bool> comparative_statics_hold(SweepAxis axis, const std::vector<SensitivityRow>& rows,
                                             double rel_tol = 1e-9);

}  // namespace bequest::term_life
