#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bequest/model.hpp"
#include "bequest/residuals.hpp"
#include "json.hpp"

namespace bequest::oracle {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double metric = 0.0;     // worst observed error or margin
  double threshold = 0.0;
  std::string detail;
};

nlohmann::json to_json(const CheckResult& check);

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  GridSpec grid;
  double tol = 1e-5;
  std::uint64_t seed = 20240601;
  std::size_t fuzz_draws = 1000;
  std::size_t fuzz_grid = 10000;
  std::uint64_t n_paths = 200000;
};

CheckResult residual_check(const std::string& name, const ResidualReport& report, double tol);

/// Sign structure of f1, f2, f3 around x* for random 0 < c < 1 < a.
CheckResult check_sign_structure_fuzz(std::size_t draws, std::size_t grid, std::uint64_t seed);

/// D_j(w) <= rw/h with equality only at the ends; monotone from 0 to rb/(r+h)
/// (from w* when lambda > r, with D_j <= 0 below it).
CheckResult check_jump_boundary_shape(const ModelParams& params, std::size_t grid);

/// The same over random parameter draws covering lambda <= r and lambda > r.
CheckResult check_jump_boundary_fuzz(std::size_t draws, std::size_t grid, std::uint64_t seed);

/// w* up in lambda, down in r, proportional in b over random sweeps.
CheckResult check_w_star_statics(std::size_t draws, std::uint64_t seed);

/// phi with surrender is never below phi without.
CheckResult check_surrender_dominates(const ModelParams& params, const GridSpec& grid);

/// E^s(threshold-) <= E^s(threshold+) at the surrender threshold.
CheckResult check_surrender_bequest_jump(const ModelParams& params, const GridSpec& grid);

/// Term E(w*-) < E(w*+). Skipped when lambda <= r.
CheckResult check_term_bequest_jump(const ModelParams& params);

/// Whole-life phi at D = 0 equals term phi.
CheckResult check_whole_matches_term(const ModelParams& params, std::size_t grid);

/// Survival to the safe level and death before ruin, computed from hitting
/// times, reproduce phi.
CheckResult check_hitting_time_identities(const ModelParams& params, std::size_t grid);

/// p(tau_0) + p(tau_safe) = 1 at w*. Skipped when lambda <= r.
CheckResult check_indifference_at_w_star(const ModelParams& params);

/// Full cover and waiting reach the goal equally often from w*, by simulation.
CheckResult check_indifference_at_w_star_mc(const ModelParams& params, std::uint64_t n_paths,
                                            std::uint64_t seed);

/// Whole-life phi is continuous across D = b, w + D = b and D = D_j(w).
CheckResult check_seam_continuity(const ModelParams& params, std::size_t grid);

/// Everything above plus VI and BVP residuals for every product the
/// parameters admit.
SuiteReport run_verification(const ModelParams& params, const VerifyOptions& options = {});

}  // namespace bequest::oracle
