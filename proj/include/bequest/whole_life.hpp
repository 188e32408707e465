#pragma once

#include <string>
#include <variant>

#include "bequest/model.hpp"

namespace bequest::whole_life {

// Partition of {0 <= w <= safe level(D), D >= 0} for irreversible whole life
// paid by a continuous premium h per unit of benefit.
enum class Region {
  R0,      // D >= b: never buy more
  Ra,      // b - D <= w <= hD/r, rb/(r+h) < D < b: wait, then ride the line w + D = b
  RbWait,  // 0 <= D <= D_j(w): wait until the safe level hb/(r+h)
  RbJump,  // top up to w + D = b now and ride the line
  Safe,    // w at the safe level
};

std::string to_string(Region region);

struct NoMoreInsurance {};
struct WaitThenTrack {};
struct Wait {};
struct JumpToFullThenTrack {
  double amount = 0.0;  // b - (w + D)
};
/// At or above the safe level: buy the top-up b - (w + D), floored at 0,
/// after which the goal is certain.
struct SecureGoal {
  double amount = 0.0;
};

using WlAction = std::variant<NoMoreInsurance, WaitThenTrack, Wait, JumpToFullThenTrack, SecureGoal>;

std::string describe(const WlAction& action);

/// max(hb/(r+h), hD/r). Requires r > 0.
double safe_level_whole(const ModelParams& params, double D);

/// Jump boundary D_j on [0, hb/(r+h)]. Negative values (lambda > r, w < w*)
/// mean the jump region covers every D >= 0 at that wealth.
double jump_boundary(const ModelParams& params, double w);

/// (b - w) - b ((hb - (r+h) w) / (hb))^{1 - lambda/(r+h)}: the level of D
/// above which jumping to full cover satisfies the optimality inequality.
double buy_trigger_D0(const ModelParams& params, double w);

/// Region of an admissible state; throws DomainError above the safe level.
Region classify_region(const ModelParams& params, const WealthState& state);

/// Maximum probability of reaching b before ruin. 1 at or above the safe level.
double phi_whole(const ModelParams& params, const WealthState& state);

/// Optimal action; states above the safe level get SecureGoal.
WlAction optimal_action_whole(const ModelParams& params, const WealthState& state);

/// Expected wealth at death (0 on ruin) under the optimal strategy, for
/// states in the admissible region.
double expected_bequest_whole(const ModelParams& params, const WealthState& state);

}  // namespace bequest::whole_life
