#pragma once

#include <string>
#include <variant>

#include "bequest/model.hpp"

namespace bequest::single_premium {

// Actions available when whole life is bought with a single premium H per
// unit of benefit.
struct Wait {};
struct BuyAdditional {
  double amount = 0.0;
};
struct SurrenderAll {
  double cash_received = 0.0;
};
struct AlreadyFunded {};

using SpAction = std::variant<Wait, BuyAdditional, SurrenderAll, AlreadyFunded>;

std::string describe(const SpAction& action);

/// H (b - D); 0 once D >= b.
double safe_level_sp(const ModelParams& params, double D);

/// Maximum probability of reaching b when coverage can only be added.
/// States above the safe level (or with D >= b) have probability 1.
double phi_no_cash(const ModelParams& params, const WealthState& state);

/// Wait below the safe level, buy b - D once it is reached.
SpAction optimal_action_no_cash(const ModelParams& params, const WealthState& state);

/// Years until w e^{rt} reaches H (b - D); +infinity when w = 0.
double hitting_time_safe_sp(const ModelParams& params, const WealthState& state);

/// Expected wealth at death under the optimal no-surrender strategy.
/// Defined on 0 <= w <= H (b - D), D < b.
double expected_bequest_no_cash(const ModelParams& params, const WealthState& state);

/// Wealth below which surrendering everything is optimal: (1 - rho) H (b - D).
double surrender_threshold(const ModelParams& params, double D);

/// Maximum probability when coverage may be surrendered for (1 - rho) H per unit.
double phi_cash(const ModelParams& params, const WealthState& state);

/// Surrender all below the surrender threshold (never at equality), otherwise
/// behave as without cash value.
SpAction optimal_action_cash(const ModelParams& params, const WealthState& state);

/// Expected wealth at death with surrender available. Discontinuous at the
/// surrender threshold.
double expected_bequest_cash(const ModelParams& params, const WealthState& state);

}  // namespace bequest::single_premium
