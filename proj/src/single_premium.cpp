#include "bequest/single_premium.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bequest/numerics.hpp"

namespace bequest::single_premium {

using numerics::pow_nonneg;

namespace {

struct Prepared {
  double b, r, lambda, H, rho;
};

Prepared prepare(const ModelParams& params, const WealthState& state) {
  validate_single_premium(params);
  validate_state(state);
  return {params.b, params.r, params.lambda, single_premium_rate(params), params.rho};
}

// Expected wealth at death when waiting from wealth x with benefit D until
// the safe level H (b - D) is reached, then buying b - D.
double wait_then_buy_bequest(const Prepared& p, double x, double D) {
  const double safe = p.H * (p.b - D);
  if (p.lambda == p.r) {
    if (x == 0.0) return D;
    return x * (1.0 / p.H + std::log(safe / x)) + D;
  }
  const double prob = pow_nonneg(x / safe, p.lambda / p.r);
  return (p.b - D) * (1.0 - p.lambda * p.H / (p.lambda - p.r)) * prob +
         p.lambda * x / (p.lambda - p.r) + D;
}

void require_region(const Prepared& p, const WealthState& s) {
  if (s.D >= p.b) throw DomainError("expected bequest is defined only for D < b");
  if (s.w > p.H * (p.b - s.D))
    throw DomainError("expected bequest is defined only up to the safe level H (b - D)");
}

}  // namespace

std::string describe(const SpAction& action) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Wait>) {
          os << "wait";
        } else if constexpr (std::is_same_v<T, BuyAdditional>) {
          os << "buy_additional(" << a.amount << ")";
        } else if constexpr (std::is_same_v<T, SurrenderAll>) {
          os << "surrender_all(" << a.cash_received << ")";
        } else {
          os << "already_funded";
        }
      },
      action);
  return os.str();
}

double safe_level_sp(const ModelParams& params, double D) {
  validate_state({0.0, D});
  const double H = single_premium_rate(params);
  if (D >= params.b) return 0.0;
  return H * (params.b - D);
}

double phi_no_cash(const ModelParams& params, const WealthState& state) {
  const auto p = prepare(params, state);
  if (state.D >= p.b) return 1.0;
  const double safe = p.H * (p.b - state.D);
  if (state.w >= safe) return 1.0;
  return pow_nonneg(state.w / safe, p.lambda / p.r);
}

SpAction optimal_action_no_cash(const ModelParams& params, const WealthState& state) {
  const auto p = prepare(params, state);
  if (state.D >= p.b) return AlreadyFunded{};
  if (state.w >= p.H * (p.b - state.D)) return BuyAdditional{p.b - state.D};
  return Wait{};
}

double hitting_time_safe_sp(const ModelParams& params, const WealthState& state) {
  const auto p = prepare(params, state);
  if (state.D >= p.b) return 0.0;
  const double safe = p.H * (p.b - state.D);
  if (state.w >= safe) return 0.0;
  if (state.w == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(safe / state.w) / p.r;
}

double expected_bequest_no_cash(const ModelParams& params, const WealthState& state) {
  const auto p = prepare(params, state);
  require_region(p, state);
  return wait_then_buy_bequest(p, state.w, state.D);
}

double surrender_threshold(const ModelParams& params, double D) {
  return (1.0 - params.rho) * safe_level_sp(params, D);
}

double phi_cash(const ModelParams& params, const WealthState& state) {
  const auto p = prepare(params, state);
  if (state.D >= p.b) return 1.0;
  const double safe = p.H * (p.b - state.D);
  if (state.w >= safe) return 1.0;
  if (state.w < (1.0 - p.rho) * safe) {
    const double liquid = state.w + (1.0 - p.rho) * p.H * state.D;
    return pow_nonneg(liquid / (p.H * p.b), p.lambda / p.r);
  }
  return pow_nonneg(state.w / safe, p.lambda / p.r);
}

SpAction optimal_action_cash(const ModelParams& params, const WealthState& state) {
  const auto p = prepare(params, state);
  if (state.D >= p.b) return AlreadyFunded{};
  const double safe = p.H * (p.b - state.D);
  if (state.w >= safe) return BuyAdditional{p.b - state.D};
  if (state.D > 0.0 && state.w < (1.0 - p.rho) * safe)
    return SurrenderAll{(1.0 - p.rho) * p.H * state.D};
  return Wait{};
}

double expected_bequest_cash(const ModelParams& params, const WealthState& state) {
  const auto p = prepare(params, state);
  require_region(p, state);
  const double safe = p.H * (p.b - state.D);
  if (state.w < (1.0 - p.rho) * safe) {
    const double liquid = state.w + (1.0 - p.rho) * p.H * state.D;
    return wait_then_buy_bequest(p, liquid, 0.0);
  }
  return wait_then_buy_bequest(p, state.w, state.D);
}

}  // namespace bequest::single_premium
