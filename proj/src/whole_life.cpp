#include "bequest/whole_life.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bequest/numerics.hpp"
#include "bequest/term_life.hpp"

namespace bequest::whole_life {

using numerics::pow_nonneg;

namespace {

// Relative window around hb/(r+h) where D_j takes its continuity value.
constexpr double kJumpEndWindow = 1e-10;
// Relative slack when deciding that a state sits on the safe level.
constexpr double kSafeSlack = 1e-12;

struct Prepared {
  ModelParams params;
  double b, r, lambda, h;
  double term_safe;   // hb / (r + h)
  double kink;        // rb / (r + h)

  double safe(double D) const { return std::max(term_safe, h * D / r); }
};

Prepared prepare(const ModelParams& params) {
  validate(params);
  if (params.r <= 0.0)
    throw DomainError("irreversible whole life requires r > 0: at r = 0 no wealth can fund the premium");
  const double h = continuous_premium_rate(params);
  const double r = params.r;
  return {params, params.b, r, params.lambda, h, h * params.b / (r + h), r * params.b / (r + h)};
}

double jump_boundary_unchecked(const Prepared& p, double w) {
  if (p.term_safe - w <= kJumpEndWindow * p.term_safe) return p.kink;
  const double x = (p.r + p.h) * w / (p.h * p.b);
  const double z = std::exp(p.lambda / (p.r + p.h) * std::log1p(-x));
  // g = 1 - f_j, kept away from cancellation near the safe level.
  const double g = -std::expm1(p.r / p.lambda * std::log1p(-z));
  return p.r / p.h * ((w - p.term_safe) + p.term_safe * g) / g;
}

// 1 - (1 - x)^{lambda/(r+h)}: survive-to-death probability on the line w + D = b.
double line_probability(const Prepared& p, double w) {
  const double x = (p.r + p.h) * w / (p.h * p.b);
  if (x >= 1.0) return 1.0;
  return -std::expm1(p.lambda / (p.r + p.h) * std::log1p(-x));
}

bool at_safe_level(const Prepared& p, const WealthState& s) {
  const double safe = p.safe(s.D);
  return std::abs(s.w - safe) <= kSafeSlack * safe;
}

Region classify(const Prepared& p, const WealthState& s) {
  const double safe = p.safe(s.D);
  if (s.w > safe * (1.0 + kSafeSlack))
    throw DomainError("state lies above the safe level; the goal is already certain");
  if (at_safe_level(p, s)) return Region::Safe;
  if (s.D >= p.b) return Region::R0;
  if (s.D > p.kink && s.w >= p.b - s.D) return Region::Ra;
  if (s.D <= jump_boundary_unchecked(p, s.w)) {
    if (p.lambda <= p.r) return Region::RbWait;
    // Only the w* seam needs the root; D_j < 0 below it anyway.
    const auto w_star = term_life::solve_term(p.params).w_star;
    if (s.w >= *w_star) return Region::RbWait;
  }
  return Region::RbJump;
}

double wait_probability(const Prepared& p, const WealthState& s) {
  const double ratio = (p.r * s.w - p.h * s.D) / (p.h * (p.kink - s.D));
  return pow_nonneg(std::clamp(ratio, 0.0, 1.0), p.lambda / p.r);
}

double phi_in(const Prepared& p, Region region, const WealthState& s) {
  const double w = s.w;
  const double D = s.D;
  switch (region) {
    case Region::Safe:
      return 1.0;
    case Region::R0:
      return -std::expm1(p.lambda / p.r * std::log1p(-p.r * w / (p.h * D)));
    case Region::Ra: {
      const double gap = (p.r + p.h) * D - p.r * p.b;
      const double to_line = pow_nonneg(gap / (p.h * p.b), p.lambda / (p.r + p.h));
      const double to_edge = pow_nonneg((p.h * D - p.r * w) / gap, p.lambda / p.r);
      return 1.0 - to_line * to_edge;
    }
    case Region::RbWait:
      return wait_probability(p, s);
    case Region::RbJump:
      return line_probability(p, w);
  }
  return 0.0;
}

// 0 ln 0 = 0.
double xlogy_ratio(double x, double num, double den) {
  if (x == 0.0) return 0.0;
  return x * std::log(num / den);
}

}  // namespace

std::string to_string(Region region) {
  switch (region) {
    case Region::R0: return "R0";
    case Region::Ra: return "Ra";
    case Region::RbWait: return "RbWait";
    case Region::RbJump: return "RbJump";
    case Region::Safe: return "Safe";
  }
  return "?";
}

std::string describe(const WlAction& action) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, NoMoreInsurance>) {
          os << "no_more_insurance";
        } else if constexpr (std::is_same_v<T, WaitThenTrack>) {
          os << "wait_then_track";
        } else if constexpr (std::is_same_v<T, Wait>) {
          os << "wait";
        } else if constexpr (std::is_same_v<T, JumpToFullThenTrack>) {
          os << "jump_to_full_then_track(" << a.amount << ")";
        } else {
          os << "secure_goal(" << a.amount << ")";
        }
      },
      action);
  return os.str();
}

double safe_level_whole(const ModelParams& params, double D) {
  validate_state({0.0, D});
  return prepare(params).safe(D);
}

double jump_boundary(const ModelParams& params, double w) {
  const auto p = prepare(params);
  if (!(w >= 0.0 && w <= p.term_safe))
    throw DomainError("jump boundary is defined for 0 <= w <= hb/(r+h)");
  return jump_boundary_unchecked(p, w);
}

double buy_trigger_D0(const ModelParams& params, double w) {
  const auto p = prepare(params);
  if (!(w >= 0.0 && w <= p.term_safe))
    throw DomainError("D0 is defined for 0 <= w <= hb/(r+h)");
  const double x = (p.r + p.h) * w / (p.h * p.b);
  return (p.b - w) - p.b * pow_nonneg(1.0 - x, 1.0 - p.lambda / (p.r + p.h));
}

Region classify_region(const ModelParams& params, const WealthState& state) {
  validate_state(state);
  return classify(prepare(params), state);
}

double phi_whole(const ModelParams& params, const WealthState& state) {
  validate_state(state);
  const auto p = prepare(params);
  if (state.w >= p.safe(state.D)) return 1.0;
  return phi_in(p, classify(p, state), state);
}

WlAction optimal_action_whole(const ModelParams& params, const WealthState& state) {
  validate_state(state);
  const auto p = prepare(params);
  if (state.D >= p.b) return NoMoreInsurance{};
  if (state.w >= p.safe(state.D) || at_safe_level(p, state))
    return SecureGoal{std::max(0.0, p.b - (state.w + state.D))};
  switch (classify(p, state)) {
    case Region::R0: return NoMoreInsurance{};
    case Region::Ra: return WaitThenTrack{};
    case Region::RbWait: return Wait{};
    case Region::RbJump: return JumpToFullThenTrack{p.b - (state.w + state.D)};
    case Region::Safe: break;
  }
  return SecureGoal{std::max(0.0, p.b - (state.w + state.D))};
}

double expected_bequest_whole(const ModelParams& params, const WealthState& state) {
  validate_state(state);
  const auto p = prepare(params);
  const Region region = classify(p, state);
  const double w = state.w;
  const double D = state.D;
  const double b = p.b, r = p.r, h = p.h, lam = p.lambda;
  switch (region) {
    case Region::Safe:
      return std::max(b, w + D);
    case Region::R0: {
      if (lam != r) return D * (1.0 - h / (lam - r)) * phi_in(p, region, state) + lam * w / (lam - r);
      const double drain = h * D - r * w;
      return xlogy_ratio(drain / r, drain, h * D) + (r + h) * w / h;
    }
    case Region::Ra: {
      const double gap = (r + h) * D - r * b;
      const double drain = h * D - r * w;
      if (lam != r) {
        const double to_edge = pow_nonneg(drain / gap, lam / r);
        const double to_line = pow_nonneg(gap / (h * b), lam / (r + h));
        return to_edge * ((r + h) * D / (lam - r) - b * (r / (lam - r) + to_line)) +
               D * (1.0 - h / (lam - r)) + lam * w / (lam - r);
      }
      return w + D - (drain == 0.0 ? 0.0 : drain / r * std::log(gap / drain)) -
             drain / h * pow_nonneg(h * b / gap, h / (r + h));
    }
    case Region::RbWait: {
      const double phi = wait_probability(p, state);
      if (lam != r) {
        const double lead = (b - D) * (1.0 + h / (r + h) * lam / (r - lam)) -
                            h * D / (r - lam) * (1.0 - lam / (r + h));
        return lead * phi + D * (r + h - lam) / (r - lam) - lam * w / (r - lam);
      }
      const double surplus = r * w - h * D;
      return xlogy_ratio(surplus / r, h * (p.kink - D), surplus) + (r + h) * w / h;
    }
    case Region::RbJump:
      return b * line_probability(p, w);
  }
  return 0.0;
}

}  // namespace bequest::whole_life
