#include "bequest/term_life.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bequest/numerics.hpp"

namespace bequest::term_life {

using numerics::pow_nonneg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Prepared {
  double b, r, lambda, h;
  double safe;  // hb / (r + h)
};

Prepared prepare(const ModelParams& params) {
  validate(params);
  const double h = continuous_premium_rate(params);
  return {params.b, params.r, params.lambda, h, h * params.b / (params.r + h)};
}

void check_wealth(double w) {
  if (!std::isfinite(w) || w < 0.0) throw DomainError("wealth must be finite and non-negative");
}

// Probability of dying before ruin under full cover b - w:
// 1 - (1 - x)^{lambda / (r + h)}, x = (r + h) w / (hb).
double full_cover_probability(const Prepared& p, double w) {
  const double x = (p.r + p.h) * w / (p.h * p.b);
  if (x >= 1.0) return 1.0;
  return -std::expm1(p.lambda / (p.r + p.h) * std::log1p(-x));
}

// Probability of surviving until w e^{rt} reaches the safe level.
double wait_probability(const Prepared& p, double w) {
  return pow_nonneg(std::min(1.0, w / p.safe), p.lambda / p.r);
}

std::optional<double> critical_wealth(const Prepared& p) {
  if (p.r == 0.0) return p.b;
  if (p.lambda <= p.r) return std::nullopt;
  const double a = p.lambda / p.r;
  const double c = p.lambda / (p.r + p.h);
  if (!(c < 1.0 && a > 1.0))
    throw NumericalDefect("critical wealth: exponents violate 0 < c < 1 < a");
  return p.safe * numerics::x_star(a, c);
}

}  // namespace

std::string to_string(Regime regime) {
  return regime == Regime::LambdaLeR ? "lambda_le_r" : "lambda_gt_r";
}

TermSolution solve_term(const ModelParams& params) {
  const auto p = prepare(params);
  TermSolution s;
  s.safe_level = p.safe;
  s.regime = p.lambda <= p.r ? Regime::LambdaLeR : Regime::LambdaGtR;
  s.w_star = critical_wealth(p);
  return s;
}

double phi_term(const ModelParams& params, double w) {
  check_wealth(w);
  const auto p = prepare(params);
  if (w >= p.safe) return 1.0;
  const auto w_star = critical_wealth(p);
  if (w_star && w < *w_star) return full_cover_probability(p, w);
  return wait_probability(p, w);
}

double optimal_coverage_term(const ModelParams& params, double w) {
  check_wealth(w);
  const auto p = prepare(params);
  if (w >= p.safe) return std::max(0.0, p.b - w);
  const auto w_star = critical_wealth(p);
  if (w_star && w < *w_star) return p.b - w;
  return 0.0;
}

double expected_bequest_term(const ModelParams& params, double w) {
  check_wealth(w);
  const auto p = prepare(params);
  if (w > p.safe) throw DomainError("expected bequest is defined only up to the safe level");
  if (w == p.safe) return p.b;
  const auto w_star = critical_wealth(p);
  if (w_star && w < *w_star) return p.b * full_cover_probability(p, w);
  if (p.lambda == p.r) {
    if (w == 0.0) return 0.0;
    return w * ((p.r + p.h) / p.h + std::log(p.safe / w));
  }
  const double k = 1.0 - p.h / (p.r + p.h) * p.lambda / (p.lambda - p.r);
  return p.b * k * wait_probability(p, w) + p.lambda * w / (p.lambda - p.r);
}

HittingTimes hitting_times_term(const ModelParams& params, double w) {
  check_wealth(w);
  const auto p = prepare(params);
  HittingTimes t;
  const double x = (p.r + p.h) * w / (p.h * p.b);
  t.to_ruin = x >= 1.0 ? kInf : -std::log1p(-x) / (p.r + p.h);
  if (w >= p.safe) {
    t.to_safe_level = 0.0;
  } else if (w == 0.0 || p.r == 0.0) {
    t.to_safe_level = kInf;
  } else {
    t.to_safe_level = std::log(p.safe / w) / p.r;
  }
  return t;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::R: return "r";
    case SweepAxis::H: return "h";
    case SweepAxis::B: return "b";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "lambda") return SweepAxis::Lambda;
  if (name == "r") return SweepAxis::R;
  if (name == "h") return SweepAxis::H;
  if (name == "b") return SweepAxis::B;
  throw std::invalid_argument("unknown sweep axis '" + name + "' (expected lambda, r, h or b)");
}

std::vector<SensitivityRow> w_star_sensitivities(const ModelParams& base, SweepAxis axis,
                                                 const std::vector<double>& values) {
  validate(base);
  std::vector<SensitivityRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    ModelParams p = base;
    // w* does not depend on the single-premium loading; dropping it keeps
    // bumps such as small r from tripping the H < 1 check.
    p.theta = 0.0;
    switch (axis) {
      case SweepAxis::Lambda: p.lambda = v; break;
      case SweepAxis::R: p.r = v; break;
      case SweepAxis::B: p.b = v; break;
      case SweepAxis::H:
        if (!(v >= base.lambda))
          throw InvalidParameters("h", "premium rate h must be at least lambda");
        p.theta_bar = v / base.lambda - 1.0;
        break;
    }
    const auto sol = solve_term(p);
    rows.push_back({v, sol.regime, sol.w_star, sol.safe_level});
  }
  return rows;
}

std::optional<bool> comparative_statics_hold(SweepAxis axis, const std::vector<SensitivityRow>& rows,
                                             double rel_tol) {
  if (axis == SweepAxis::H) return std::nullopt;
  std::vector<SensitivityRow> gt;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(gt),
               [](const SensitivityRow& row) { return row.w_star.has_value(); });
  std::sort(gt.begin(), gt.end(),
            [](const SensitivityRow& x, const SensitivityRow& y) { return x.value < y.value; });
  for (std::size_t i = 1; i < gt.size(); ++i) {
    const double prev = *gt[i - 1].w_star;
    const double cur = *gt[i].w_star;
    switch (axis) {
      case SweepAxis::Lambda:
        if (!(cur > prev)) return false;
        break;
      case SweepAxis::R:
        if (!(cur < prev)) return false;
        break;
      case SweepAxis::B: {
        const double ratio_prev = prev / gt[i - 1].value;
        const double ratio_cur = cur / gt[i].value;
        if (std::abs(ratio_cur - ratio_prev) > rel_tol * std::abs(ratio_prev)) return false;
        break;
      }
      case SweepAxis::H: break;
    }
  }
  return true;
}

}  // namespace bequest::term_life
