#include "bequest/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bequest/numerics.hpp"
#include "bequest/simulation.hpp"
#include "bequest/single_premium.hpp"
#include "bequest/term_life.hpp"
#include "bequest/whole_life.hpp"

namespace bequest::oracle {

namespace {

constexpr double kTiny = 1e-12;

CheckResult make(std::string name, double metric, double threshold, std::string detail = {}) {
  return {std::move(name), metric <= threshold, false, metric, threshold, std::move(detail)};
}

CheckResult skip(std::string name, std::string why) { return {std::move(name), true, true, 0.0, 0.0, std::move(why)}; }

bool single_premium_available(const ModelParams& p) {
  try {
    validate_single_premium(p);
    return true;
  } catch (const InvalidParameters&) {
    return false;
  }
}

double grid_at(double lo, double hi, std::size_t k, std::size_t n) {
  return std::min(hi, lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n));
}

std::string fmt(const char* label, double value) {
  std::ostringstream os;
  os.precision(6);
  os << label << value;
  return os.str();
}

}  // namespace

nlohmann::json to_json(const CheckResult& c) {
  return {{"name", c.name},       {"passed", c.passed},       {"skipped", c.skipped},
          {"metric", c.metric},   {"threshold", c.threshold}, {"detail", c.detail}};
}

bool SuiteReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back(oracle::to_json(c));
  return {{"all_passed", all_passed()}, {"checks", arr}};
}

CheckResult residual_check(const std::string& name, const ResidualReport& report, double tol) {
  const double worst = std::max({report.max_binding, report.max_violation, report.max_boundary_error});
  std::ostringstream os;
  os.precision(3);
  os << report.points.size() << " points, " << report.skipped << " skipped, binding " << report.max_binding
     << ", violation " << report.max_violation << ", boundary " << report.max_boundary_error;
  CheckResult c = make(name, worst, tol, os.str());
  c.passed = report.passed(tol);
  return c;
}

CheckResult check_sign_structure_fuzz(std::size_t draws, std::size_t grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t bad_roots = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    const double c = 0.01 + 0.98 * unit(rng);
    const double a = std::exp(std::log(1.01) + (std::log(50.0) - std::log(1.01)) * unit(rng));
    const double xs = numerics::x_star(a, c);
    int sign = 0;
    int changes = 0;
    for (std::size_t k = 0; k <= grid; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(grid);
      const double f1 = numerics::f1(x, a, c);
      if (x <= xs) {
        worst = std::max(worst, f1);
        if (x < 1.0) worst = std::max(worst, -numerics::f2(x, a, c));
      }
      if (x >= xs) {
        worst = std::max(worst, -f1);
        worst = std::max(worst, numerics::f3(x, a, c));
      }
      const int s = f1 > kTiny ? 1 : (f1 < -kTiny ? -1 : 0);
      if (s != 0 && sign != 0 && s != sign) ++changes;
      if (s != 0) sign = s;
    }
    if (changes > 1 || !(xs > 0.0 && xs <= 1.0)) ++bad_roots;
  }
  CheckResult r = make("sign structure of f1, f2, f3", worst, kTiny,
                       std::to_string(draws) + " draws x " + std::to_string(grid + 1) + " points, " +
                           std::to_string(bad_roots) + " draws without a unique interior zero");
  r.passed = r.passed && bad_roots == 0;
  return r;
}

CheckResult check_jump_boundary_shape(const ModelParams& params, std::size_t grid) {
  const std::string name = "jump boundary bound and monotonicity";
  if (params.r <= 0.0) return skip(name, "requires r > 0");
  const double h = continuous_premium_rate(params);
  const double r = params.r;
  const double b = params.b;
  const double top = h * b / (r + h);
  const double kink = r * b / (r + h);
  const auto w_star = term_life::solve_term(params).w_star;
  const double from = w_star.value_or(0.0);
  const double tol = kTiny * b;
  double worst = 0.0;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= grid; ++k) {
    const double w = grid_at(0.0, top, k, grid);
    const double dj = whole_life::jump_boundary(params, w);
    const double cap = r * w / h;
    worst = std::max(worst, dj - cap);
    // Strictness is only observable above the cancellation noise of D_j.
    const double noise = 16.0 * std::numeric_limits<double>::epsilon() * r / h * top;
    if (k > 0 && k < grid && dj - cap > noise) worst = std::max(worst, 1.0);
    if (w <= from) worst = std::max(worst, dj);
    if (w >= from) {
      if (prev > -std::numeric_limits<double>::infinity()) worst = std::max(worst, prev - dj);
      prev = dj;
    }
  }
  worst = std::max(worst, std::abs(whole_life::jump_boundary(params, top) - kink));
  worst = std::max(worst, std::abs(whole_life::jump_boundary(params, 0.0)));
  if (w_star) worst = std::max(worst, std::abs(whole_life::jump_boundary(params, *w_star)));
  return make(name, worst, tol, fmt(params.lambda <= r ? "lambda <= r, D_j(top) = " : "lambda > r, D_j(top) = ", kink));
}

CheckResult check_jump_boundary_fuzz(std::size_t draws, std::size_t grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t le = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    ModelParams p;
    p.b = 0.5 + 4.5 * unit(rng);
    p.r = 0.01 + 0.09 * unit(rng);
    const bool low = d % 2 == 0;
    p.lambda = p.r * (low ? 0.2 + 0.8 * unit(rng) : 1.05 + 3.95 * unit(rng));
    p.theta_bar = unit(rng);
    le += low;
    const auto c = check_jump_boundary_shape(p, grid);
    worst = std::max(worst, c.metric / p.b);
  }
  return make("jump boundary shape over random parameters", worst, kTiny,
              std::to_string(le) + " draws with lambda <= r, " + std::to_string(draws - le) + " with lambda > r");
}

CheckResult check_w_star_statics(std::size_t draws, std::uint64_t seed) {
  using term_life::SweepAxis;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t failures = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    ModelParams base;
    base.b = 0.5 + 4.5 * unit(rng);
    base.r = 0.005 + 0.075 * unit(rng);
    base.lambda = base.r * (1.1 + 3.9 * unit(rng));
    base.theta_bar = unit(rng);
    std::vector<double> lambdas, rs, bs;
    for (int k = 0; k < 8; ++k) {
      lambdas.push_back(base.r * (1.02 + 0.5 * k + unit(rng) * 0.4));
      rs.push_back(base.lambda * (0.02 + 0.12 * k + unit(rng) * 0.1));
      bs.push_back(0.1 + 2.0 * k + unit(rng));
    }
    const auto ok = [&](SweepAxis axis, const std::vector<double>& values) {
      return term_life::comparative_statics_hold(axis, term_life::w_star_sensitivities(base, axis, values))
          .value_or(false);
    };
    if (!ok(SweepAxis::Lambda, lambdas) || !ok(SweepAxis::R, rs) || !ok(SweepAxis::B, bs)) ++failures;
  }
  return make("w* comparative statics", static_cast<double>(failures), 0.0,
              std::to_string(draws) + " random bases, 8-point sweeps in lambda, r and b");
}

CheckResult check_surrender_dominates(const ModelParams& params, const GridSpec& grid) {
  const std::string name = "surrender value dominates";
  if (!single_premium_available(params)) return skip(name, "single premium unavailable");
  double worst = 0.0;
  const double H = single_premium_rate(params);
  for (std::size_t j = 0; j <= grid.n_d; ++j) {
    const double D = grid_at(0.0, params.b, j, grid.n_d + 1);
    for (std::size_t i = 0; i <= grid.n_w; ++i) {
      const WealthState s{grid_at(0.0, H * (params.b - D), i, grid.n_w), D};
      worst = std::max(worst, single_premium::phi_no_cash(params, s) - single_premium::phi_cash(params, s));
    }
  }
  return make(name, worst, 1e-15);
}

CheckResult check_surrender_bequest_jump(const ModelParams& params, const GridSpec& grid) {
  const std::string name = "expected bequest jumps up at the surrender threshold";
  if (!single_premium_available(params)) return skip(name, "single premium unavailable");
  if (params.rho >= 1.0) return skip(name, "no cash value at rho = 1");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= grid.n_d; ++j) {
    const double D = grid_at(0.0, params.b, j, grid.n_d + 1);
    const double th = single_premium::surrender_threshold(params, D);
    const double below = single_premium::expected_bequest_cash(params, {th * (1.0 - kTiny), D});
    const double above = single_premium::expected_bequest_cash(params, {th, D});
    worst = std::max(worst, below - above);
  }
  return make(name, worst, kTiny, "max of E(th-) - E(th+)");
}

CheckResult check_term_bequest_jump(const ModelParams& params) {
  const std::string name = "term expected bequest jumps up at w*";
  const auto w_star = term_life::solve_term(params).w_star;
  if (!w_star || params.r <= 0.0) return skip(name, "requires lambda > r > 0");
  const double below = term_life::expected_bequest_term(params, *w_star * (1.0 - kTiny));
  const double above = term_life::expected_bequest_term(params, *w_star);
  CheckResult c = make(name, below - above, 0.0, fmt("E(w*+) - E(w*-) = ", above - below));
  c.passed = below < above;
  return c;
}

CheckResult check_whole_matches_term(const ModelParams& params, std::size_t grid) {
  const std::string name = "whole life at D = 0 equals term";
  if (params.r <= 0.0) return skip(name, "requires r > 0");
  const double top = term_life::solve_term(params).safe_level;
  double worst = 0.0;
  for (std::size_t k = 0; k <= grid; ++k) {
    const double w = grid_at(0.0, top, k, grid);
    worst = std::max(worst, std::abs(whole_life::phi_whole(params, {w, 0.0}) - term_life::phi_term(params, w)));
  }
  return make(name, worst, kTiny);
}

CheckResult check_hitting_time_identities(const ModelParams& params, std::size_t grid) {
  double worst = 0.0;
  const double lam = params.lambda;
  if (single_premium_available(params)) {
    const double H = single_premium_rate(params);
    for (double D : {0.0, 0.3 * params.b, 0.7 * params.b}) {
      for (std::size_t k = 1; k <= grid; ++k) {
        const WealthState s{grid_at(0.0, H * (params.b - D), k, grid), D};
        const double p = std::exp(-lam * single_premium::hitting_time_safe_sp(params, s));
        worst = std::max(worst, std::abs(p - single_premium::phi_no_cash(params, s)));
      }
    }
  }
  const auto sol = term_life::solve_term(params);
  for (std::size_t k = 1; k < grid; ++k) {
    const double w = grid_at(0.0, sol.safe_level, k, grid);
    const auto t = term_life::hitting_times_term(params, w);
    const bool full = sol.w_star && w < *sol.w_star;
    const double p = full ? -std::expm1(-lam * t.to_ruin) : std::exp(-lam * t.to_safe_level);
    worst = std::max(worst, std::abs(p - term_life::phi_term(params, w)));
  }
  return make("hitting-time identities", worst, kTiny);
}

CheckResult check_indifference_at_w_star(const ModelParams& params) {
  const std::string name = "indifference at w* (analytic)";
  const auto sol = term_life::solve_term(params);
  if (!sol.w_star || params.r <= 0.0) return skip(name, "requires lambda > r > 0");
  const auto t = term_life::hitting_times_term(params, *sol.w_star);
  const double sum = std::exp(-params.lambda * t.to_ruin) + std::exp(-params.lambda * t.to_safe_level);
  return make(name, std::abs(sum - 1.0), 1e-9, fmt("p(tau_0) + p(tau_safe) = ", sum));
}

CheckResult check_indifference_at_w_star_mc(const ModelParams& params, std::uint64_t n_paths, std::uint64_t seed) {
  const std::string name = "indifference at w* (simulation)";
  const auto sol = term_life::solve_term(params);
  if (!sol.w_star || params.r <= 0.0) return skip(name, "requires lambda > r > 0");
  const WealthState s{*sol.w_star, 0.0};
  const auto full = simulate(params, Product::Term, BuyNowFull{}, s, n_paths, seed);
  const auto wait = simulate(params, Product::Term, ThresholdBuy{sol.safe_level}, s, n_paths, seed + 1);
  const double phi = term_life::phi_term(params, *sol.w_star);
  const double se = std::sqrt(full.success_se * full.success_se + wait.success_se * wait.success_se);
  const double z = std::max({std::abs(full.success_prob - wait.success_prob) / se,
                             std::abs(full.success_prob - phi) / full.success_se,
                             std::abs(wait.success_prob - phi) / wait.success_se});
  std::ostringstream os;
  os.precision(6);
  os << "full " << full.success_prob << ", wait " << wait.success_prob << ", phi " << phi;
  return make(name, z, 3.0, os.str());
}

CheckResult check_seam_continuity(const ModelParams& params, std::size_t grid) {
  const std::string name = "whole-life seam continuity";
  if (params.r <= 0.0) return skip(name, "requires r > 0");
  const double b = params.b, r = params.r;
  const double h = continuous_premium_rate(params);
  const double top = h * b / (r + h);
  const double eps = 1e-13;
  const auto phi = [&](double w, double D) { return whole_life::phi_whole(params, {w, D}); };
  const auto w_star = term_life::solve_term(params).w_star;
  double worst = 0.0;
  for (std::size_t k = 1; k < grid; ++k) {
    const double w_high = grid_at(0.0, h * b / r, k, grid);
    worst = std::max(worst, std::abs(phi(w_high, b) - phi(w_high, b * (1.0 - eps))));
    const double w = grid_at(0.0, top, k, grid);
    worst = std::max(worst, std::abs(phi(w, b - w) - phi(w, (b - w) * (1.0 - eps))));
    const double dj = whole_life::jump_boundary(params, w);
    if (dj > 0.0 && (!w_star || w >= *w_star))
      worst = std::max(worst, std::abs(phi(w, dj) - phi(w, dj * (1.0 + eps) + eps * b)));
  }
  return make(name, worst, 1e-9, "across D = b, w + D = b and D = D_j(w)");
}

SuiteReport run_verification(const ModelParams& params, const VerifyOptions& o) {
  validate(params);
  SuiteReport rep;
  const bool sp_ok = single_premium_available(params);
  for (Product product : {Product::SinglePremium, Product::SinglePremiumCash, Product::Term, Product::Whole}) {
    const std::string tag = to_string(product);
    const bool ok = product == Product::Term || (product == Product::Whole ? params.r > 0.0 : sp_ok);
    if (!ok) {
      rep.checks.push_back(skip(tag + " variational inequality", "product unavailable for these parameters"));
      rep.checks.push_back(skip(tag + " expected-bequest BVP", "product unavailable for these parameters"));
      continue;
    }
    rep.checks.push_back(residual_check(tag + " variational inequality",
                                        check_variational_inequality(params, product, o.grid), o.tol));
    rep.checks.push_back(residual_check(tag + " expected-bequest BVP",
                                        check_bvp_expected_bequest(params, product, o.grid), o.tol));
  }
  rep.checks.push_back(check_sign_structure_fuzz(o.fuzz_draws, o.fuzz_grid, o.seed));
  rep.checks.push_back(check_jump_boundary_shape(params, o.fuzz_grid));
  rep.checks.push_back(check_jump_boundary_fuzz(40, o.fuzz_grid, o.seed + 1));
  rep.checks.push_back(check_w_star_statics(100, o.seed + 2));
  rep.checks.push_back(check_surrender_dominates(params, o.grid));
  rep.checks.push_back(check_surrender_bequest_jump(params, o.grid));
  rep.checks.push_back(check_term_bequest_jump(params));
  rep.checks.push_back(check_whole_matches_term(params, o.fuzz_grid));
  rep.checks.push_back(check_hitting_time_identities(params, o.grid.n_1d));
  rep.checks.push_back(check_indifference_at_w_star(params));
  rep.checks.push_back(check_indifference_at_w_star_mc(params, o.n_paths, o.seed + 3));
  rep.checks.push_back(check_seam_continuity(params, o.fuzz_grid));
  return rep;
}

}  // namespace bequest::oracle
