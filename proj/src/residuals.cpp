#include "bequest/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>

#include "bequest/numerics.hpp"
#include "bequest/single_premium.hpp"
#include "bequest/term_life.hpp"
#include "bequest/whole_life.hpp"

namespace bequest::oracle {

namespace {

using numerics::finite_diff;
using numerics::Side;

constexpr int kOutside = -1;
constexpr double kEdge = 1e-10;

using Field = std::function<double(double, double)>;
using Labeler = std::function<int(double, double)>;

struct Surface {
  Labeler label;
  Field f;
};

enum class Axis { W, D };

// First derivative along one axis using only points in the same region.
std::optional<double> derivative(const Surface& s, Axis axis, double w, double D, double rel_step) {
  const double x0 = axis == Axis::W ? w : D;
  const double step = rel_step * std::max(1.0, std::abs(x0));
  const int l0 = s.label(w, D);
  auto same = [&](double k) {
    return axis == Axis::W ? s.label(w + k * step, D) == l0 : s.label(w, D + k * step) == l0;
  };
  auto g = [&](double x) { return axis == Axis::W ? s.f(x, D) : s.f(w, x); };
  if (same(-1) && same(1)) return finite_diff(g, x0, step, Side::Central);
  // Richardson-extrapolated one-sided differences: third order with four
  // points on one side, second order with two.
  auto one_sided = [&](Side side, double sign) -> std::optional<double> {
    if (!same(sign) || !same(2.0 * sign)) return std::nullopt;
    auto d1 = [&](double k) { return finite_diff(g, x0, k * step, side); };
    const double r1 = 2.0 * d1(1.0) - d1(2.0);
    if (!same(3.0 * sign) || !same(4.0 * sign)) return r1;
    const double r2 = 2.0 * d1(2.0) - d1(4.0);
    return (4.0 * r1 - r2) / 3.0;
  };
  if (auto d = one_sided(Side::Left, -1.0)) return d;
  return one_sided(Side::Right, 1.0);
}

struct Terms {
  double binding = 0.0;
  double violation = 0.0;
};

// Residual terms from (label, value, dw, dD) at a point.
using Evaluator = std::function<Terms(int, double, double, double, double, double)>;

void record(ResidualReport& rep, const Surface& s, const std::function<std::string(int)>& region_name,
            const Evaluator& eval, double w, double D, double rel_step, bool need_dD) {
  const int l = s.label(w, D);
  if (l == kOutside) return;
  const double value = s.f(w, D);
  const auto dw = derivative(s, Axis::W, w, D, rel_step);
  const auto dD = need_dD ? derivative(s, Axis::D, w, D, rel_step) : std::optional<double>(0.0);
  if (!dw || !dD) {
    ++rep.skipped;
    return;
  }
  const Terms t = eval(l, w, D, value, *dw, *dD);
  const double scale = std::abs(value) + 1.0;
  ResidualPoint p{w, D, region_name(l), value, std::abs(t.binding) / scale,
                  std::max(0.0, t.violation) / scale};
  rep.max_binding = std::max(rep.max_binding, p.binding);
  rep.max_violation = std::max(rep.max_violation, p.violation);
  rep.points.push_back(std::move(p));
}

void add_boundary(ResidualReport& rep, std::string name, double w, double D, double value, double expected) {
  const double err = std::abs(value - expected) / (std::abs(expected) + 1.0);
  rep.max_boundary_error = std::max(rep.max_boundary_error, err);
  rep.boundary.push_back({std::move(name), w, D, value, expected, err});
}

double grid_point(double hi, std::size_t i, std::size_t n) {
  return hi * static_cast<double>(i) / static_cast<double>(n + 1);
}

// ---- single premium -------------------------------------------------------

struct SpSetup {
  double b, r, lambda, H, rho;
  bool cash;
  int label(double w, double D) const {
    if (w < 0.0 || D < 0.0 || D >= b || w >= H * (b - D)) return kOutside;
    if (cash && D > 0.0 && w < (1.0 - rho) * H * (b - D)) return 1;
    return 0;
  }
};

std::string sp_region(int l) { return l == 1 ? "surrender" : "continuation"; }

template <class Fn>
void sweep_sp(ResidualReport& rep, const SpSetup& sp, const GridSpec& grid, Fn&& visit) {
  for (std::size_t j = 1; j <= grid.n_d; ++j) {
    const double D = grid_point(sp.b, j, grid.n_d);
    const double safe = sp.H * (sp.b - D);
    for (std::size_t i = 1; i <= grid.n_w; ++i) visit(grid_point(safe, i, grid.n_w), D);
  }
  (void)rep;
}

SpSetup sp_setup(const ModelParams& params, bool cash) {
  return {params.b, params.r, params.lambda, single_premium_rate(params), params.rho, cash};
}

ResidualReport vi_single_premium(const ModelParams& params, bool cash, const GridSpec& grid) {
  const SpSetup sp = sp_setup(params, cash);
  ResidualReport rep;
  rep.product = cash ? Product::SinglePremiumCash : Product::SinglePremium;
  rep.kind = "vi";
  Surface s{[sp](double w, double D) { return sp.label(w, D); },
            [&params, cash](double w, double D) {
              return cash ? single_premium::phi_cash(params, {w, D}) : single_premium::phi_no_cash(params, {w, D});
            }};
  Evaluator eval = [sp](int l, double w, double, double v, double vw, double vD) {
    const double grow = sp.r * w * vw - sp.lambda * v;
    const double buy = vD - sp.H * vw;
    const double sell = sp.cash ? (1.0 - sp.rho) * sp.H * vw - vD : -1.0;
    if (l == 1) return Terms{sell, std::max(grow, buy)};
    return Terms{grow, std::max(buy, sell)};
  };
  sweep_sp(rep, sp, grid, [&](double w, double D) { record(rep, s, sp_region, eval, w, D, grid.rel_step, true); });
  return rep;
}

ResidualReport bvp_single_premium(const ModelParams& params, bool cash, const GridSpec& grid) {
  const SpSetup sp = sp_setup(params, cash);
  ResidualReport rep;
  rep.product = cash ? Product::SinglePremiumCash : Product::SinglePremium;
  rep.kind = "bvp";
  auto E = [&params, cash](double w, double D) {
    return cash ? single_premium::expected_bequest_cash(params, {w, D})
                : single_premium::expected_bequest_no_cash(params, {w, D});
  };
  Surface s{[sp](double w, double D) { return sp.label(w, D); }, E};
  Evaluator eval = [sp](int l, double w, double D, double v, double vw, double) {
    if (l == 1) {
      const double x = w + (1.0 - sp.rho) * sp.H * D;
      return Terms{sp.lambda * (v - x) - sp.r * x * vw, 0.0};
    }
    return Terms{sp.lambda * (v - (w + D)) - sp.r * w * vw, 0.0};
  };
  sweep_sp(rep, sp, grid, [&](double w, double D) { record(rep, s, sp_region, eval, w, D, grid.rel_step, false); });
  for (std::size_t j = 1; j <= grid.n_d; ++j) {
    const double D = grid_point(sp.b, j, grid.n_d);
    const double safe = sp.H * (sp.b - D);
    add_boundary(rep, "E(safe level) = b", safe, D, E(safe, D), sp.b);
  }
  return rep;
}

// ---- term -----------------------------------------------------------------

struct TermSetup {
  double b, r, lambda, h, safe, w_star;
  int label(double w) const {
    if (w < 0.0 || w >= safe) return kOutside;
    return w < w_star ? 1 : 0;
  }
};

TermSetup term_setup(const ModelParams& params) {
  const auto sol = term_life::solve_term(params);
  const double h = continuous_premium_rate(params);
  return {params.b, params.r, params.lambda, h, sol.safe_level, sol.w_star.value_or(0.0)};
}

std::string term_region(int l) { return l == 1 ? "full_cover" : "wait"; }

ResidualReport vi_term(const ModelParams& params, const GridSpec& grid) {
  const TermSetup t = term_setup(params);
  ResidualReport rep;
  rep.product = Product::Term;
  rep.kind = "vi";
  Surface s{[t](double w, double) { return t.label(w); },
            [&params](double w, double) { return term_life::phi_term(params, w); }};
  Evaluator eval = [t](int l, double w, double, double v, double vw, double) {
    const double buy = t.lambda - t.h * (t.b - w) * vw;
    const double hjb = t.lambda * v - t.r * w * vw - std::max(buy, 0.0);
    return Terms{hjb, l == 1 ? -buy : buy};
  };
  for (std::size_t i = 1; i <= grid.n_1d; ++i)
    record(rep, s, term_region, eval, grid_point(t.safe, i, grid.n_1d), 0.0, grid.rel_step, false);
  return rep;
}

ResidualReport bvp_term(const ModelParams& params, const GridSpec& grid) {
  const TermSetup t = term_setup(params);
  ResidualReport rep;
  rep.product = Product::Term;
  rep.kind = "bvp";
  auto E = [&params](double w) { return term_life::expected_bequest_term(params, w); };
  Surface s{[t](double w, double) { return t.label(w); }, [E](double w, double) { return E(w); }};
  Evaluator eval = [t](int l, double w, double, double v, double vw, double) {
    if (l == 1) return Terms{t.lambda * (v - t.b) - ((t.r + t.h) * w - t.h * t.b) * vw, 0.0};
    return Terms{t.lambda * (v - w) - t.r * w * vw, 0.0};
  };
  for (std::size_t i = 1; i <= grid.n_1d; ++i)
    record(rep, s, term_region, eval, grid_point(t.safe, i, grid.n_1d), 0.0, grid.rel_step, false);
  add_boundary(rep, "E(safe level) = b", t.safe, 0.0, E(t.safe), t.b);
  add_boundary(rep, "E(safe level-) = b", t.safe * (1.0 - kEdge), 0.0, E(t.safe * (1.0 - kEdge)), t.b);
  if (t.w_star > 0.0) add_boundary(rep, "E(0) = 0", 0.0, 0.0, E(0.0), 0.0);
  return rep;
}

// ---- whole life -----------------------------------------------------------

struct WholeSetup {
  const ModelParams* params;
  double b, r, lambda, h, term_safe, kink;

  int label(double w, double D) const {
    if (w < 0.0 || D < 0.0) return kOutside;
    try {
      const auto region = whole_life::classify_region(*params, {w, D});
      return region == whole_life::Region::Safe ? kOutside : static_cast<int>(region);
    } catch (const DomainError&) {
      return kOutside;
    }
  }
  double safe(double D) const { return std::max(term_safe, h * D / r); }
};

WholeSetup whole_setup(const ModelParams& params) {
  whole_life::safe_level_whole(params, 0.0);
  const double h = continuous_premium_rate(params);
  const double r = params.r;
  return {&params, params.b, r, params.lambda, h, h * params.b / (r + h), r * params.b / (r + h)};
}

std::string whole_region(int l) { return whole_life::to_string(static_cast<whole_life::Region>(l)); }

template <class Fn>
void sweep_whole(const WholeSetup& ws, const GridSpec& grid, Fn&& visit) {
  for (std::size_t j = 1; j <= grid.n_d; ++j) {
    const double D = grid_point(grid.d_max_over_b * ws.b, j, grid.n_d);
    const double safe = ws.safe(D);
    for (std::size_t i = 1; i <= grid.n_w; ++i) visit(grid_point(safe, i, grid.n_w), D);
  }
}

ResidualReport vi_whole(const ModelParams& params, const GridSpec& grid) {
  const WholeSetup ws = whole_setup(params);
  ResidualReport rep;
  rep.product = Product::Whole;
  rep.kind = "vi";
  Surface s{[ws](double w, double D) { return ws.label(w, D); },
            [&params](double w, double D) { return whole_life::phi_whole(params, {w, D}); }};
  Evaluator eval = [ws](int l, double w, double D, double v, double vw, double vD) {
    const double goal = w + D >= ws.b ? 1.0 : 0.0;
    const double hold = (ws.r * w - ws.h * D) * vw - ws.lambda * (v - goal);
    if (l == static_cast<int>(whole_life::Region::RbJump)) return Terms{vD, hold};
    return Terms{hold, vD};
  };
  sweep_whole(ws, grid, [&](double w, double D) { record(rep, s, whole_region, eval, w, D, grid.rel_step, true); });
  return rep;
}

ResidualReport bvp_whole(const ModelParams& params, const GridSpec& grid) {
  using whole_life::Region;
  const WholeSetup ws = whole_setup(params);
  ResidualReport rep;
  rep.product = Product::Whole;
  rep.kind = "bvp";
  auto E = [&params](double w, double D) { return whole_life::expected_bequest_whole(params, {w, D}); };
  Surface s{[ws](double w, double D) { return ws.label(w, D); }, E};
  Evaluator eval = [ws](int l, double w, double D, double v, double vw, double) {
    if (l == static_cast<int>(Region::RbJump))
      return Terms{ws.lambda * (v - ws.b) - ((ws.r + ws.h) * w - ws.h * ws.b) * vw, 0.0};
    return Terms{ws.lambda * (v - (w + D)) - (ws.r * w - ws.h * D) * vw, 0.0};
  };
  sweep_whole(ws, grid, [&](double w, double D) { record(rep, s, whole_region, eval, w, D, grid.rel_step, false); });

  for (std::size_t j = 1; j <= grid.n_d; ++j) {
    const double D = grid_point(grid.d_max_over_b * ws.b, j, grid.n_d);
    const int at_zero = ws.label(0.0, D);
    if (at_zero == static_cast<int>(Region::R0) || at_zero == static_cast<int>(Region::RbJump))
      add_boundary(rep, "E(0, D) = 0", 0.0, D, E(0.0, D), 0.0);
    if (D > ws.kink && D < ws.b) {
      const double w = ws.b - D;
      const auto dD = derivative(s, Axis::D, w, D, grid.rel_step);
      if (dD) add_boundary(rep, "E_D(b - D, D) = 0", w, D, *dD, 0.0);
      add_boundary(rep, "E on the line = b (1 - (1 - x)^c)", w, D, E(w, D),
                   ws.b * -std::expm1(ws.lambda / (ws.r + ws.h) * std::log1p(-(ws.r + ws.h) * w / (ws.h * ws.b))));
    }
    const double w_edge = ws.term_safe * (1.0 - kEdge);
    if (D < ws.kink && ws.label(w_edge, D) == static_cast<int>(Region::RbWait))
      add_boundary(rep, "E(hb/(r+h)-, D) = b", w_edge, D, E(w_edge, D), ws.b);
  }
  for (std::size_t i = 1; i <= grid.n_w; ++i) {
    const double w = grid_point(ws.h * ws.b / ws.r, i, grid.n_w);
    const double D_below = ws.b * (1.0 - kEdge);
    if (ws.label(w, D_below) == static_cast<int>(Region::Ra))
      add_boundary(rep, "E(w, b-) = E(w, b)", w, D_below, E(w, D_below), E(w, ws.b));
  }
  return rep;
}

}  // namespace

bool ResidualReport::passed(double tol) const {
  return !points.empty() && max_binding <= tol && max_violation <= tol && max_boundary_error <= tol;
}

void ResidualReport::write_csv(std::ostream& os) const {
  const auto old = os.precision(17);
  os << "w,D,region,value,binding,violation\n";
  for (const auto& p : points)
    os << p.w << ',' << p.D << ',' << p.region << ',' << p.value << ',' << p.binding << ',' << p.violation << '\n';
  os.precision(old);
}

nlohmann::json ResidualReport::to_json(bool with_points) const {
  nlohmann::json j{{"product", to_string(product)},
                   {"kind", kind},
                   {"n_points", points.size()},
                   {"skipped", skipped},
                   {"max_binding", max_binding},
                   {"max_violation", max_violation},
                   {"max_boundary_error", max_boundary_error}};
  nlohmann::json bc = nlohmann::json::array();
  for (const auto& b : boundary)
    if (b.error > 0.0 || with_points)
      bc.push_back({{"name", b.name}, {"w", b.w}, {"D", b.D}, {"value", b.value}, {"expected", b.expected},
                    {"error", b.error}});
  j["n_boundary"] = boundary.size();
  if (with_points) {
    j["boundary"] = bc;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points)
      pts.push_back({{"w", p.w}, {"D", p.D}, {"region", p.region}, {"value", p.value}, {"binding", p.binding},
                     {"violation", p.violation}});
    j["points"] = pts;
  }
  return j;
}

ResidualReport check_variational_inequality(const ModelParams& params, Product product, const GridSpec& grid) {
  switch (product) {
    case Product::SinglePremium: return vi_single_premium(params, false, grid);
    case Product::SinglePremiumCash: return vi_single_premium(params, true, grid);
    case Product::Term: return vi_term(params, grid);
    case Product::Whole: return vi_whole(params, grid);
  }
  throw NumericalDefect("unknown product");
}

ResidualReport check_bvp_expected_bequest(const ModelParams& params, Product product, const GridSpec& grid) {
  switch (product) {
    case Product::SinglePremium: return bvp_single_premium(params, false, grid);
    case Product::SinglePremiumCash: return bvp_single_premium(params, true, grid);
    case Product::Term: return bvp_term(params, grid);
    case Product::Whole: return bvp_whole(params, grid);
  }
  throw NumericalDefect("unknown product");
}

}  // namespace bequest::oracle
