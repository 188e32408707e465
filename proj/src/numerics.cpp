#include "bequest/numerics.hpp"

#include <cmath>
#include <sstream>

namespace bequest::numerics {

namespace {

void check_order(double a, double c) {
  if (!(0.0 < c && c < 1.0 && 1.0 < a && std::isfinite(a))) {
    std::ostringstream os;
    os << "test functions require 0 < c < 1 < a, got a=" << a << " c=" << c;
    throw std::invalid_argument(os.str());
  }
}

void check_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("argument must lie in [0, 1]");
}

}  // namespace

double f1(double x, double a, double c) {
  check_order(a, c);
  check_unit(x);
  if (x == 0.0 || x == 1.0) return 0.0;
  // Pair the terms that cancel so both ends keep full relative precision.
  if (x < 0.5) return pow_nonneg(x, a) + std::expm1(c * std::log1p(-x));
  return std::expm1(a * std::log(x)) + pow_nonneg(1.0 - x, c);
}

double f2(double x, double a, double c) {
  check_order(a, c);
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("f2 is defined on [0, 1)");
  const double k = c / a;
  return 1.0 - k * pow_nonneg(1.0 - x, c - 1.0) - (1.0 - k) * pow_nonneg(1.0 - x, c);
}

double f3(double x, double a, double c) {
  check_order(a, c);
  check_unit(x);
  const double k = a / c;
  return 1.0 - k * pow_nonneg(x, a - 1.0) + (k - 1.0) * pow_nonneg(x, a);
}

double x_star(double a, double c) {
  check_order(a, c);
  // f1 < 0 on (0, x*) and > 0 on (x*, 1). Walk in from whichever side of 1/2
  // the root is on until the sign flips. Above 1/2 the search runs in
  // g = 1 - x so that roots within 1e-16 of 1 are still resolved.
  const auto f = [a, c](double x) { return f1(x, a, c); };
  if (f(0.5) < 0.0) {
    const auto fg = [a, c](double g) { return std::expm1(a * std::log1p(-g)) + pow_nonneg(g, c); };
    double g_hi = 0.5;
    double g_lo = 0.25;
    while (fg(g_lo) <= 0.0) {
      g_hi = g_lo;
      g_lo *= 0.5;
      if (g_lo < 1e-300) throw std::logic_error("x_star: no positive value of f1 near 1");
    }
    return 1.0 - find_root(fg, RootSpec{g_lo, g_hi, 0.0, 4000});
  }
  double lo = 0.25;
  double hi = 0.5;
  while (f(lo) >= 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw std::logic_error("x_star: no negative value of f1 near 0");
  }
  return find_root(f, RootSpec{lo, hi, 0.0, 4000});
}

}  // namespace bequest::numerics
