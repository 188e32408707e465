#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>
#include <string>

namespace bequest::numerics {

class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MaxIterationsExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RootSpec {
  double lo = 0.0;
  double hi = 1.0;
  double tol_abs = 1e-12;
  int max_iter = 200;
};

/// Final bisection bracket. `root` is always the midpoint of [lo, hi], so
/// re-running with this bracket returns the same root.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double root = 0.0;
  int iterations = 0;
};

/// x^a for x >= 0 via exp(a ln x), with exact results at x = 0 and x = 1.
/// Tiny negative x from round-off is treated as 0.
inline double pow_nonneg(double x, double a) {
  if (x == 1.0 || a == 0.0) return 1.0;
  if (x <= 0.0) return a > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::exp(a * std::log(x));
}

template <std::invocable<double> F>
RootBracket bisect(F&& f, const RootSpec& spec) {
  if (!(spec.lo <= spec.hi)) throw std::invalid_argument("bisect: bracket must satisfy lo <= hi");
  double lo = spec.lo;
  double hi = spec.hi;
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, lo, lo, 0};
  if (f_hi == 0.0) return {hi, hi, hi, 0};
  if (std::signbit(f_lo) == std::signbit(f_hi) || std::isnan(f_lo) || std::isnan(f_hi))
    throw NoSignChange("bisect: objective has no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  int it = 0;
  while (hi - lo > spec.tol_abs) {
    if (it == spec.max_iter)
      throw MaxIterationsExceeded("bisect: iteration cap reached before tolerance");
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
    const double f_mid = f(mid);
    ++it;
    if (f_mid == 0.0) return {mid, mid, mid, it};
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi, lo + 0.5 * (hi - lo), it};
}

template <std::invocable<double> F>
double find_root(F&& f, const RootSpec& spec) {
  return bisect(std::forward<F>(f), spec).root;
}

// Test functions whose sign structure locates the critical wealth.
// All require 0 < c < 1 < a.
double f1(double x, double a, double c);
double f2(double x, double a, double c);
double f3(double x, double a, double c);

/// Unique interior zero of f1 on (0, 1).
double x_star(double a, double c);

enum class Side { Central, Left, Right };

template <std::invocable<double> F>
double finite_diff(F&& f, double x, double step, Side side = Side::Central) {
  switch (side) {
    case Side::Left:
      return (f(x) - f(x - step)) / step;
    case Side::Right:
      return (f(x + step) - f(x)) / step;
    case Side::Central:
    default:
      return (f(x + step) - f(x - step)) / (2.0 * step);
  }
}

}  // namespace bequest::numerics
