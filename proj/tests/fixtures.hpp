#pragma once

#include "bequest/model.hpp"

namespace fixtures {

// b = 1, r = 0.03, lambda = 0.08, theta = theta_bar = 0.25 (so h = 0.1).
inline bequest::ModelParams base() {
  bequest::ModelParams p;
  p.b = 1.0;
  p.r = 0.03;
  p.lambda = 0.08;
  p.theta = 0.25;
  p.theta_bar = 0.25;
  p.rho = 1.0;
  return p;
}

inline bequest::ModelParams with_rho(double rho) {
  auto p = base();
  p.rho = rho;
  return p;
}

// lambda < r
inline bequest::ModelParams slow_mortality() {
  auto p = base();
  p.r = 0.05;
  p.lambda = 0.04;
  return p;
}

// lambda == r
inline bequest::ModelParams balanced() {
  auto p = base();
  p.r = 0.05;
  p.lambda = 0.05;
  return p;
}

}  // namespace fixtures
