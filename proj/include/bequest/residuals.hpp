#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "bequest/model.hpp"
#include "json.hpp"

namespace bequest::oracle {

struct GridSpec {
  std::size_t n_w = 200;     // wealth points per D row (2-D products)
  std::size_t n_d = 200;     // D rows
  std::size_t n_1d = 400;    // wealth points for term life
  double rel_step = 1e-6;    // FD step = rel_step * max(1, |x|)
  double d_max_over_b = 1.5; // whole life D range is (0, d_max_over_b * b)
};

/// Residuals at one interior grid point, scaled by |value| + 1. `binding` is
/// the term that must vanish in the point's region, `violation` the positive
/// part of the terms that must be <= 0 there.
struct ResidualPoint {
  double w = 0.0;
  double D = 0.0;
  std::string region;
  double value = 0.0;
  double binding = 0.0;
  double violation = 0.0;
};

struct BoundaryCheck {
  std::string name;
  double w = 0.0;
  double D = 0.0;
  double value = 0.0;
  double expected = 0.0;
  double error = 0.0;  // |value - expected| / (|expected| + 1)
};

struct ResidualReport {
  Product product = Product::Whole;
  std::string kind;  // "vi" or "bvp"
  std::vector<ResidualPoint> points;
  std::vector<BoundaryCheck> boundary;
  std::size_t skipped = 0;  // stencils that straddle a seam on both sides
  double max_binding = 0.0;
  double max_violation = 0.0;
  double max_boundary_error = 0.0;

  bool passed(double tol = 1e-5) const;
  /// w,D,region,value,binding,violation with a header row, full precision.
  void write_csv(std::ostream& os) const;
  nlohmann::json to_json(bool with_points = false) const;
};

/// Finite-difference residuals of the value function against its
/// variational inequality on an interior grid. Stencils that cross a region
/// seam fall back to one-sided second-order differences.
ResidualReport check_variational_inequality(const ModelParams& params, Product product,
                                            const GridSpec& grid = {});

/// Residuals of the expected-bequest formulas against their boundary-value
/// problems, plus the boundary conditions.
ResidualReport check_bvp_expected_bequest(const ModelParams& params, Product product,
                                          const GridSpec& grid = {});

}  // namespace bequest::oracle
