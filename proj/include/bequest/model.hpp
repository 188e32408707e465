#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace bequest {

/// Market, mortality and pricing parameters. All rates are continuous,
/// per year; currency is abstract.
struct ModelParams {
  double b = 1.0;          // bequest goal
  double r = 0.0;          // force of interest
  double lambda = 0.0;     // force of mortality
  double theta = 0.0;      // loading on the single premium
  double theta_bar = 0.0;  // loading on the continuous premium
  double rho = 1.0;        // proportional surrender charge, in [0, 1]
};

/// Investable wealth and the death benefit already in force.
struct WealthState {
  double w = 0.0;
  double D = 0.0;
};

struct ParamViolation {
  std::string field;
  std::string message;
};

/// Thrown when parameters break an invariant. Carries every violation found,
/// not just the first.
class InvalidParameters : public std::invalid_argument {
 public:
  explicit InvalidParameters(std::vector<ParamViolation> violations);
  InvalidParameters(std::string field, std::string message);
  const std::vector<ParamViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<ParamViolation> violations_;
};

/// Thrown when a state or argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An internal invariant that theory guarantees was broken.
class NumericalDefect : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Checks every parameter invariant and returns the parameters unchanged.
/// H < 1 is enforced whenever r > 0; at r = 0 the single-premium product is
/// unavailable and only the continuous-premium products accept the params.
ModelParams validate(const ModelParams& params);

/// validate() plus the single-premium requirements r > 0 and H < 1.
ModelParams validate_single_premium(const ModelParams& params);

/// H = (1+theta) lambda / (r+lambda): price of one unit of whole life benefit.
double single_premium_rate(const ModelParams& params);

/// h = (1+theta_bar) lambda: premium rate per unit of benefit per year.
double continuous_premium_rate(const ModelParams& params);

void validate_state(const WealthState& state);

/// The four insurance products: single premium without and with cash value,
/// instantaneous term, and irreversible whole life with continuous premium.
enum class Product { SinglePremium, SinglePremiumCash, Term, Whole };

/// "sp", "sp-cash", "term", "whole".
std::string to_string(Product product);
Product product_from_string(const std::string& name);

// Flat JSON object with keys b, r, lambda, theta, theta_bar, rho. theta
// defaults to 0, theta_bar to theta, rho to 1 (no cash value).
ModelParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const ModelParams& params);

}  // namespace bequest
