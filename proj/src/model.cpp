#include "bequest/model.hpp"

#include <cmath>
#include <sstream>

namespace bequest {

namespace {

std::string join_violations(const std::vector<ParamViolation>& violations) {
  std::ostringstream os;
  os << "invalid parameters:";
  for (const auto& v : violations) os << " [" << v.field << "] " << v.message << ';';
  return os.str();
}

void require_finite(const char* field, double value, std::vector<ParamViolation>& out) {
  if (!std::isfinite(value)) out.push_back({field, "must be finite"});
}

double raw_single_premium(const ModelParams& p) {
  return (1.0 + p.theta) * p.lambda / (p.r + p.lambda);
}

}  // namespace

InvalidParameters::InvalidParameters(std::vector<ParamViolation> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations)) {}

InvalidParameters::InvalidParameters(std::string field, std::string message)
    : InvalidParameters(std::vector<ParamViolation>{{std::move(field), std::move(message)}}) {}

ModelParams validate(const ModelParams& params) {
  std::vector<ParamViolation> bad;
  require_finite("b", params.b, bad);
  require_finite("r", params.r, bad);
  require_finite("lambda", params.lambda, bad);
  require_finite("theta", params.theta, bad);
  require_finite("theta_bar", params.theta_bar, bad);
  require_finite("rho", params.rho, bad);
  if (!bad.empty()) throw InvalidParameters(std::move(bad));

  if (!(params.b > 0.0)) bad.push_back({"b", "bequest goal must be positive"});
  if (!(params.r >= 0.0)) bad.push_back({"r", "force of interest must be non-negative"});
  if (!(params.lambda > 0.0)) bad.push_back({"lambda", "force of mortality must be positive"});
  if (!(params.theta >= 0.0)) bad.push_back({"theta", "single-premium loading must be non-negative"});
  if (!(params.theta_bar >= 0.0))
    bad.push_back({"theta_bar", "continuous-premium loading must be non-negative"});
  if (!(params.rho >= 0.0 && params.rho <= 1.0))
    bad.push_back({"rho", "invalid surrender charge: must lie in [0, 1]"});
  if (bad.empty() && params.r > 0.0 && raw_single_premium(params) >= 1.0) {
    std::ostringstream os;
    os << "single premium H = " << raw_single_premium(params)
       << " >= 1; the buyer would not pay a dollar or more for one dollar of death benefit";
    bad.push_back({"theta", os.str()});
  }
  if (!bad.empty()) throw InvalidParameters(std::move(bad));
  return params;
}

ModelParams validate_single_premium(const ModelParams& params) {
  validate(params);
  if (params.r <= 0.0)
    throw InvalidParameters("r", "single-premium products require r > 0");
  return params;
}

double single_premium_rate(const ModelParams& params) {
  validate_single_premium(params);
  return raw_single_premium(params);
}

double continuous_premium_rate(const ModelParams& params) {
  validate(params);
  return (1.0 + params.theta_bar) * params.lambda;
}

void validate_state(const WealthState& state) {
  if (!std::isfinite(state.w) || state.w < 0.0)
    throw DomainError("wealth must be finite and non-negative");
  if (!std::isfinite(state.D) || state.D < 0.0)
    throw DomainError("death benefit must be finite and non-negative");
}

std::string to_string(Product product) {
  switch (product) {
    case Product::SinglePremium: return "sp";
    case Product::SinglePremiumCash: return "sp-cash";
    case Product::Term: return "term";
    case Product::Whole: return "whole";
  }
  return "?";
}

Product product_from_string(const std::string& name) {
  if (name == "sp") return Product::SinglePremium;
  if (name == "sp-cash") return Product::SinglePremiumCash;
  if (name == "term") return Product::Term;
  if (name == "whole") return Product::Whole;
  throw std::invalid_argument("unknown product '" + name + "' (expected sp, sp-cash, term or whole)");
}

ModelParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParameters("<root>", "parameters must be a JSON object");
  std::vector<ParamViolation> missing;
  for (const char* key : {"b", "r", "lambda"})
    if (!j.contains(key)) missing.push_back({key, "required key missing"});
  if (!missing.empty()) throw InvalidParameters(std::move(missing));

  ModelParams p;
  try {
    p.b = j.at("b").get<double>();
    p.r = j.at("r").get<double>();
    p.lambda = j.at("lambda").get<double>();
    p.theta = j.value("theta", 0.0);
    p.theta_bar = j.value("theta_bar", p.theta);
    p.rho = j.value("rho", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameters("<json>", e.what());
  }
  return validate(p);
}

nlohmann::json params_to_json(const ModelParams& p) {
  return {{"b", p.b},         {"r", p.r},
          {"lambda", p.lambda}, {"theta", p.theta},
          {"theta_bar", p.theta_bar}, {"rho", p.rho}};
}

}  // namespace bequest
