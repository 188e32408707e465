#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bequest/model.hpp"
#include "json.hpp"

namespace bequest::oracle {

// Strategies the simulator can follow. Optimal* defer to the closed-form
// module's optimal action at every decision point.
struct OptimalSP {};
struct OptimalSPCash {};
struct OptimalTerm {};
struct OptimalWhole {};
struct NeverBuy {};
/// Single premium: spend all wealth (up to the goal) on cover now.
/// Term / whole life: move to w + D = b now and ride that line.
struct BuyNowFull {};
/// Wait without cover until wealth reaches the threshold, then BuyNowFull.
struct ThresholdBuy {
  double w_threshold = 0.0;
};
/// Single premium with cash value: surrender everything if w is below the
/// threshold, then follow the optimal no-surrender policy.
struct SurrenderBelow {
  double w_threshold = 0.0;
};

using StrategySpec = std::variant<OptimalSP, OptimalSPCash, OptimalTerm, OptimalWhole, NeverBuy,
                                  BuyNowFull, ThresholdBuy, SurrenderBelow>;

std::string describe(const StrategySpec& strategy);
StrategySpec strategy_from_string(const std::string& text);

/// The closed-form optimal strategy of a product.
StrategySpec optimal_strategy(Product product);

/// Thrown when a strategy is not admissible for a product or its threshold
/// is out of range.
class InadmissibleStrategy : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One deterministic stretch of a path: W(t) = anchor + (w0 - anchor) e^{growth t}
/// for t in [0, duration). On the line the cover is b - W(t) and the bequest b.
struct Segment {
  double w0 = 0.0;
  double anchor = 0.0;
  double growth = 0.0;
  double duration = 0.0;
  double coverage = 0.0;
  bool on_line = false;

  double wealth_at(double t) const;
};

/// Between purchases wealth is deterministic, so a strategy reduces to a
/// finite list of segments. If `ruin` is set, the final segment ends when
/// wealth reaches 0 and any later death leaves nothing.
struct PathPlan {
  std::vector<Segment> segments;
  bool ruin = false;
};

PathPlan build_plan(const ModelParams& params, Product product, const StrategySpec& strategy,
                    const WealthState& state);

struct DeathOutcome {
  double bequest = 0.0;
  bool ruined = false;
};

DeathOutcome outcome_at(const PathPlan& plan, double b, double death_time);

struct SimReport {
  Product product = Product::Whole;
  std::string strategy;
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
  double success_prob = 0.0;
  double success_se = 0.0;
  double mean_bequest = 0.0;
  double bequest_se = 0.0;
  double ruin_frac = 0.0;
};

nlohmann::json to_json(const SimReport& report);

/// Monte Carlo estimate of the goal probability and expected bequest.
/// Path i draws its death time from SplitMix64 keyed on (seed, i), and paths
/// are reduced in fixed chunks, so the result does not depend on `threads`
/// (0 = hardware concurrency).
SimReport simulate(const ModelParams& params, Product product, const StrategySpec& strategy,
                   const WealthState& state, std::uint64_t n_paths, std::uint64_t seed,
                   unsigned threads = 0);

/// Closed-form value function of a product at a state.
double closed_form_phi(const ModelParams& params, Product product, const WealthState& state);
/// Closed-form expected bequest of a product's optimal strategy.
double closed_form_bequest(const ModelParams& params, Product product, const WealthState& state);

struct DominanceEntry {
  std::string strategy;
  SimReport report;
  double margin = 0.0;  // phi - (estimate - z * se)
  bool passed = false;
};

struct DominanceReport {
  double phi = 0.0;
  double z = 3.0;
  std::vector<DominanceEntry> entries;
  bool all_passed = true;
};

nlohmann::json to_json(const DominanceReport& report);

/// A family of suboptimal but admissible strategies for a product and state:
/// never buying, buying everything now, and threshold rules.
std::vector<StrategySpec> alternative_strategies(const ModelParams& params, Product product,
                                                 const WealthState& state);

/// Checks that no alternative beats the closed-form probability by more than
/// z standard errors.
DominanceReport dominance_test(const ModelParams& params, Product product, const WealthState& state,
                               const std::vector<StrategySpec>& alternatives, std::uint64_t n_paths,
                               std::uint64_t seed, double z = 3.0, unsigned threads = 0);

}  // namespace bequest::oracle
