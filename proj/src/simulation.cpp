#include "bequest/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>

#include "bequest/single_premium.hpp"
#include "bequest/term_life.hpp"
#include "bequest/whole_life.hpp"

namespace bequest::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSuccessSlack = 1e-12;
constexpr double kLineSlack = 1e-12;
constexpr std::uint64_t kChunk = 1u << 16;
constexpr int kMaxMoves = 64;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct HoldUntil {
  std::optional<double> level;
};
struct Purchase {
  double amount = 0.0;
};
struct JumpAndTrack {};
struct Surrender {};
struct TrackLine {};
using Move = std::variant<HoldUntil, Purchase, JumpAndTrack, Surrender, TrackLine>;

struct Flow {
  double anchor = 0.0;
  double growth = 0.0;
};

double time_to(const Flow& f, double w0, double level) {
  if (level == w0) return 0.0;
  if (f.growth == 0.0 || w0 == f.anchor) return kInf;
  const double ratio = (level - f.anchor) / (w0 - f.anchor);
  if (!(ratio > 1.0)) return kInf;
  return std::log(ratio) / f.growth;
}

bool is_single_premium(Product p) {
  return p == Product::SinglePremium || p == Product::SinglePremiumCash;
}

class Planner {
 public:
  Planner(const ModelParams& params, Product product) : params_(params), product_(product) {
    if (is_single_premium(product)) {
      H_ = single_premium_rate(params);
    } else {
      h_ = continuous_premium_rate(params);
      if (product == Product::Whole && params.r <= 0.0)
        throw DomainError("irreversible whole life requires r > 0");
    }
  }

  template <class Policy>
  PathPlan run(WealthState s, Policy&& policy) const {
    PathPlan plan;
    for (int move = 0; move < kMaxMoves; ++move) {
      const Move next = policy(s);
      const bool more = std::visit(
          overloaded{
              [&](const HoldUntil& m) { return hold(plan, s, m.level); },
              [&](const Purchase& m) {
                purchase(s, m.amount);
                return true;
              },
              [&](const JumpAndTrack&) {
                s.D = params_.b - s.w;
                track_line(plan, s);
                return false;
              },
              [&](const Surrender&) {
                s.w += (1.0 - params_.rho) * H_ * s.D;
                s.D = 0.0;
                return true;
              },
              [&](const TrackLine&) {
                track_line(plan, s);
                return false;
              },
          },
          next);
      if (!more) return plan;
    }
    throw NumericalDefect("path plan did not terminate");
  }

  double b() const { return params_.b; }
  double H() const { return H_; }

 private:
  Flow hold_flow(double D) const {
    if (is_single_premium(product_) || D == 0.0) return {0.0, params_.r};
    return {h_ * D / params_.r, params_.r};
  }

  Flow line_flow() const {
    const double rh = params_.r + h_;
    return {h_ * params_.b / rh, rh};
  }

  bool hold(PathPlan& plan, WealthState& s, std::optional<double> level) const {
    const Flow f = hold_flow(s.D);
    const double t_target = level ? time_to(f, s.w, *level) : kInf;
    const double t_ruin = f.anchor > 0.0 ? time_to(f, s.w, 0.0) : kInf;
    if (std::isfinite(t_target) && t_target <= t_ruin) {
      if (t_target > 0.0) plan.segments.push_back({s.w, f.anchor, f.growth, t_target, s.D, false});
      s.w = *level;
      return true;
    }
    plan.segments.push_back({s.w, f.anchor, f.growth, t_ruin, s.D, false});
    plan.ruin = std::isfinite(t_ruin);
    return false;
  }

  void purchase(WealthState& s, double amount) const {
    if (is_single_premium(product_)) {
      const double cost = H_ * amount;
      s.w = cost >= s.w * (1.0 - kLineSlack) ? 0.0 : s.w - cost;
    }
    s.D += amount;
  }

  void track_line(PathPlan& plan, WealthState s) const {
    const double b = params_.b;
    const Flow f = line_flow();
    if (product_ == Product::Term) {
      if (s.w >= b) {
        s.D = 0.0;
        hold(plan, s, std::nullopt);
        return;
      }
      if (s.w >= f.anchor) {
        const double t_goal = time_to(f, s.w, b);
        plan.segments.push_back({s.w, f.anchor, f.growth, t_goal, b - s.w, true});
        if (std::isfinite(t_goal)) {
          s.w = b;
          s.D = 0.0;
          hold(plan, s, std::nullopt);
        }
        return;
      }
    } else if (s.w > f.anchor) {
      // Whole-life cover cannot shrink as wealth grows past the line's anchor.
      hold(plan, s, std::nullopt);
      return;
    }
    const double t_ruin = time_to(f, s.w, 0.0);
    plan.segments.push_back({s.w, f.anchor, f.growth, t_ruin, b - s.w, true});
    plan.ruin = std::isfinite(t_ruin);
  }

  ModelParams params_;
  Product product_;
  double H_ = 0.0;
  double h_ = 0.0;
};

double threshold_of(const StrategySpec& strategy) {
  if (const auto* t = std::get_if<ThresholdBuy>(&strategy)) return t->w_threshold;
  if (const auto* t = std::get_if<SurrenderBelow>(&strategy)) return t->w_threshold;
  return 0.0;
}

void check_admissible(Product product, const StrategySpec& strategy) {
  const double th = threshold_of(strategy);
  if (!std::isfinite(th) || th < 0.0)
    throw InadmissibleStrategy("strategy threshold must be finite and non-negative");
  const bool ok = std::visit(
      overloaded{
          [&](const OptimalSP&) { return is_single_premium(product); },
          [&](const OptimalSPCash&) { return product == Product::SinglePremiumCash; },
          [&](const OptimalTerm&) { return product == Product::Term; },
          [&](const OptimalWhole&) { return product == Product::Whole; },
          [&](const SurrenderBelow&) { return product == Product::SinglePremiumCash; },
          [](const auto&) { return true; },
      },
      strategy);
  if (!ok)
    throw InadmissibleStrategy("strategy " + describe(strategy) + " is not admissible for product " +
                               to_string(product));
}

Move sp_optimal(const ModelParams& params, const WealthState& s, bool allow_surrender) {
  using namespace single_premium;
  const SpAction action =
      allow_surrender ? optimal_action_cash(params, s) : optimal_action_no_cash(params, s);
  return std::visit(overloaded{
                        [&](const Wait&) -> Move { return HoldUntil{safe_level_sp(params, s.D)}; },
                        [&](const BuyAdditional& a) -> Move {
                          if (a.amount > 0.0) return Purchase{a.amount};
                          return HoldUntil{};
                        },
                        [&](const SurrenderAll&) -> Move { return Surrender{}; },
                        [&](const AlreadyFunded&) -> Move { return HoldUntil{}; },
                    },
                    action);
}

Move sp_buy_full(const Planner& pl, const WealthState& s) {
  if (s.D >= pl.b() || s.w <= 0.0) return HoldUntil{};
  return Purchase{std::min(pl.b() - s.D, s.w / pl.H())};
}

Move whole_ride_full(double b, const WealthState& s, double w_anchor) {
  if (s.D >= b) return HoldUntil{};
  const double gap = b - (s.w + s.D);
  if (std::abs(gap) <= kLineSlack * b) return s.w <= w_anchor ? Move{TrackLine{}} : Move{HoldUntil{}};
  if (gap > 0.0) return s.w <= w_anchor ? Move{JumpAndTrack{}} : Move{Purchase{gap}};
  return HoldUntil{b - s.D};
}

PathPlan plan_single_premium(const ModelParams& params, const Planner& pl, Product product,
                             const StrategySpec& strategy, const WealthState& state) {
  return std::visit(
      overloaded{
          [&](const OptimalSP&) {
            return pl.run(state, [&](const WealthState& s) { return sp_optimal(params, s, false); });
          },
          [&](const OptimalSPCash&) {
            return pl.run(state, [&](const WealthState& s) { return sp_optimal(params, s, true); });
          },
          [&](const NeverBuy&) { return pl.run(state, [](const WealthState&) -> Move { return HoldUntil{}; }); },
          [&](const BuyNowFull&) { return pl.run(state, [&](const WealthState& s) { return sp_buy_full(pl, s); }); },
          [&](const ThresholdBuy& t) {
            return pl.run(state, [&](const WealthState& s) -> Move {
              if (s.w >= t.w_threshold) return sp_buy_full(pl, s);
              if (s.D >= pl.b()) return HoldUntil{};
              return HoldUntil{t.w_threshold};
            });
          },
          [&](const SurrenderBelow& t) {
            bool first = true;
            return pl.run(state, [&](const WealthState& s) -> Move {
              const bool at_start = std::exchange(first, false);
              if (at_start && s.D > 0.0 && s.w < t.w_threshold) return Surrender{};
              return sp_optimal(params, s, false);
            });
          },
          [&](const auto&) -> PathPlan {
            throw InadmissibleStrategy("strategy not admissible for " + to_string(product));
          },
      },
      strategy);
}

PathPlan plan_term(const ModelParams& params, const Planner& pl, const StrategySpec& strategy,
                   WealthState state) {
  state.D = 0.0;
  const double safe = term_life::solve_term(params).safe_level;
  return std::visit(
      overloaded{
          [&](const OptimalTerm&) {
            return pl.run(state, [&](const WealthState& s) -> Move {
              if (s.w >= safe || term_life::optimal_coverage_term(params, s.w) > 0.0) return TrackLine{};
              return HoldUntil{safe};
            });
          },
          [&](const NeverBuy&) { return pl.run(state, [](const WealthState&) -> Move { return HoldUntil{}; }); },
          [&](const BuyNowFull&) { return pl.run(state, [](const WealthState&) -> Move { return TrackLine{}; }); },
          [&](const ThresholdBuy& t) {
            return pl.run(state, [&](const WealthState& s) -> Move {
              if (s.w >= t.w_threshold) return TrackLine{};
              return HoldUntil{t.w_threshold};
            });
          },
          [&](const auto&) -> PathPlan { throw InadmissibleStrategy("strategy not admissible for term"); },
      },
      strategy);
}

PathPlan plan_whole(const ModelParams& params, const Planner& pl, const StrategySpec& strategy,
                    const WealthState& state) {
  const double b = params.b;
  const double w_anchor = term_life::solve_term(params).safe_level;
  return std::visit(
      overloaded{
          [&](const OptimalWhole&) {
            return pl.run(state, [&](const WealthState& s) -> Move {
              using namespace whole_life;
              const WlAction action = optimal_action_whole(params, s);
              return std::visit(
                  overloaded{
                      [](const NoMoreInsurance&) -> Move { return HoldUntil{}; },
                      [&](const WaitThenTrack&) -> Move { return whole_ride_full(b, s, w_anchor); },
                      [&](const Wait&) -> Move { return HoldUntil{safe_level_whole(params, s.D)}; },
                      [](const JumpToFullThenTrack&) -> Move { return JumpAndTrack{}; },
                      [&](const SecureGoal& g) -> Move {
                        if (g.amount > kLineSlack * b) return Purchase{g.amount};
                        return HoldUntil{};
                      },
                  },
                  action);
            });
          },
          [&](const NeverBuy&) { return pl.run(state, [](const WealthState&) -> Move { return HoldUntil{}; }); },
          [&](const BuyNowFull&) {
            return pl.run(state, [&](const WealthState& s) { return whole_ride_full(b, s, w_anchor); });
          },
          [&](const ThresholdBuy& t) {
            return pl.run(state, [&](const WealthState& s) -> Move {
              if (s.w >= t.w_threshold) return whole_ride_full(b, s, w_anchor);
              return HoldUntil{t.w_threshold};
            });
          },
          [&](const auto&) -> PathPlan { throw InadmissibleStrategy("strategy not admissible for whole"); },
      },
      strategy);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double death_time(std::uint64_t seed, std::uint64_t path, double lambda) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(path));
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return -std::log1p(-u) / lambda;
}

struct ChunkSums {
  std::uint64_t successes = 0;
  std::uint64_t ruins = 0;
  double bequest = 0.0;
  double bequest_sq = 0.0;
};

}  // namespace

double Segment::wealth_at(double t) const {
  if (growth == 0.0) return w0;
  return anchor + (w0 - anchor) * std::exp(growth * t);
}

std::string describe(const StrategySpec& strategy) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const OptimalSP&) { os << "optimal-sp"; },
                 [&](const OptimalSPCash&) { os << "optimal-sp-cash"; },
                 [&](const OptimalTerm&) { os << "optimal-term"; },
                 [&](const OptimalWhole&) { os << "optimal-whole"; },
                 [&](const NeverBuy&) { os << "never-buy"; },
                 [&](const BuyNowFull&) { os << "buy-now-full"; },
                 [&](const ThresholdBuy& t) { os << "threshold-buy:" << t.w_threshold; },
                 [&](const SurrenderBelow& t) { os << "surrender-below:" << t.w_threshold; },
             },
             strategy);
  return os.str();
}

StrategySpec strategy_from_string(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  auto threshold = [&]() {
    if (colon == std::string::npos) throw InadmissibleStrategy(name + " needs a threshold, e.g. " + name + ":0.5");
    try {
      std::size_t used = 0;
      const double v = std::stod(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw InadmissibleStrategy("bad threshold in strategy '" + text + "'");
    }
  };
  if (name == "optimal-sp") return OptimalSP{};
  if (name == "optimal-sp-cash") return OptimalSPCash{};
  if (name == "optimal-term") return OptimalTerm{};
  if (name == "optimal-whole") return OptimalWhole{};
  if (name == "never-buy") return NeverBuy{};
  if (name == "buy-now-full") return BuyNowFull{};
  if (name == "threshold-buy") return ThresholdBuy{threshold()};
  if (name == "surrender-below") return SurrenderBelow{threshold()};
  throw InadmissibleStrategy("unknown strategy '" + text + "'");
}

StrategySpec optimal_strategy(Product product) {
  switch (product) {
    case Product::SinglePremium: return OptimalSP{};
    case Product::SinglePremiumCash: return OptimalSPCash{};
    case Product::Term: return OptimalTerm{};
    case Product::Whole: return OptimalWhole{};
  }
  return NeverBuy{};
}

PathPlan build_plan(const ModelParams& params, Product product, const StrategySpec& strategy,
                    const WealthState& state) {
  validate_state(state);
  check_admissible(product, strategy);
  const Planner pl(params, product);
  switch (product) {
    case Product::SinglePremium:
    case Product::SinglePremiumCash:
      return plan_single_premium(params, pl, product, strategy, state);
    case Product::Term:
      return plan_term(params, pl, strategy, state);
    case Product::Whole:
      return plan_whole(params, pl, strategy, state);
  }
  throw NumericalDefect("unknown product");
}

DeathOutcome outcome_at(const PathPlan& plan, double b, double death_time) {
  double t = death_time;
  for (const auto& seg : plan.segments) {
    if (t < seg.duration) {
      if (seg.on_line) return {b, false};
      return {seg.wealth_at(t) + seg.coverage, false};
    }
    t -= seg.duration;
  }
  return {0.0, true};
}

nlohmann::json to_json(const SimReport& r) {
  return {{"product", to_string(r.product)},
          {"strategy", r.strategy},
          {"n_paths", r.n_paths},
          {"seed", r.seed},
          {"success_prob", r.success_prob},
          {"success_se", r.success_se},
          {"mean_bequest", r.mean_bequest},
          {"bequest_se", r.bequest_se},
          {"ruin_frac", r.ruin_frac}};
}

SimReport simulate(const ModelParams& params, Product product, const StrategySpec& strategy,
                   const WealthState& state, std::uint64_t n_paths, std::uint64_t seed, unsigned threads) {
  if (n_paths == 0) throw std::invalid_argument("n_paths must be at least 1");
  const PathPlan plan = build_plan(params, product, strategy, state);
  const double b = params.b;
  const double goal = b * (1.0 - kSuccessSlack);

  const std::uint64_t n_chunks = (n_paths + kChunk - 1) / kChunk;
  std::vector<ChunkSums> sums(n_chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (std::uint64_t c = next++; c < n_chunks; c = next++) {
      ChunkSums acc;
      const std::uint64_t end = std::min(n_paths, (c + 1) * kChunk);
      for (std::uint64_t i = c * kChunk; i < end; ++i) {
        const DeathOutcome o = outcome_at(plan, b, death_time(seed, i, params.lambda));
        acc.successes += o.bequest >= goal;
        acc.ruins += o.ruined;
        acc.bequest += o.bequest;
        acc.bequest_sq += o.bequest * o.bequest;
      }
      sums[c] = acc;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  ChunkSums total;
  for (const auto& s : sums) {
    total.successes += s.successes;
    total.ruins += s.ruins;
    total.bequest += s.bequest;
    total.bequest_sq += s.bequest_sq;
  }
  const double n = static_cast<double>(n_paths);
  SimReport r;
  r.product = product;
  r.strategy = describe(strategy);
  r.n_paths = n_paths;
  r.seed = seed;
  r.success_prob = static_cast<double>(total.successes) / n;
  r.success_se = std::sqrt(r.success_prob * (1.0 - r.success_prob) / n);
  r.mean_bequest = total.bequest / n;
  const double var = n > 1.0 ? std::max(0.0, (total.bequest_sq - n * r.mean_bequest * r.mean_bequest) / (n - 1.0)) : 0.0;
  r.bequest_se = std::sqrt(var / n);
  r.ruin_frac = static_cast<double>(total.ruins) / n;
  return r;
}

double closed_form_phi(const ModelParams& params, Product product, const WealthState& state) {
  switch (product) {
    case Product::SinglePremium: return single_premium::phi_no_cash(params, state);
    case Product::SinglePremiumCash: return single_premium::phi_cash(params, state);
    case Product::Term: return term_life::phi_term(params, state.w);
    case Product::Whole: return whole_life::phi_whole(params, state);
  }
  return 0.0;
}

double closed_form_bequest(const ModelParams& params, Product product, const WealthState& state) {
  switch (product) {
    case Product::SinglePremium: return single_premium::expected_bequest_no_cash(params, state);
    case Product::SinglePremiumCash: return single_premium::expected_bequest_cash(params, state);
    case Product::Term: return term_life::expected_bequest_term(params, state.w);
    case Product::Whole: return whole_life::expected_bequest_whole(params, state);
  }
  return 0.0;
}

nlohmann::json to_json(const DominanceReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries)
    entries.push_back({{"strategy", e.strategy},
                       {"success_prob", e.report.success_prob},
                       {"success_se", e.report.success_se},
                       {"margin", e.margin},
                       {"passed", e.passed}});
  return {{"phi", report.phi}, {"z", report.z}, {"all_passed", report.all_passed}, {"entries", entries}};
}

std::vector<StrategySpec> alternative_strategies(const ModelParams& params, Product product,
                                                 const WealthState& state) {
  std::vector<StrategySpec> out{NeverBuy{}, BuyNowFull{}};
  double safe = 0.0;
  switch (product) {
    case Product::SinglePremium:
    case Product::SinglePremiumCash:
      safe = single_premium::safe_level_sp(params, state.D);
      break;
    case Product::Term: safe = term_life::solve_term(params).safe_level; break;
    case Product::Whole: safe = whole_life::safe_level_whole(params, state.D); break;
  }
  for (double f : {0.25, 0.5, 0.75, 0.9, 1.1})
    if (safe > 0.0 && f * safe > state.w) out.push_back(ThresholdBuy{f * safe});
  if (product == Product::SinglePremiumCash) {
    out.push_back(OptimalSP{});
    for (double f : {0.5, 1.0, 1.5})
      if (state.D > 0.0) out.push_back(SurrenderBelow{f * std::max(state.w, 1e-3 * params.b)});
  }
  return out;
}

DominanceReport dominance_test(const ModelParams& params, Product product, const WealthState& state,
                               const std::vector<StrategySpec>& alternatives, std::uint64_t n_paths,
                               std::uint64_t seed, double z, unsigned threads) {
  DominanceReport out;
  out.phi = closed_form_phi(params, product, state);
  out.z = z;
  for (const auto& alt : alternatives) {
    DominanceEntry e;
    e.strategy = describe(alt);
    e.report = simulate(params, product, alt, state, n_paths, seed, threads);
    e.margin = out.phi - (e.report.success_prob - z * e.report.success_se);
    e.passed = e.margin >= 0.0;
    out.all_passed = out.all_passed && e.passed;
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace bequest::oracle
