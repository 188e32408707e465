#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "bequest/model.hpp"
#include "bequest/residuals.hpp"
#include "bequest/simulation.hpp"
#include "bequest/single_premium.hpp"
#include "bequest/term_life.hpp"
#include "bequest/verification.hpp"
#include "bequest/whole_life.hpp"
#include "json.hpp"

namespace bequest::cli {

namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Flags {
  std::optional<std::string> product, format, out, config, axis, values, strategy;
  std::optional<double> b, r, lambda, theta, theta_bar, rho, w, d;
  std::optional<std::uint64_t> n_paths, seed;
  std::optional<std::size_t> grid;
  std::optional<int> precision;
  std::optional<unsigned> threads;
};

struct RunConfig {
  ModelParams params;
  std::optional<Product> product;
  WealthState state;
  std::uint64_t n_paths = 100000;
  std::uint64_t seed = 1;
  std::optional<std::size_t> grid;
  std::string format = "table";
  int precision = 6;
  std::optional<std::string> out;
  std::string strategy = "optimal";
  std::optional<std::string> axis;
  std::vector<double> values;
  unsigned threads = 0;

  Product need_product(const char* command) const {
    if (!product) throw UsageError(std::string(command) + " requires --product");
    return *product;
  }
};

json config_to_json(const RunConfig& c) {
  json j = params_to_json(c.params);
  j["product"] = c.product ? json(to_string(*c.product)) : json(nullptr);
  j["w"] = c.state.w;
  j["D"] = c.state.D;
  j["n_paths"] = c.n_paths;
  j["seed"] = c.seed;
  j["grid"] = c.grid ? json(*c.grid) : json(nullptr);
  j["format"] = c.format;
  j["precision"] = c.precision;
  j["strategy"] = c.strategy;
  j["axis"] = c.axis ? json(*c.axis) : json(nullptr);
  j["values"] = c.values;
  return j;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    while (first != last && *first == ' ') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw UsageError("bad number '" + item + "' in --values");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--values must list at least one number");
  return out;
}

json load_config_file(const Flags& f) {
  std::string path;
  if (f.config) {
    path = *f.config;
  } else if (const char* env = std::getenv(kConfigEnv); env && *env) {
    path = env;
  } else {
    return json::object();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  static const std::vector<std::string> known{"b",       "r",    "lambda", "theta",     "theta_bar", "rho",
                                              "product", "w",    "D",      "n_paths",   "seed",      "grid",
                                              "format",  "precision", "strategy", "axis", "values", "threads"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw UsageError("unknown config key '" + key + "'");
  return j;
}

template <class T>
T pick(const std::optional<T>& flag, const json& cfg, const char* key, T fallback) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception&) {
      throw InvalidParameters(key, "config value has the wrong type");
    }
  }
  return fallback;
}

RunConfig build_config(const Flags& f) {
  const json cfg = load_config_file(f);
  RunConfig c;
  if (auto name = f.product ? f.product : (cfg.contains("product") ? std::optional(cfg["product"].get<std::string>())
                                                                     : std::nullopt))
    c.product = product_from_string(*name);

  ModelParams& p = c.params;
  p.b = pick(f.b, cfg, "b", 1.0);
  p.r = pick(f.r, cfg, "r", 0.03);
  p.lambda = pick(f.lambda, cfg, "lambda", 0.08);
  p.theta = pick(f.theta, cfg, "theta", 0.25);
  p.theta_bar = pick(f.theta_bar, cfg, "theta_bar", p.theta);
  p.rho = pick(f.rho, cfg, "rho", 1.0);

  if (c.product) {
    const Product pr = *c.product;
    if (f.rho && pr != Product::SinglePremiumCash)
      throw InvalidParameters("rho", "--rho applies only to --product sp-cash");
    if (f.theta_bar && (pr == Product::SinglePremium || pr == Product::SinglePremiumCash))
      throw InvalidParameters("theta_bar", "--theta-bar applies only to --product term or whole");
  }
  validate(p);

  c.state.w = pick(f.w, cfg, "w", 0.0);
  c.state.D = pick(f.d, cfg, "D", 0.0);
  c.n_paths = pick(f.n_paths, cfg, "n_paths", std::uint64_t{100000});
  c.seed = pick(f.seed, cfg, "seed", std::uint64_t{1});
  if (f.grid) {
    c.grid = *f.grid;
  } else if (cfg.contains("grid")) {
    c.grid = cfg["grid"].get<std::size_t>();
  }
  if (c.grid && *c.grid < 2) throw UsageError("--grid must be at least 2");
  c.format = pick(f.format, cfg, "format", std::string("table"));
  if (c.format != "table" && c.format != "json" && c.format != "csv")
    throw UsageError("--format must be table, json or csv");
  c.precision = pick(f.precision, cfg, "precision", 6);
  if (c.precision < 1 || c.precision > 17) throw UsageError("--precision must lie in [1, 17]");
  c.out = f.out;
  c.strategy = pick(f.strategy, cfg, "strategy", std::string("optimal"));
  if (f.axis) {
    c.axis = *f.axis;
  } else if (cfg.contains("axis")) {
    c.axis = cfg["axis"].get<std::string>();
  }
  if (f.values) {
    c.values = parse_values(*f.values);
  } else if (cfg.contains("values")) {
    c.values = cfg["values"].get<std::vector<double>>();
  }
  c.threads = pick(f.threads, cfg, "threads", 0u);
  return c;
}

// ---- reports --------------------------------------------------------------

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Section {
  std::string name;
  bool kv = true;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::string key, Cell value) { rows.push_back({std::move(key), std::move(value)}); }
};

Section kv_section(std::string name) { return {std::move(name), true, {"quantity", "value"}, {}}; }

struct Report {
  std::string command;
  std::vector<Section> sections;
  int exit_code = kOk;
};

Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

template <class F>
Cell guarded(F&& f) {
  try {
    return Cell(f());
  } catch (const DomainError&) {
    return Cell();
  }
}

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : (v < 0 ? "-inf" : "nan"));
        } else {
          return v;
        }
      },
      c);
}

std::string shortest(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string cell_text(const Cell& c, int precision, bool full) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return full ? "" : "n/a";
        } else if constexpr (std::is_same_v<T, double>) {
          if (full) return shortest(v);
          std::ostringstream os;
          os << std::setprecision(precision) << v;
          return os.str();
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string render_table(const Report& rep, int precision) {
  std::ostringstream os;
  bool first = true;
  for (const auto& sec : rep.sections) {
    if (!first) os << '\n';
    first = false;
    os << "# " << sec.name << '\n';
    std::vector<std::vector<std::string>> cells;
    if (!sec.kv) cells.push_back(sec.columns);
    for (const auto& row : sec.rows) {
      std::vector<std::string> line;
      for (const auto& c : row) line.push_back(cell_text(c, precision, false));
      cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width;
    for (const auto& line : cells)
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (width.size() <= i) width.push_back(0);
        width[i] = std::max(width[i], line[i].size());
      }
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        os << line[i];
        if (i + 1 < line.size()) os << std::string(width[i] - line[i].size() + 2, ' ');
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string render_csv(const Report& rep) {
  const Section* primary = nullptr;
  for (const auto& sec : rep.sections)
    if (!sec.kv) {
      primary = &sec;
      break;
    }
  std::ostringstream os;
  if (primary) {
    for (std::size_t i = 0; i < primary->columns.size(); ++i)
      os << (i ? "," : "") << csv_field(primary->columns[i]);
    os << '\n';
    for (const auto& row : primary->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i], 17, true));
      os << '\n';
    }
    return os.str();
  }
  os << "section,quantity,value\n";
  for (const auto& sec : rep.sections)
    for (const auto& row : sec.rows)
      os << csv_field(sec.name) << ',' << csv_field(cell_text(row[0], 17, true)) << ','
         << csv_field(cell_text(row[1], 17, true)) << '\n';
  return os.str();
}

std::string render_json(const Report& rep, const RunConfig& cfg) {
  json j{{"command", rep.command}, {"config", config_to_json(cfg)}};
  for (const auto& sec : rep.sections) {
    if (sec.kv) {
      json obj = json::object();
      for (const auto& row : sec.rows) obj[std::get<std::string>(row[0])] = cell_json(row[1]);
      j[sec.name] = obj;
    } else {
      json arr = json::array();
      for (const auto& row : sec.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[sec.columns[i]] = cell_json(row[i]);
        arr.push_back(obj);
      }
      j[sec.name] = arr;
    }
  }
  return j.dump(2) + "\n";
}

void emit(const Report& rep, const RunConfig& cfg, std::ostream& out) {
  std::string text;
  if (cfg.format == "json") {
    text = render_json(rep, cfg);
  } else if (cfg.format == "csv") {
    text = render_csv(rep);
  } else {
    text = render_table(rep, cfg.precision);
  }
  if (!cfg.out) {
    out << text;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(*cfg.out);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write '" + tmp.string() + "'");
    f << text;
    if (!f.flush()) throw UsageError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

// ---- commands -------------------------------------------------------------

bool sp_available(const ModelParams& p) {
  try {
    validate_single_premium(p);
    return true;
  } catch (const InvalidParameters&) {
    return false;
  }
}

Report cmd_price(const RunConfig& c) {
  const ModelParams& p = c.params;
  Section s = kv_section("price");
  const double D = c.state.D;
  s.add("D", D);
  if (sp_available(p)) {
    s.add("single_premium_H", single_premium_rate(p));
    s.add("safe_level_sp", single_premium::safe_level_sp(p, D));
    s.add("surrender_threshold", single_premium::surrender_threshold(p, D));
  } else {
    s.add("single_premium_H", Cell());
    s.add("safe_level_sp", Cell());
    s.add("surrender_threshold", Cell());
  }
  s.add("continuous_premium_h", continuous_premium_rate(p));
  s.add("safe_level_term", term_life::solve_term(p).safe_level);
  s.add("safe_level_whole", p.r > 0.0 ? Cell(whole_life::safe_level_whole(p, D)) : Cell());
  return {"price", {s}};
}

Report cmd_value(const RunConfig& c) {
  const Product pr = c.need_product("value");
  const ModelParams& p = c.params;
  const WealthState st = c.state;
  validate_state(st);
  Section s = kv_section("value");
  s.add("product", to_string(pr));
  s.add("w", st.w);
  if (pr != Product::Term) s.add("D", st.D);
  s.add("phi", oracle::closed_form_phi(p, pr, st));
  s.add("expected_bequest", guarded([&] { return oracle::closed_form_bequest(p, pr, st); }));
  switch (pr) {
    case Product::SinglePremium:
      s.add("safe_level", single_premium::safe_level_sp(p, st.D));
      s.add("action", single_premium::describe(single_premium::optimal_action_no_cash(p, st)));
      break;
    case Product::SinglePremiumCash:
      s.add("safe_level", single_premium::safe_level_sp(p, st.D));
      s.add("surrender_threshold", single_premium::surrender_threshold(p, st.D));
      s.add("action", single_premium::describe(single_premium::optimal_action_cash(p, st)));
      break;
    case Product::Term: {
      const auto sol = term_life::solve_term(p);
      s.add("safe_level", sol.safe_level);
      s.add("w_star", opt(sol.w_star));
      s.add("regime", term_life::to_string(sol.regime));
      s.add("coverage", term_life::optimal_coverage_term(p, st.w));
      break;
    }
    case Product::Whole: {
      s.add("safe_level", whole_life::safe_level_whole(p, st.D));
      std::string region = "above_safe_level";
      try {
        region = whole_life::to_string(whole_life::classify_region(p, st));
      } catch (const DomainError&) {
      }
      s.add("region", region);
      s.add("action", whole_life::describe(whole_life::optimal_action_whole(p, st)));
      break;
    }
  }
  return {"value", {s}};
}

Report cmd_strategy(const RunConfig& c) {
  const Product pr = c.need_product("strategy");
  const ModelParams& p = c.params;
  const WealthState st = c.state;
  validate_state(st);
  Section s = kv_section("strategy");
  s.add("product", to_string(pr));
  s.add("w", st.w);
  if (pr != Product::Term) s.add("D", st.D);
  switch (pr) {
    case Product::SinglePremium:
    case Product::SinglePremiumCash: {
      const bool cash = pr == Product::SinglePremiumCash;
      s.add("action", single_premium::describe(cash ? single_premium::optimal_action_cash(p, st)
                                                    : single_premium::optimal_action_no_cash(p, st)));
      s.add("safe_level", single_premium::safe_level_sp(p, st.D));
      if (cash) s.add("surrender_threshold", single_premium::surrender_threshold(p, st.D));
      s.add("time_to_safe_level", single_premium::hitting_time_safe_sp(p, st));
      s.add("rule", std::string(cash ? "surrender all below the threshold; otherwise wait and buy b - D at the safe level"
                                     : "wait; buy b - D when wealth reaches the safe level"));
      break;
    }
    case Product::Term: {
      const auto sol = term_life::solve_term(p);
      const double cover = term_life::optimal_coverage_term(p, st.w);
      const auto t = term_life::hitting_times_term(p, st.w);
      std::string action = st.w >= sol.safe_level ? "secure_goal" : (cover > 0.0 ? "full_cover" : "wait");
      s.add("action", action);
      s.add("coverage", cover);
      s.add("w_star", opt(sol.w_star));
      s.add("safe_level", sol.safe_level);
      s.add("regime", term_life::to_string(sol.regime));
      s.add("time_to_ruin_full_cover", t.to_ruin);
      s.add("time_to_safe_level_no_cover", t.to_safe_level);
      break;
    }
    case Product::Whole: {
      s.add("action", whole_life::describe(whole_life::optimal_action_whole(p, st)));
      std::string region = "above_safe_level";
      try {
        region = whole_life::to_string(whole_life::classify_region(p, st));
      } catch (const DomainError&) {
      }
      s.add("region", region);
      s.add("safe_level", whole_life::safe_level_whole(p, st.D));
      s.add("jump_boundary", guarded([&] { return whole_life::jump_boundary(p, st.w); }));
      s.add("buy_trigger_D0", guarded([&] { return whole_life::buy_trigger_D0(p, st.w); }));
      break;
    }
  }
  return {"strategy", {s}};
}

Report cmd_boundary(const RunConfig& c) {
  const Product pr = c.need_product("boundary");
  const ModelParams& p = c.params;
  if (pr == Product::SinglePremium || pr == Product::SinglePremiumCash)
    throw UsageError("boundary applies to --product term or whole");
  const auto sol = term_life::solve_term(p);
  Section summary = kv_section("summary");
  summary.add("w_star", opt(sol.w_star));
  summary.add("safe_level", sol.safe_level);
  summary.add("regime", term_life::to_string(sol.regime));
  if (pr == Product::Term) return {"boundary", {summary}};

  whole_life::safe_level_whole(p, 0.0);
  const std::size_t n = c.grid.value_or(100);
  const double top = sol.safe_level;
  summary.add("jump_boundary_at_safe_level", whole_life::jump_boundary(p, top));
  Section curve{"boundary", false, {"w", "D_j", "D0"}, {}};
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::min(top, top * static_cast<double>(k) / static_cast<double>(n - 1));
    curve.rows.push_back({w, whole_life::jump_boundary(p, w), whole_life::buy_trigger_D0(p, w)});
  }
  std::map<std::string, std::int64_t> census;
  for (auto region : {whole_life::Region::R0, whole_life::Region::Ra, whole_life::Region::RbWait,
                      whole_life::Region::RbJump, whole_life::Region::Safe})
    census[whole_life::to_string(region)] = 0;
  const double d_max = 1.5 * p.b;
  for (std::size_t j = 0; j < n; ++j) {
    const double D = d_max * static_cast<double>(j) / static_cast<double>(n - 1);
    const double safe = whole_life::safe_level_whole(p, D);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::min(safe, safe * static_cast<double>(i) / static_cast<double>(n - 1));
      ++census[whole_life::to_string(whole_life::classify_region(p, {w, D}))];
    }
  }
  Section counts = kv_section("region_census");
  for (const auto& [name, count] : census) counts.add(name, count);
  return {"boundary", {summary, curve, counts}};
}

Report cmd_sweep(const RunConfig& c) {
  if (!c.axis) throw UsageError("sweep requires --axis (lambda, r, h or b)");
  if (c.values.empty()) throw UsageError("sweep requires --values");
  const auto axis = term_life::sweep_axis_from_string(*c.axis);
  const auto rows = term_life::w_star_sensitivities(c.params, axis, c.values);
  Section table{"sweep", false, {*c.axis, "regime", "w_star", "safe_level"}, {}};
  for (const auto& r : rows) table.rows.push_back({r.value, term_life::to_string(r.regime), opt(r.w_star), r.safe_level});
  Section summary = kv_section("summary");
  const auto holds = term_life::comparative_statics_hold(axis, rows);
  summary.add("comparative_statics_hold", holds ? Cell(*holds) : Cell());
  return {"sweep", {table, summary}};
}

Report cmd_simulate(const RunConfig& c) {
  const Product pr = c.need_product("simulate");
  const ModelParams& p = c.params;
  const bool optimal = c.strategy == "optimal";
  const oracle::StrategySpec strat = optimal ? oracle::optimal_strategy(pr) : oracle::strategy_from_string(c.strategy);
  const auto rep = oracle::simulate(p, pr, strat, c.state, c.n_paths, c.seed, c.threads);
  Section s = kv_section("simulate");
  s.add("product", to_string(pr));
  s.add("strategy", rep.strategy);
  s.add("n_paths", static_cast<std::int64_t>(rep.n_paths));
  s.add("seed", static_cast<std::int64_t>(rep.seed));
  s.add("success_prob", rep.success_prob);
  s.add("success_se", rep.success_se);
  s.add("mean_bequest", rep.mean_bequest);
  s.add("bequest_se", rep.bequest_se);
  s.add("ruin_frac", rep.ruin_frac);
  const double phi = oracle::closed_form_phi(p, pr, c.state);
  s.add("phi_closed_form", phi);
  const bool is_optimal = strat.index() == oracle::optimal_strategy(pr).index();
  if (is_optimal) {
    const Cell e = guarded([&] { return oracle::closed_form_bequest(p, pr, c.state); });
    s.add("expected_bequest_closed_form", e);
    const auto z = [](double est, double ref, double se) {
      if (se > 0.0) return (est - ref) / se;
      return est == ref ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), est - ref);
    };
    const double z_phi = z(rep.success_prob, phi, rep.success_se);
    s.add("z_phi", z_phi);
    bool pass = std::abs(z_phi) <= 3.0;
    if (const double* ev = std::get_if<double>(&e)) {
      const double z_e = z(rep.mean_bequest, *ev, rep.bequest_se);
      s.add("z_bequest", z_e);
      pass = pass && std::abs(z_e) <= 3.0;
    }
    s.add("pass_3se", pass);
  } else {
    s.add("dominated_3se", rep.success_prob <= phi + 3.0 * rep.success_se);
  }
  return {"simulate", {s}};
}

Report cmd_verify(const RunConfig& c) {
  oracle::VerifyOptions o;
  if (c.grid) {
    o.grid.n_w = o.grid.n_d = *c.grid;
    o.grid.n_1d = 2 * *c.grid;
  }
  o.n_paths = c.n_paths;
  o.seed = c.seed;
  const auto suite = oracle::run_verification(c.params, o);
  Section table{"checks", false, {"check", "status", "metric", "threshold", "detail"}, {}};
  for (const auto& ch : suite.checks)
    table.rows.push_back({ch.name, std::string(ch.skipped ? "skipped" : (ch.passed ? "pass" : "FAIL")), ch.metric,
                          ch.threshold, ch.detail});
  Section summary = kv_section("summary");
  summary.add("all_passed", suite.all_passed());
  Report r{"verify", {table, summary}};
  r.exit_code = suite.all_passed() ? kOk : kCheckFailed;
  return r;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--product", f.product, "sp | sp-cash | term | whole");
  sub->add_option("--b", f.b, "bequest goal");
  sub->add_option("--r", f.r, "force of interest");
  sub->add_option("--lambda", f.lambda, "force of mortality");
  sub->add_option("--theta", f.theta, "single-premium loading");
  sub->add_option("--theta-bar", f.theta_bar, "continuous-premium loading (defaults to theta)");
  sub->add_option("--rho", f.rho, "surrender charge, sp-cash only (default 1: no cash value)");
  sub->add_option("--w", f.w, "wealth");
  sub->add_option("--d", f.d, "death benefit already held");
  sub->add_option("--format", f.format, "table | json | csv");
  sub->add_option("--out", f.out, "write output to this file (atomically)");
  sub->add_option("--config", f.config, std::string("JSON config; default from $") + kConfigEnv);
  sub->add_option("--precision", f.precision, "significant digits in tables (default 6)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal life insurance purchasing for a bequest goal", "bequest"};
  app.require_subcommand(1);
  Flags f;
  auto* price = app.add_subcommand("price", "premium rates and safe levels");
  auto* value = app.add_subcommand("value", "goal probability, expected bequest and optimal action at a state");
  auto* strategy = app.add_subcommand("strategy", "optimal strategy at a state");
  auto* boundary = app.add_subcommand("boundary", "free boundaries: w* and the whole-life jump boundary");
  auto* sweep = app.add_subcommand("sweep", "w* across a parameter sweep");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check against the closed forms");
  auto* verify = app.add_subcommand("verify", "variational-inequality, BVP and property checks");
  for (auto* sub : {price, value, strategy, boundary, sweep, simulate, verify}) add_common(sub, f);
  for (auto* sub : {boundary, verify}) sub->add_option("--grid", f.grid, "grid points per axis");
  sweep->add_option("--axis", f.axis, "lambda | r | h | b");
  sweep->add_option("--values", f.values, "comma-separated values");
  for (auto* sub : {simulate, verify}) {
    sub->add_option("--n-paths", f.n_paths, "number of simulated lives");
    sub->add_option("--seed", f.seed, "master seed");
  }
  simulate->add_option("--strategy", f.strategy,
                       "optimal | never-buy | buy-now-full | threshold-buy:W | surrender-below:W | optimal-sp");
  simulate->add_option("--threads", f.threads, "worker threads (0 = all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    const RunConfig cfg = build_config(f);
    Report rep;
    if (*price) rep = cmd_price(cfg);
    else if (*value) rep = cmd_value(cfg);
    else if (*strategy) rep = cmd_strategy(cfg);
    else if (*boundary) rep = cmd_boundary(cfg);
    else if (*sweep) rep = cmd_sweep(cfg);
    else if (*simulate) rep = cmd_simulate(cfg);
    else rep = cmd_verify(cfg);
    emit(rep, cfg, out);
    return rep.exit_code;
  } catch (const InvalidParameters& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace bequest::cli
