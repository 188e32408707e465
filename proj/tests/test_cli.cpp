#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using bequest::cli::run_cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("bequest_cli_test_" + name);
}

}  // namespace

TEST_CASE("help exits 0") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"value", "--help"}).code == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"value"}).code == 2);
  CHECK(run({"value", "--product", "annuity"}).code == 2);
  CHECK(run({"value", "--product", "term", "--w", "abc"}).code == 2);
  CHECK(run({"value", "--product", "term", "--format", "xml"}).code == 2);
  CHECK(run({"value", "--product", "term", "--lambda", "-1"}).code == 2);
  CHECK(run({"boundary", "--product", "sp"}).code == 2);
  CHECK(run({"simulate", "--product", "term", "--strategy", "optimal-whole", "--n-paths", "10"}).code == 2);
  CHECK(run({"sweep", "--axis", "lambda"}).code == 2);
}

TEST_CASE("presence rule for rho and theta-bar") {
  CHECK(run({"value", "--product", "sp", "--rho", "0.3", "--w", "0.4", "--d", "0.3"}).code == 2);
  CHECK(run({"value", "--product", "sp-cash", "--rho", "0.3", "--w", "0.4", "--d", "0.3"}).code == 0);
  CHECK(run({"value", "--product", "sp", "--theta-bar", "0.3"}).code == 2);
  CHECK(run({"value", "--product", "whole", "--theta-bar", "0.3"}).code == 0);
}

TEST_CASE("domain errors exit 1") {
  CHECK(run({"boundary", "--product", "whole", "--r", "0"}).code == 1);
}

TEST_CASE("value json") {
  const auto r = run({"value", "--product", "term", "--w", "0.4", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "value");
  CHECK(j["config"]["product"] == "term");
  CHECK(j["value"]["phi"].get<double>() == doctest::Approx(0.363438).epsilon(1e-6));
  CHECK(j["value"]["coverage"].get<double>() == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("table precision") {
  const auto r = run({"value", "--product", "term", "--w", "0.4", "--precision", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("0.363") != std::string::npos);
  CHECK(r.out.find("0.3634") == std::string::npos);
}

TEST_CASE("csv is full precision with a header") {
  const auto r = run({"boundary", "--product", "whole", "--grid", "11", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("w,D_j,D0\n", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  std::istringstream in(r.out);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 11);
  CHECK(r.out.find("0.7692307692307693") != std::string::npos);
}

TEST_CASE("sweep") {
  const auto r = run({"sweep", "--axis", "lambda", "--values", "0.04,0.05,0.06,0.08", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["sweep"].size() == 4);
  CHECK(j["sweep"][3]["w_star"].get<double>() == doctest::Approx(0.694894).epsilon(1e-6));
  CHECK(j["summary"]["comparative_statics_hold"] == true);
}

TEST_CASE("simulate is reproducible") {
  const std::vector<std::string> args{"simulate", "--product", "whole", "--w", "0.3", "--d", "0.2",
                                      "--n-paths", "50000", "--seed", "9", "--format", "json"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(nlohmann::json::parse(a.out)["simulate"]["pass_3se"] == true);
}

TEST_CASE("config file and environment") {
  const auto cfg = temp_path("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"product": "term", "w": 0.4, "lambda": 0.08})";
  }
  auto r = run({"value", "--config", cfg.string(), "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["value"]["coverage"].get<double>() == doctest::Approx(0.6));
  // flags win over the file
  r = run({"value", "--config", cfg.string(), "--w", "0.72", "--format", "json"});
  CHECK(nlohmann::json::parse(r.out)["value"]["coverage"].get<double>() == 0.0);

  ::setenv(bequest::cli::kConfigEnv, cfg.string().c_str(), 1);
  r = run({"value", "--format", "json"});
  ::unsetenv(bequest::cli::kConfigEnv);
  CHECK(r.code == 0);

  {
    std::ofstream f(cfg);
    f << R"({"product": "term", "colour": "blue"})";
  }
  CHECK(run({"value", "--config", cfg.string()}).code == 2);
  CHECK(run({"value", "--config", temp_path("missing.json").string()}).code == 2);
  fs::remove(cfg);
}

TEST_CASE("out writes the file and leaves no temp behind") {
  const auto target = temp_path("out.csv");
  fs::remove(target);
  const auto r = run({"boundary", "--product", "whole", "--grid", "5", "--format", "csv", "--out", target.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  REQUIRE(fs::exists(target));
  CHECK_FALSE(fs::exists(fs::path(target.string() + ".tmp")));
  std::ifstream in(target);
  std::string header;
  std::getline(in, header);
  CHECK(header == "w,D_j,D0");
  fs::remove(target);
}

TEST_CASE("verify exit code") {
  const auto r = run({"verify", "--grid", "20", "--n-paths", "20000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
