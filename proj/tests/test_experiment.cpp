#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyperwalk/experiment.hpp"

using namespace hyperwalk;

namespace {

ExperimentConfig flags_config(std::map<std::string, std::string> flags) { return build_config(std::nullopt, flags); }

int run_flags(const std::map<std::string, std::string>& flags, const std::string& out, std::string* log_text = nullptr,
              unsigned workers = 1) {
  std::ostringstream log, err;
  const int code = run_and_report(std::nullopt, flags, workers, out, log, err);
  if (log_text) *log_text = log.str();
  return code;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("hyperwalk_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing and schema diagnostics") {
  CHECK_THROWS_AS(parse_config_text(""), ConfigError);
  CHECK_THROWS_AS(parse_config_text("  \n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[1]"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{}"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"kind":"chain"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"schema_version":2,"kind":"chain"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"schema_version":1,"kind":"chain","eps":"x"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"schema_version":1,"kind":"chain","trials":5})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"schema_version":1,"kind":"nope"})"), ConfigError);
  CHECK_NOTHROW(parse_config_text(R"({"schema_version":1,"kind":"chain","eps":0.5,"q":0.2})"));
  try {
    parse_config_text(R"({"schema_version":1,"kind":"walk","eps":0.5,"foo":1})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("unknown key 'foo'") != std::string::npos);
    CHECK(msg.find("'eps' does not apply") != std::string::npos);
  }
}

TEST_CASE("flags override the document and are typed by the schema") {
  const auto doc = parse_config_text(R"({"schema_version":1,"kind":"walk","trials":5,"l":0.5})");
  const auto cfg = build_config(doc, {{"trials", "7"}, {"n_list", "20:36:8"}, {"strict", "true"}});
  CHECK(cfg.integer("trials", 0) == 7);
  CHECK(cfg.number("l", 0) == 0.5);
  CHECK(cfg.integers("n_list", {}) == std::vector<int>{20, 28, 36});
  CHECK(cfg.boolean("strict", false));
  CHECK(flags_config({{"kind", "walk"}, {"n_list", "1,2,5"}}).integers("n_list", {}) == std::vector<int>{1, 2, 5});
  CHECK_THROWS_AS(flags_config({{"kind", "walk"}, {"trials", "0"}}), ConfigError);
  CHECK_THROWS_AS(flags_config({{"kind", "walk"}, {"trials", "12x"}}), ConfigError);
  CHECK_THROWS_AS(flags_config({{"kind", "walk"}, {"strict", "maybe"}}), ConfigError);
  CHECK_THROWS_AS(flags_config({{"kind", "walk"}, {"n_list", "5:1:1"}}), ConfigError);
  CHECK_THROWS_AS(flags_config({{"kind", "walk"}, {"nonsense", "1"}}), ConfigError);
  CHECK_THROWS_AS(flags_config({}), ConfigError);
}

TEST_CASE("exit statuses") {
  CHECK(run_flags({{"kind", "pipeline"}, {"trials", "0"}}, "") == 2);
  CHECK(run_flags({{"kind", "chain"}, {"q", "0.3"}, {"strict", "true"}}, "") == 4);
  CHECK(run_flags({{"kind", "chain"}, {"q", "0.3"}}, "") == 0);
  CHECK(run_flags({{"kind", "chain"}, {"q", "0.6"}}, "") == 2);
  CHECK(run_flags({{"kind", "chain"}, {"eps", "0"}}, "") == 2);
  CHECK(run_flags({{"kind", "walk"}, {"estimator", "bogus"}}, "") == 2);
  CHECK(run_flags({{"kind", "walk"}, {"steps", "a,A"}, {"weights", "0.5"}}, "") == 2);
  CHECK(run_flags({{"kind", "walk"}, {"steps", "a,A"}, {"weights", "0.5,0.6"}}, "") == 2);
  CHECK(run_flags({{"kind", "casson"}, {"crossover", "K=1,c=0.9"}}, "") == 2);
  CHECK(run_flags({{"kind", "casson"}, {"crossover", "K=1,c=1.5,c0=0.1"}}, "") == 2);
  // escape needs phi(g x0) = 0
  CHECK(run_flags({{"kind", "walk"}, {"estimator", "escape"}, {"start", "b^5"}, {"trials", "10"}}, "") == 2);
}

TEST_CASE("chain run") {
  const auto out = scratch("chain");
  std::string log;
  REQUIRE(run_flags({{"kind", "chain"}, {"eps", "0.5"}, {"q", "0.2"}, {"n", "400"}}, out.string(), &log) == 0);
  CHECK(log.find("certificate at t=0.8 ") != std::string::npos);
  CHECK(log.find("pass") != std::string::npos);
  const auto csv = slurp(out / "distribution.csv");
  CHECK(csv.rfind("state,probability\n", 0) == 0);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["config"]["kind"] == "chain");
  CHECK(manifest["version"] == kToolVersion);
  CHECK(manifest["results"]["t"].get<double>() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(manifest["results"]["certificate"]["verdict"] == "pass");
  CHECK(std::filesystem::exists(out / "summary.txt"));
}

TEST_CASE("casson crossover prints the least n") {
  std::string log;
  CHECK(run_flags({{"kind", "casson"}, {"crossover", "K=1,c=0.9,c0=0.1"}}, "", &log) == 0);
  CHECK(log == "40\n");
  const auto art = run_experiment(flags_config({{"kind", "casson"}}));
  CHECK(art.files.at("surgery.csv").find("\n-1,-1\n") != std::string::npos);
  CHECK(art.results["c_lower"].get<double>() == doctest::Approx(0.0282 * 20).epsilon(0.01));
}

TEST_CASE("walk artifacts do not depend on the worker count") {
  const std::map<std::string, std::string> flags{
      {"kind", "walk"}, {"estimator", "distance"}, {"trials", "3000"}, {"seed", "9"},
      {"kernel_steps", "8"}, {"kernel_n", "3"}, {"n_list", "6:24:6"}};
  const auto a = scratch("w1");
  const auto b = scratch("w3");
  const auto c = scratch("w1b");
  REQUIRE(run_flags(flags, a.string(), nullptr, 1) == 0);
  REQUIRE(run_flags(flags, b.string(), nullptr, 3) == 0);
  REQUIRE(run_flags(flags, c.string(), nullptr, 1) == 0);
  for (const char* f : {"manifest.json", "summary.txt", "distance_from_D.csv", "kernels.csv"}) {
    CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
    CHECK_MESSAGE(slurp(a / f) == slurp(c / f), f);
  }
  auto other = flags;
  other["seed"] = "10";
  const auto d = scratch("w_seed");
  REQUIRE(run_flags(other, d.string()) == 0);
  CHECK(slurp(a / "distance_from_D.csv") != slurp(d / "distance_from_D.csv"));
}

TEST_CASE("geometry and shadow kinds") {
  auto art = run_experiment(flags_config({{"kind", "geom"}, {"radius", "4"}}));
  CHECK(art.status == 0);
  CHECK(art.results["check"]["verdict"] == "pass");
  art = run_experiment(flags_config({{"kind", "geom"}, {"radius", "4"}, {"set", "ab"}}));
  CHECK(art.status == 4);
  art = run_experiment(flags_config({{"kind", "geom"}, {"space", "plane"}, {"check", "two"}, {"count", "200"}}));
  CHECK(art.status == 0);
  CHECK(art.results["check"]["hypothesis_met"].get<int>() > 0);
  art = run_experiment(flags_config({{"kind", "shadow"}, {"trials", "20000"}}));
  CHECK(art.files.count("shadow_rate.csv") == 1);
  CHECK(art.results["shadow_rate"]["c"].get<double>() < 0.4);
}

TEST_CASE("pipeline guards") {
  const std::map<std::string, std::string> base{
      {"kind", "pipeline"}, {"r_max", "2"}, {"n_max", "6"}, {"trials", "2000"}, {"kernel_steps", "16"}};
  auto forced = base;
  forced["q_override"] = "0.3";
  const auto out = scratch("pipe_forced");
  std::string log;
  CHECK(run_flags(forced, out.string(), &log) == 4);
  CHECK(log.find("no certificate") != std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["status"] == 4);
  CHECK(std::filesystem::exists(out / "calibration.csv"));

  auto tiny = base;
  tiny["r_max"] = "1";
  tiny["n_max"] = "2";
  tiny["calibration_trials"] = "2000";
  CHECK(run_flags(tiny, "") == 3);

  const auto res = run_pipeline(build_config(std::nullopt, base));
  CHECK(res.artifacts.status == 0);
  CHECK(res.calibration.found);
  CHECK(res.n_star >= res.first_crossover);
  CHECK(res.c0 == doctest::Approx(0.564).epsilon(0.01));
}

TEST_CASE("report reads an output directory") {
  const auto out = scratch("report");
  REQUIRE(run_flags({{"kind", "chain"}, {"n", "10"}}, out.string()) == 0);
  std::ostringstream log, err;
  CHECK(report_run(out, log, err) == 0);
  CHECK(log.str().find("kind chain") != std::string::npos);
  std::filesystem::remove(out / "distribution.csv");
  CHECK(report_run(out, log, err) == 2);
  CHECK(report_run(scratch("missing"), log, err) == 2);
}
