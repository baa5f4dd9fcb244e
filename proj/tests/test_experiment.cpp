#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctb/experiment.hpp"

using namespace ctb;

namespace {

std::string tiny_config_json(const std::string& out_dir) {
  return R"({
    "name": "tiny",
    "instance": {"type": "custom", "n_arms": 3,
                 "oracle": {"kind": "constant-p", "p": 0.8}},
    "algorithms": [{"id": "ctb-1"}, {"id": "ws-w"}],
    "horizon": 20,
    "replications": 2,
    "seed": 11,
    "regret_mode": "binary-weak",
    "output_dir": ")" + out_dir + R"(",
    "checkpoints": [10, 20]
  })";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("config parse, serialize, parse is the identity") {
  const ExperimentConfig config = parse_config(tiny_config_json("out/x"));
  CHECK(config.name == "tiny");
  CHECK(config.instance.kind == InstanceSpec::Kind::kCustom);
  CHECK(config.instance.n_arms == 3);
  CHECK(config.horizon == 20);
  CHECK(config.checkpoints == std::vector<int>{10, 20});
  const ExperimentConfig reparsed = parse_config(serialize_config(config));
  CHECK(reparsed == config);

  // Built-in settings and optional algorithm params survive the trip too.
  const std::string full = R"({
    "name": "paper",
    "instance": {"type": "setting-2"},
    "algorithms": [
      {"id": "ctb-2"},
      {"id": "ctb-3", "q": 0.6},
      {"id": "thompson", "likelihood": "model"},
      {"id": "rucb", "alpha": 0.51},
      {"id": "ws-w"}
    ],
    "horizon": 500,
    "replications": 200,
    "seed": 9001,
    "regret_mode": "utility-weak",
    "output_dir": "out/paper"
  })";
  const ExperimentConfig parsed = parse_config(full);
  CHECK(parsed.checkpoints == std::vector<int>{100, 200, 300, 400, 500});
  CHECK(parse_config(serialize_config(parsed)) == parsed);
}

TEST_CASE("config validation is strict") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"nme": "x"})"),
                       "unknown key 'nme' in config", ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);

  auto patch = [](const std::string& from, const std::string& to) {
    std::string text = tiny_config_json("out/y");
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
  };
  // Unknown nested keys.
  CHECK_THROWS_AS(parse_config(patch("\"n_arms\": 3", "\"narms\": 3")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(patch("{\"id\": \"ws-w\"}",
                                     "{\"id\": \"ws-w\", \"w\": 1}")),
                  ConfigError);
  // Bad values.
  CHECK_THROWS_AS(parse_config(patch("\"horizon\": 20", "\"horizon\": 0")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(patch("\"replications\": 2",
                                     "\"replications\": 0")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(patch("[10, 20]", "[10, 21]")), ConfigError);
  CHECK_THROWS_AS(parse_config(patch("\"binary-weak\"", "\"weak\"")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(patch("{\"id\": \"ws-w\"}",
                                     "{\"id\": \"ctb-9\"}")),
                  ConfigError);
  // Duplicate ids.
  CHECK_THROWS_AS(parse_config(patch("{\"id\": \"ws-w\"}", "{\"id\": \"ctb-1\"}")),
                  ConfigError);
  // Missing required parameters.
  CHECK_THROWS_AS(parse_config(patch("{\"id\": \"ws-w\"}", "{\"id\": \"ctb-3\"}")),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(patch("{\"id\": \"ws-w\"}", "{\"id\": \"thompson\"}")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(patch("{\"id\": \"ws-w\"}",
                         "{\"id\": \"thompson\", \"likelihood\": \"constant-q\"}")),
      ConfigError);
  CHECK_THROWS_AS(parse_config(patch("{\"id\": \"ws-w\"}",
                                     "{\"id\": \"ws-w\", \"prior_matrix\": \"p\"}")),
                  ConfigError);
}

TEST_CASE("run writes schema-stable csv files") {
  const std::string dir = "test_out/tiny_run";
  std::filesystem::remove_all(dir);
  const ExperimentConfig config = parse_config(tiny_config_json(dir));
  const ExperimentResult result = run_experiment(config);

  const std::string raw = slurp(result.raw_path);
  CHECK(raw.rfind("algorithm,replication,t,first,second,outcome,"
                  "instant_regret,cum_regret\n",
                  0) == 0);
  std::size_t rows = 0;
  for (char c : raw) rows += c == '\n' ? 1 : 0;
  CHECK(rows == 1 + 2 * 2 * 20);  // header + algs * reps * horizon

  const std::string summary = slurp(result.summary_path);
  CHECK(summary.rfind("algorithm,t,mean_cum_regret,stderr\n", 0) == 0);
  std::size_t srows = 0;
  for (char c : summary) srows += c == '\n' ? 1 : 0;
  CHECK(srows == 1 + 2 * 2);  // header + algs * checkpoints

  // Reruns are byte-identical.
  const ExperimentResult again = run_experiment(config);
  CHECK(slurp(again.raw_path) == raw);
  CHECK(slurp(again.summary_path) == summary);
}

TEST_CASE("single-replication summaries equal the raw series") {
  const std::string dir = "test_out/single_rep";
  std::filesystem::remove_all(dir);
  std::string text = tiny_config_json(dir);
  const auto at = text.find("\"replications\": 2");
  text.replace(at, std::string("\"replications\": 2").size(),
               "\"replications\": 1");
  const ExperimentResult result = run_experiment(parse_config(text));
  for (const auto& alg : result.algorithms) {
    REQUIRE(alg.series.size() == 1);
    for (const auto& row : alg.aggregates) {
      CHECK(row.mean_cum_regret == alg.series[0].steps[row.t - 1].cum_regret);
      CHECK(row.stderr_cum_regret == 0.0);
    }
  }
}

TEST_CASE("prior matrices load strictly") {
  const std::string path = "test_out/prior.txt";
  std::filesystem::create_directories("test_out");
  {
    std::ofstream out(path);
    out << "0 1 2\n3 0 4\n5 6 0\n";
  }
  const auto matrix = load_prior_matrix(path, 3);
  CHECK(matrix[0][1] == 1.0);
  CHECK(matrix[2][1] == 6.0);
  CHECK_THROWS_AS(load_prior_matrix(path, 2), ConfigError);
  CHECK_THROWS_AS(load_prior_matrix("test_out/absent.txt", 3), ConfigError);
}

TEST_CASE("cell listings come out one row per cell") {
  for (int n : {2, 3}) {
    std::string text = tiny_config_json("out/z");
    const auto at = text.find("\"n_arms\": 3");
    REQUIRE(at != std::string::npos);
    text.replace(at, std::string("\"n_arms\": 3").size(),
                 "\"n_arms\": " + std::to_string(n));
    const std::string listing = enumerate_cells_listing(parse_config(text));
    std::size_t rows = 0;
    for (char c : listing) rows += c == '\n' ? 1 : 0;
    if (n == 2) CHECK(rows == 1 + 2);
    if (n == 3) CHECK(rows == 1 + 6);
  }
}
