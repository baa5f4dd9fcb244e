// Command-line front end: run experiments from a config file, inspect cell
// tables, evaluate the regret bound, and check the random-walk occupancy
// identity behind it.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ctb/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dueling-bandit simulation harness over utility cells"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir_override;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("-c,--config", config_path, "experiment config (JSON)")
      ->required();
  run->add_option("--output-dir", output_dir_override,
                  "override the config's output_dir");

  std::string enum_config_path;
  std::string enum_out;
  auto* enumerate =
      app.add_subcommand("enumerate-cells", "list the instance's cells");
  enumerate->add_option("-c,--config", enum_config_path, "experiment config")
      ->required();
  enumerate->add_option("-o,--out", enum_out, "output file (default stdout)");

  int bound_n = 0;
  std::int64_t bound_m_prime = 0;
  double bound_p = 0.0, bound_delta = 0.0, bound_lambda = 0.0;
  auto* bound =
      app.add_subcommand("bound", "evaluate the constant regret bound");
  bound->add_option("--n", bound_n, "number of arms")->required();
  bound->add_option("--m-prime", bound_m_prime, "candidate cell count")
      ->required();
  bound->add_option("--p", bound_p, "minimum winning probability")->required();
  bound->add_option("--delta", bound_delta, "initial-score deficit (<= 0)")
      ->required();
  bound->add_option("--lambda", bound_lambda, "utility span (> 0)")->required();

  double walk_p = 0.0;
  int walk_s = 0;
  int walk_count = 100000;
  std::int64_t walk_horizon = 10000;
  std::uint64_t walk_seed = 0;
  auto* lemma = app.add_subcommand(
      "check-lemma1", "Monte-Carlo check of the walk occupancy identity");
  lemma->add_option("--p", walk_p, "up-step probability")->required();
  lemma->add_option("--s", walk_s, "occupancy threshold")->required();
  lemma->add_option("--walks", walk_count, "number of walks");
  lemma->add_option("--horizon", walk_horizon, "steps per walk");
  lemma->add_option("--seed", walk_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (*run) {
      ctb::ExperimentConfig config = ctb::load_config(config_path);
      if (!output_dir_override.empty()) config.output_dir = output_dir_override;
      const ctb::ExperimentResult result = ctb::run_experiment(config);
      std::cout << "wrote " << result.raw_path << " and " << result.summary_path
                << "\n";
      for (const auto& alg : result.algorithms) {
        std::cout << alg.id << " cum regret at t=" << alg.aggregates.back().t
                  << ": " << fmt(alg.aggregates.back().mean_cum_regret)
                  << " +- " << fmt(alg.aggregates.back().stderr_cum_regret)
                  << "\n";
      }
    } else if (*enumerate) {
      const ctb::ExperimentConfig config = ctb::load_config(enum_config_path);
      const std::string listing = ctb::enumerate_cells_listing(config);
      if (enum_out.empty()) {
        std::cout << listing;
      } else {
        std::ofstream out(enum_out, std::ios::binary);
        if (!out) throw ctb::ConfigError("cannot write '" + enum_out + "'");
        out << listing;
      }
    } else if (*bound) {
      const double value = ctb::weak_regret_bound(ctb::BoundInputs{
          bound_n, bound_m_prime, bound_p, bound_delta, bound_lambda});
      std::cout << fmt(value) << "\n";
    } else if (*lemma) {
      ctb::Rng rng(walk_seed);
      const ctb::WalkOccupancy occ =
          ctb::walk_occupancy_check(walk_p, walk_s, walk_count, walk_horizon, rng);
      std::cout << "estimate " << fmt(occ.estimate) << "\n";
      std::cout << "closed_form " << fmt(occ.closed_form) << "\n";
      std::cout << "std_error " << fmt(occ.std_error) << "\n";
      std::cout << "z " << fmt(occ.z_score) << "\n";
    }
  } catch (const ctb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}
