#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctb/sim_harness.hpp"

namespace ctb {

struct AlgorithmSpec {
  std::string id;  // ctb-1 | ctb-2 | ctb-3 | thompson | rucb | ws-w
  std::optional<double> q;             // ctb-3, thompson (constant-q)
  std::optional<double> alpha;         // rucb; defaults to 0.51
  std::optional<std::string> likelihood;    // thompson: constant-q | model
  std::optional<std::string> prior_matrix;  // ctb-2: path to an n x n matrix

  bool operator==(const AlgorithmSpec&) const = default;
};

struct ExperimentConfig {
  std::string name;
  InstanceSpec instance;
  std::vector<AlgorithmSpec> algorithms;
  int horizon = 500;
  int replications = 200;
  std::uint64_t seed = 0;
  RegretMode regret_mode = RegretMode::kBinaryWeak;
  std::string output_dir;
  std::vector<int> checkpoints{100, 200, 300, 400, 500};
};

bool operator==(const InstanceSpec& a, const InstanceSpec& b);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// Strict parser: unknown keys, missing required keys, or invalid values are
// ConfigErrors naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

// Whitespace-separated n x n real matrix.
std::vector<std::vector<double>> load_prior_matrix(const std::string& path,
                                                   int n_arms);

struct AlgorithmResult {
  std::string id;
  std::vector<RegretSeries> series;      // one per replication
  std::vector<AggregateRow> aggregates;  // one per checkpoint
};

struct ExperimentResult {
  std::vector<AlgorithmResult> algorithms;
  std::string raw_path;
  std::string summary_path;
};

// Runs every (algorithm, replication) pair and writes raw.csv and
// summary.csv under output_dir. Replications are independent: replication r
// draws its own instance from stream (seed, r) and every algorithm runs on
// that same instance with its own derived stream. Parallelism degree comes
// from CTB_THREADS (default: hardware concurrency). If a replication fails,
// completed output is flushed before the error propagates.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Cell listing for the config's instance (replication-0 stream).
std::string enumerate_cells_listing(const ExperimentConfig& config);

}  // namespace ctb
