#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctb/arm_model.hpp"
#include "ctb/policy.hpp"
#include "ctb/rng.hpp"

namespace ctb {

enum class RegretMode { kBinaryWeak, kUtilityWeak };

struct StepRecord {
  int t = 0;  // 1-based timestep
  int first = 0;
  int second = 0;
  int outcome = 0;
  double instant_regret = 0.0;
  double cum_regret = 0.0;
};

struct RegretSeries {
  RegretMode mode = RegretMode::kBinaryWeak;
  std::vector<StepRecord> steps;
};

// Binary mode: 1 unless the best arm is among the pulled pair. Utility mode:
// utility gap between the best arm and the better pulled arm.
double instant_weak_regret(const Instance& inst, RegretMode mode, int first,
                           int second);

// Runs T duels: the policy selects, the oracle draws the outcome, the policy
// observes, regret is recorded. A degenerate-candidate signal from the
// policy is mapped to the fallback duel it carries; any other policy error
// is rethrown with timestep context.
RegretSeries run_replication(Policy& policy, const Instance& inst, int horizon,
                             RegretMode mode, Rng& rng);

struct AggregateRow {
  int t = 0;
  double mean_cum_regret = 0.0;
  double stderr_cum_regret = 0.0;
};

// Mean and standard error of cumulative regret at each checkpoint. All
// series must share one horizon.
std::vector<AggregateRow> aggregate(std::span<const RegretSeries> series,
                                    std::span<const int> checkpoints);

// Inputs of the constant regret bound.
struct BoundInputs {
  int n_arms = 0;
  std::int64_t m_prime = 0;   // candidate cells with finite initial score
  double p = 0.0;             // minimum winning probability, in (0.5, 1]
  double delta = 0.0;         // worst initial-score deficit of the top cell, <= 0
  double lambda = 0.0;        // utility span between best and worst arm, > 0
};

// (n-1)(n-2)/2 * m' * (p - delta(2p-1)) / (2p-1)^2 * lambda.
double weak_regret_bound(const BoundInputs& inputs);

// BoundInputs read off a concrete instance, candidate table, and initial
// scores; delta ranges over finite-score cells only.
BoundInputs bound_inputs_for(const Instance& inst, const CellTable& table,
                             const ScoreTable& scores);

struct WalkOccupancy {
  double estimate = 0.0;     // Monte-Carlo mean occupancy of {Z <= s}
  double closed_form = 0.0;  // (p + s(2p-1)) / (2p-1)^2
  double std_error = 0.0;
  double z_score = 0.0;
};

// Simulates `walks` +1/-1 random walks with up-probability p over `horizon`
// steps and averages the time spent at or below s (t = 0 included).
WalkOccupancy walk_occupancy_check(double p, int s, int walks,
                                   std::int64_t horizon, Rng& rng);

}  // namespace ctb
