#include "ctb/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ctb {

double instant_weak_regret(const Instance& inst, RegretMode mode, int first,
                           int second) {
  const bool best_pulled = first == 0 || second == 0;
  if (mode == RegretMode::kBinaryWeak) return best_pulled ? 0.0 : 1.0;
  if (best_pulled) return 0.0;
  const double best_pulled_utility =
      std::max(inst.utilities[first], inst.utilities[second]);
  return inst.utilities[0] - best_pulled_utility;
}

RegretSeries run_replication(Policy& policy, const Instance& inst, int horizon,
                             RegretMode mode, Rng& rng) {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  RegretSeries series;
  series.mode = mode;
  series.steps.reserve(horizon);
  double cum = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    std::pair<int, int> duel;
    try {
      duel = policy.select(rng);
    } catch (const DegenerateCandidatesError& e) {
      duel = {e.best, e.runner_up};
    } catch (const std::exception& e) {
      throw std::runtime_error("policy '" + policy.name() + "' failed at t=" +
                               std::to_string(t) + ": " + e.what());
    }
    const int outcome = inst.oracle.sample_winner(duel.first, duel.second, rng);
    policy.observe(duel.first, duel.second, outcome);
    const double r = instant_weak_regret(inst, mode, duel.first, duel.second);
    cum += r;
    series.steps.push_back(
        StepRecord{t, duel.first, duel.second, outcome, r, cum});
  }
  return series;
}

std::vector<AggregateRow> aggregate(std::span<const RegretSeries> series,
                                    std::span<const int> checkpoints) {
  if (series.empty()) throw AggregationError("no series to aggregate");
  const std::size_t horizon = series.front().steps.size();
  for (const auto& s : series) {
    if (s.steps.size() != horizon) {
      throw AggregationError("series have mixed horizons");
    }
  }
  std::vector<AggregateRow> rows;
  for (int t : checkpoints) {
    if (t < 1 || static_cast<std::size_t>(t) > horizon) {
      throw AggregationError("checkpoint outside the horizon");
    }
    double mean = 0.0;
    for (const auto& s : series) mean += s.steps[t - 1].cum_regret;
    mean /= static_cast<double>(series.size());
    double var = 0.0;
    for (const auto& s : series) {
      const double d = s.steps[t - 1].cum_regret - mean;
      var += d * d;
    }
    double se = 0.0;
    if (series.size() > 1) {
      var /= static_cast<double>(series.size() - 1);
      se = std::sqrt(var / static_cast<double>(series.size()));
    }
    rows.push_back(AggregateRow{t, mean, se});
  }
  return rows;
}

double weak_regret_bound(const BoundInputs& inputs) {
  if (!(inputs.p > 0.5 && inputs.p <= 1.0)) {
    throw ConfigError("bound requires p in (0.5, 1]");
  }
  if (inputs.delta > 0.0) throw ConfigError("bound requires delta <= 0");
  if (!(inputs.lambda > 0.0)) throw ConfigError("bound requires lambda > 0");
  if (inputs.n_arms < 2) throw ConfigError("bound requires at least 2 arms");
  const double pair_count = 0.5 * static_cast<double>(inputs.n_arms - 1) *
                            static_cast<double>(inputs.n_arms - 2);
  const double drift = 2.0 * inputs.p - 1.0;
  const double walk_term =
      (inputs.p - inputs.delta * drift) / (drift * drift);
  return pair_count * static_cast<double>(inputs.m_prime) * walk_term *
         inputs.lambda;
}

BoundInputs bound_inputs_for(const Instance& inst, const CellTable& table,
                             const ScoreTable& scores) {
  BoundInputs inputs;
  inputs.n_arms = inst.arms.n_arms;
  inputs.p = inst.oracle.min_win_prob();
  inputs.lambda = inst.utility_span();

  const CellVector top = classify(inst.util.theta, inst.arms, inst.util);
  const auto top_idx = table.find(top);
  if (!top_idx || scores.init[*top_idx] == kNegInf) {
    throw ConfigError("the environment's own cell is not a candidate");
  }
  inputs.m_prime = 0;
  double delta = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (scores.init[i] == kNegInf) continue;
    ++inputs.m_prime;
    delta = std::min(delta, scores.init[*top_idx] - scores.init[i]);
  }
  inputs.delta = delta;
  return inputs;
}

WalkOccupancy walk_occupancy_check(double p, int s, int walks,
                                   std::int64_t horizon, Rng& rng) {
  if (!(p > 0.5 && p <= 1.0)) {
    throw ConfigError("walk occupancy requires p in (0.5, 1]");
  }
  if (s < 0) throw ConfigError("walk occupancy requires s >= 0");
  if (walks < 1 || horizon < 1) {
    throw ConfigError("walk occupancy needs walks >= 1 and horizon >= 1");
  }

  // Once the walk sits this far above s, the chance of ever returning is
  // ((1-p)/p)^gap < 4e-12 for p >= 0.6, below any observable effect; the
  // remaining steps are skipped.
  const std::int64_t escape_gap = 66;

  double sum = 0.0;
  double sum_sq = 0.0;
  for (int w = 0; w < walks; ++w) {
    std::int64_t z = 0;
    std::int64_t occupied = 1;  // Z(0) = 0 <= s
    for (std::int64_t t = 1; t <= horizon; ++t) {
      z += rng.uniform01() < p ? 1 : -1;
      if (z <= s) ++occupied;
      if (z - s > escape_gap) break;
    }
    sum += static_cast<double>(occupied);
    sum_sq += static_cast<double>(occupied) * static_cast<double>(occupied);
  }

  WalkOccupancy result;
  result.estimate = sum / walks;
  const double drift = 2.0 * p - 1.0;
  result.closed_form = (p + s * drift) / (drift * drift);
  if (walks > 1) {
    const double var =
        (sum_sq - sum * sum / walks) / static_cast<double>(walks - 1);
    result.std_error = std::sqrt(std::max(var, 0.0) / walks);
  }
  result.z_score = result.std_error > 0.0
                       ? (result.estimate - result.closed_form) / result.std_error
                       : 0.0;
  return result;
}

}  // namespace ctb
