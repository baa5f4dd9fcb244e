#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ctb/errors.hpp"
#include "ctb/rng.hpp"

namespace ctb {

// Relative upper-confidence-bound baseline over pairwise win counts.
struct RucbState {
  int n_arms = 0;
  double alpha = 0.51;
  std::vector<std::int64_t> wins;     // n x n; wins[i*n+j] = wins of i over j
  std::optional<int> hypothesized_best;

  RucbState(int n, double a) : n_arms(n), alpha(a) {
    if (n < 2) throw ConfigError("baseline needs at least 2 arms");
    if (!(alpha > 0.5)) throw ConfigError("rucb requires alpha > 0.5");
    wins.assign(static_cast<std::size_t>(n) * n, 0);
  }

  std::int64_t win_count(int i, int j) const {
    return wins[static_cast<std::size_t>(i) * n_arms + j];
  }
};

// Optimistic estimate of p_{i,j} at time t; 1 when the pair has no data.
double rucb_upper_bound(const RucbState& state, int i, int j, std::int64_t t);

// Arms whose optimistic estimate is at least 1/2 against every opponent.
std::vector<int> rucb_candidates(const RucbState& state, std::int64_t t);

// First: drawn from the candidate set (uniform, with preference for the
// hypothesized best arm). Second: the arm with the largest optimistic
// estimate against the first, ties uniform.
std::pair<int, int> rucb_step(RucbState& state, std::int64_t t, Rng& rng);

void rucb_observe(RucbState& state, int first, int second, int outcome);

// Winner-stays baseline tracking cumulative wins minus losses per arm.
struct WsState {
  int n_arms = 0;
  std::vector<std::int64_t> scores;
  std::optional<int> incumbent;

  explicit WsState(int n) : n_arms(n), scores(n, 0) {
    if (n < 2) throw ConfigError("baseline needs at least 2 arms");
  }
};

// First: the previous winner if any, else a uniform arm. Second: uniform
// among the remaining arms attaining the maximal score.
std::pair<int, int> ws_step(const WsState& state, Rng& rng);

void ws_observe(WsState& state, int first, int second, int outcome);

}  // namespace ctb
