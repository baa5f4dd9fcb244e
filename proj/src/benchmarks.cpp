#include "ctb/benchmarks.hpp"

#include <algorithm>
#include <cmath>

namespace ctb {

double rucb_upper_bound(const RucbState& state, int i, int j, std::int64_t t) {
  const std::int64_t pulls = state.win_count(i, j) + state.win_count(j, i);
  if (pulls == 0) return 1.0;
  const double mean = static_cast<double>(state.win_count(i, j)) /
                      static_cast<double>(pulls);
  return mean + std::sqrt(state.alpha * std::log(static_cast<double>(t)) /
                          static_cast<double>(pulls));
}

std::vector<int> rucb_candidates(const RucbState& state, std::int64_t t) {
  std::vector<int> candidates;
  for (int i = 0; i < state.n_arms; ++i) {
    bool ok = true;
    for (int j = 0; j < state.n_arms && ok; ++j) {
      if (j != i && rucb_upper_bound(state, i, j, t) < 0.5) ok = false;
    }
    if (ok) candidates.push_back(i);
  }
  return candidates;
}

std::pair<int, int> rucb_step(RucbState& state, std::int64_t t, Rng& rng) {
  if (t < 1) throw ConfigError("rucb timestep starts at 1");
  std::vector<int> candidates = rucb_candidates(state, t);

  int first;
  if (candidates.empty()) {
    first = rng.uniform_int(0, state.n_arms - 1);
  } else if (candidates.size() == 1) {
    first = candidates.front();
    state.hypothesized_best = first;
  } else {
    const bool has_champion =
        state.hypothesized_best &&
        std::find(candidates.begin(), candidates.end(),
                  *state.hypothesized_best) != candidates.end();
    if (has_champion && rng.uniform01() < 0.5) {
      first = *state.hypothesized_best;
    } else {
      std::vector<int> pool;
      for (int c : candidates) {
        if (!has_champion || c != *state.hypothesized_best) pool.push_back(c);
      }
      first = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
    }
  }

  double best = -1.0;
  std::vector<int> argmax;
  for (int j = 0; j < state.n_arms; ++j) {
    if (j == first) continue;
    const double u = rucb_upper_bound(state, j, first, t);
    if (u > best) {
      best = u;
      argmax.assign(1, j);
    } else if (u == best) {
      argmax.push_back(j);
    }
  }
  const int second = argmax[rng.uniform_int(0, static_cast<int>(argmax.size()) - 1)];
  return {first, second};
}

void rucb_observe(RucbState& state, int first, int second, int outcome) {
  if (first == second) throw InvalidPairError("a duel needs two distinct arms");
  const int winner = outcome == 0 ? first : second;
  const int loser = outcome == 0 ? second : first;
  ++state.wins[static_cast<std::size_t>(winner) * state.n_arms + loser];
}

std::pair<int, int> ws_step(const WsState& state, Rng& rng) {
  const int first = state.incumbent ? *state.incumbent
                                    : rng.uniform_int(0, state.n_arms - 1);
  std::int64_t best = 0;
  bool seen = false;
  for (int a = 0; a < state.n_arms; ++a) {
    if (a == first) continue;
    if (!seen || state.scores[a] > best) {
      best = state.scores[a];
      seen = true;
    }
  }
  std::vector<int> argmax;
  for (int a = 0; a < state.n_arms; ++a) {
    if (a != first && state.scores[a] == best) argmax.push_back(a);
  }
  const int second = argmax[rng.uniform_int(0, static_cast<int>(argmax.size()) - 1)];
  return {first, second};
}

void ws_observe(WsState& state, int first, int second, int outcome) {
  if (first == second) throw InvalidPairError("a duel needs two distinct arms");
  const int winner = outcome == 0 ? first : second;
  const int loser = outcome == 0 ? second : first;
  ++state.scores[winner];
  --state.scores[loser];
  state.incumbent = winner;
}

}  // namespace ctb
