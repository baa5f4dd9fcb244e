#include "ctb/ctb_fast.hpp"

#include <algorithm>

namespace ctb {

void PairState::set_priors(const std::vector<std::vector<double>>& r) {
  if (static_cast<int>(r.size()) != n_arms) {
    throw ConfigError("prior matrix size must match the arm count");
  }
  for (int i = 0; i < n_arms; ++i) {
    if (static_cast<int>(r[i].size()) != n_arms) {
      throw ConfigError("prior matrix must be square");
    }
    for (int j = 0; j < n_arms; ++j) {
      priors[static_cast<std::size_t>(i) * n_arms + j] = i == j ? 0.0 : r[i][j];
    }
  }
}

void record_duel(PairState& state, int first, int second, int outcome) {
  if (first == second) throw InvalidPairError("a duel needs two distinct arms");
  const int winner = outcome == 0 ? first : second;
  const int loser = outcome == 0 ? second : first;
  ++state.wins[static_cast<std::size_t>(winner) * state.n_arms + loser];
  ++state.t;
}

std::vector<double> all_best_cell_values(const PairState& state) {
  const int n = state.n_arms;
  auto weight = [&](int i, int j) {
    return static_cast<double>(state.win_count(i, j)) + state.prior(i, j);
  };
  // Shared part: every free pair contributes its larger orientation.
  double total_max = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      total_max += std::max(weight(i, j), weight(j, i));
    }
  }
  std::vector<double> values(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double forced = 0.0, released = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      forced += weight(k, j);
      released += std::max(weight(k, j), weight(j, k));
    }
    values[k] = total_max - released + forced;
  }
  return values;
}

double best_cell_value(PairState const& state, int k) {
  return all_best_cell_values(state)[k];
}

std::pair<int, int> select_arms_fast(const PairState& state) {
  const std::vector<double> values = all_best_cell_values(state);
  int first = 0;
  for (int k = 1; k < state.n_arms; ++k) {
    if (values[k] > values[first]) first = k;
  }
  int second = -1;
  for (int k = 0; k < state.n_arms; ++k) {
    if (k == first) continue;
    if (second < 0 || values[k] > values[second]) second = k;
  }
  return {first, second};
}

double decomposed_init_score(const PairState& state,
                             std::span<const std::pair<int, int>> membership) {
  double m0 = 0.0;
  for (const auto& [i, j] : membership) m0 += state.prior(i, j);
  return m0;
}

double reconstruct_score(const PairState& state,
                         std::span<const std::pair<int, int>> membership,
                         double m0) {
  std::int64_t wins = 0;
  for (const auto& [i, j] : membership) wins += state.win_count(i, j);
  return m0 + static_cast<double>(wins);
}

}  // namespace ctb
