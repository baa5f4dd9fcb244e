#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ctb/errors.hpp"

namespace ctb {

// Pairwise duel state for the decomposed implementation: win counts plus a
// real prior per ordered pair. O(n^2) memory regardless of the cell count.
struct PairState {
  int n_arms = 0;
  std::vector<std::int64_t> wins;  // n x n; wins[i*n+j] = wins of i over j
  std::vector<double> priors;      // n x n; diagonal unused
  std::int64_t t = 0;

  explicit PairState(int n)
      : n_arms(n),
        wins(static_cast<std::size_t>(n) * n, 0),
        priors(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 2) throw ConfigError("pair state needs at least 2 arms");
  }

  std::int64_t win_count(int i, int j) const {
    return wins[static_cast<std::size_t>(i) * n_arms + j];
  }
  double prior(int i, int j) const {
    return priors[static_cast<std::size_t>(i) * n_arms + j];
  }
  void set_priors(const std::vector<std::vector<double>>& r);
};

// Winner-over-loser count gains one.
void record_duel(PairState& state, int first, int second, int outcome);

// Largest reachable cell score among all orderings that put arm k on top:
// pairs involving k are forced to k's side, every other pair contributes its
// larger orientation.
double best_cell_value(PairState const& state, int k);

// best_cell_value for every arm in one O(n^2) pass.
std::vector<double> all_best_cell_values(const PairState& state);

// First arm maximizes best_cell_value, second maximizes it among the rest;
// ties resolve to the smallest arm index.
std::pair<int, int> select_arms_fast(const PairState& state);

// Initial score implied by per-pair priors for the cell with winning pairs
// `membership`: the sum of the priors over those ordered pairs.
double decomposed_init_score(const PairState& state,
                             std::span<const std::pair<int, int>> membership);

// Cell score rebuilt from pair counts: m0 plus the wins over the cell's
// winning pairs. Matches the explicit score table on identical histories
// whenever m0 decomposes over the pairs.
double reconstruct_score(const PairState& state,
                         std::span<const std::pair<int, int>> membership,
                         double m0);

}  // namespace ctb
