#pragma once

#include <stdexcept>
#include <string>

namespace ctb {

// Invalid configuration, instance/backend mismatch, bad parameter domain.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point sits on a utility-tie boundary between two arms.
struct BoundaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// i must differ from j (duels, win probabilities, pair positions).
struct InvalidPairError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Every finite-score cell names the same best arm, so no duel can be formed.
// Carries the fallback duel (that arm vs the runner-up of the top cell) so
// the harness can keep the run going.
struct DegenerateCandidatesError : std::runtime_error {
  int best;
  int runner_up;
  DegenerateCandidatesError(int best_arm, int runner)
      : std::runtime_error("all candidate cells agree on one best arm"),
        best(best_arm),
        runner_up(runner) {}
};

// Series with mismatched horizons or an empty series list.
struct AggregationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ctb
