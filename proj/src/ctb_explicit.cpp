#include "ctb/ctb_explicit.hpp"

#include <cmath>

namespace ctb {

double prior_mass_to_init_score(double mass, double q) {
  if (!(q > 0.5 && q < 1.0)) {
    throw ConfigError("prior-to-score map requires q in (0.5, 1)");
  }
  if (mass < 0.0) throw ConfigError("prior mass must be nonnegative");
  if (mass == 0.0) return kNegInf;
  return std::log(mass) / std::log(q / (1.0 - q));
}

ScoreTable init_scores(const CellTable& table, CtbVariant variant,
                       std::optional<double> q) {
  ScoreTable scores;
  scores.init.assign(table.size(), 0.0);
  scores.inc.assign(table.size(), 0);
  if (variant == CtbVariant::kCtb3) {
    if (!q) throw ConfigError("prior-based initialization requires q");
    for (std::size_t i = 0; i < table.size(); ++i) {
      scores.init[i] = prior_mass_to_init_score(table.cells[i].prior_mass, *q);
    }
  }
  bool any_finite = false;
  for (double v : scores.init) any_finite = any_finite || v != kNegInf;
  if (!any_finite) {
    throw ConfigError("score table needs at least one finite-score cell");
  }
  return scores;
}

std::pair<int, int> select_arms(const ScoreTable& scores,
                                const CellTable& table) {
  // Best score per arm; cells are in index order so the first cell reaching
  // an arm's maximum is also its smallest-index witness.
  std::vector<double> arm_best(table.n_arms, kNegInf);
  std::size_t top_cell = table.size();
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double s = scores.score(i);
    if (s == kNegInf) continue;
    const int arm = table.cells[i].best;
    if (s > arm_best[arm]) arm_best[arm] = s;
    if (top_cell == table.size() || s > scores.score(top_cell)) top_cell = i;
  }
  if (top_cell == table.size()) {
    throw ConfigError("no finite-score cell available for selection");
  }

  int first = -1;
  for (int a = 0; a < table.n_arms; ++a) {
    if (arm_best[a] == kNegInf) continue;
    if (first < 0 || arm_best[a] > arm_best[first]) first = a;
  }
  int second = -1;
  for (int a = 0; a < table.n_arms; ++a) {
    if (a == first || arm_best[a] == kNegInf) continue;
    if (second < 0 || arm_best[a] > arm_best[second]) second = a;
  }
  if (second < 0) {
    throw DegenerateCandidatesError(first,
                                    top_two(table.cells[top_cell].vec).second);
  }
  return {first, second};
}

void update(ScoreTable& scores, const CellTable& table, int first, int second,
            int outcome) {
  if (first == second) throw InvalidPairError("a duel needs two distinct arms");
  const int winner = outcome == 0 ? first : second;
  const int loser = outcome == 0 ? second : first;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (scores.init[i] == kNegInf) continue;  // excluded cells stay excluded
    if (table.cells[i].vec.prefers(winner, loser)) ++scores.inc[i];
  }
  ++scores.t;
}

}  // namespace ctb
