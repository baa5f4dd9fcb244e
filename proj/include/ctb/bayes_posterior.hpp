#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ctb/arm_model.hpp"
#include "ctb/cell_geometry.hpp"
#include "ctb/rng.hpp"

namespace ctb {

// Posterior over cells under a constant per-duel correctness probability q.
struct CellPosterior {
  double q = 0.0;
  std::int64_t t = 0;
  std::vector<double> masses;      // sum to 1
  std::vector<std::int64_t> inc;   // winner-side counts, for the closed form
};

// Prior read off the table's cell masses (normalized). q in (0.5, 1).
CellPosterior make_posterior(const CellTable& table, double q);

// Likelihood of the observed outcome per cell: q on the winner's side,
// 1 - q elsewhere.
std::vector<double> constant_q_likelihoods(const CellTable& table, int first,
                                           int second, int outcome, double q);

// Likelihood evaluated at each cell's representative point under the
// oracle's generative model (Bradley-Terry or probit). Constant-p oracles
// reduce to the constant-q case with q = p.
std::vector<double> model_likelihoods(const CellTable& table,
                                      const ArmSet& arms,
                                      const UtilityModel& util,
                                      OracleKind oracle_kind,
                                      double oracle_param, int first,
                                      int second, int outcome);

// Multiplies each mass by its likelihood and renormalizes. Zero-mass cells
// stay at zero. Throws if the total posterior mass vanishes.
void update_posterior(CellPosterior& post, const CellTable& table, int first,
                      int second, int outcome,
                      const std::vector<double>& likelihoods);

// Non-recursive posterior after t duels from per-cell increment counts,
// computed in log space: mass_i proportional to
// prior_i * q^inc_i * (1-q)^(t - inc_i).
std::vector<double> posterior_closed_form(const std::vector<double>& prior,
                                          double q, std::int64_t t,
                                          const std::vector<std::int64_t>& inc);

// Initial scores whose argmax tracks the posterior argmax:
// log(prior_i) / log(q / (1-q)); zero mass gives minus infinity.
std::vector<double> prior_to_scores(const std::vector<double>& prior, double q);

// Samples a cell proportional to posterior mass and returns its two
// top-ranked arms.
std::pair<int, int> thompson_step(const CellPosterior& post,
                                  const CellTable& table, Rng& rng);

}  // namespace ctb
