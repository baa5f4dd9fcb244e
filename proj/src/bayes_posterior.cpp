#include "ctb/bayes_posterior.hpp"

#include <algorithm>
#include <cmath>

#include "ctb/ctb_explicit.hpp"

namespace ctb {

CellPosterior make_posterior(const CellTable& table, double q) {
  if (!(q > 0.5 && q < 1.0)) {
    throw ConfigError("cell posterior requires q in (0.5, 1)");
  }
  CellPosterior post;
  post.q = q;
  post.masses.resize(table.size());
  post.inc.assign(table.size(), 0);
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.cells[i].prior_mass < 0.0) {
      throw ConfigError("prior masses must be nonnegative");
    }
    total += table.cells[i].prior_mass;
  }
  if (total <= 0.0) throw ConfigError("prior masses must not all vanish");
  for (std::size_t i = 0; i < table.size(); ++i) {
    post.masses[i] = table.cells[i].prior_mass / total;
  }
  return post;
}

std::vector<double> constant_q_likelihoods(const CellTable& table, int first,
                                           int second, int outcome, double q) {
  const int winner = outcome == 0 ? first : second;
  const int loser = outcome == 0 ? second : first;
  std::vector<double> lik(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    lik[i] = table.cells[i].vec.prefers(winner, loser) ? q : 1.0 - q;
  }
  return lik;
}

std::vector<double> model_likelihoods(const CellTable& table,
                                      const ArmSet& arms,
                                      const UtilityModel& util,
                                      OracleKind oracle_kind,
                                      double oracle_param, int first,
                                      int second, int outcome) {
  const int winner = outcome == 0 ? first : second;
  const int loser = outcome == 0 ? second : first;
  if (oracle_kind == OracleKind::kConstantP) {
    return constant_q_likelihoods(table, first, second, outcome, oracle_param);
  }
  if (oracle_kind == OracleKind::kExplicitMatrix) {
    throw ConfigError("explicit-matrix oracles have no pointwise likelihood");
  }
  std::vector<double> lik(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& rep = table.cells[i].representative;
    if (rep.empty()) {
      throw ConfigError("model likelihoods need cell representatives");
    }
    const double uw = util.value_at(rep, arms.features[winner]);
    const double ul = util.value_at(rep, arms.features[loser]);
    lik[i] = oracle_kind == OracleKind::kBradleyTerry
                 ? bradley_terry_win_prob(uw, ul)
                 : probit_win_prob(uw, ul);
  }
  return lik;
}

void update_posterior(CellPosterior& post, const CellTable& table, int first,
                      int second, int outcome,
                      const std::vector<double>& likelihoods) {
  if (likelihoods.size() != post.masses.size()) {
    throw ConfigError("likelihood vector must cover every cell");
  }
  const int winner = outcome == 0 ? first : second;
  const int loser = outcome == 0 ? second : first;
  double total = 0.0;
  for (std::size_t i = 0; i < post.masses.size(); ++i) {
    post.masses[i] *= likelihoods[i];
    total += post.masses[i];
  }
  if (total <= 0.0) {
    throw ConfigError("posterior mass vanished: every cell contradicted");
  }
  for (double& m : post.masses) m /= total;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.cells[i].vec.prefers(winner, loser)) ++post.inc[i];
  }
  ++post.t;
}

std::vector<double> posterior_closed_form(const std::vector<double>& prior,
                                          double q, std::int64_t t,
                                          const std::vector<std::int64_t>& inc) {
  if (!(q > 0.5 && q < 1.0)) {
    throw ConfigError("closed-form posterior requires q in (0.5, 1)");
  }
  if (prior.size() != inc.size()) {
    throw ConfigError("prior and increment vectors must align");
  }
  const double log_q = std::log(q);
  const double log_1mq = std::log(1.0 - q);
  std::vector<double> log_mass(prior.size(), kNegInf);
  double max_log = kNegInf;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (inc[i] < 0 || inc[i] > t) {
      throw ConfigError("increment counts must lie in [0, t]");
    }
    if (prior[i] <= 0.0) continue;
    log_mass[i] = std::log(prior[i]) + static_cast<double>(inc[i]) * log_q +
                  static_cast<double>(t - inc[i]) * log_1mq;
    max_log = std::max(max_log, log_mass[i]);
  }
  if (max_log == kNegInf) {
    throw ConfigError("closed-form posterior needs a positive-mass cell");
  }
  std::vector<double> mass(prior.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (log_mass[i] == kNegInf) continue;
    mass[i] = std::exp(log_mass[i] - max_log);
    total += mass[i];
  }
  for (double& m : mass) m /= total;
  return mass;
}

std::vector<double> prior_to_scores(const std::vector<double>& prior,
                                    double q) {
  std::vector<double> scores(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) {
    scores[i] = prior_mass_to_init_score(prior[i], q);
  }
  return scores;
}

std::pair<int, int> thompson_step(const CellPosterior& post,
                                  const CellTable& table, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  std::size_t chosen = post.masses.size();
  for (std::size_t i = 0; i < post.masses.size(); ++i) {
    acc += post.masses[i];
    if (u < acc) {
      chosen = i;
      break;
    }
  }
  if (chosen == post.masses.size()) {
    // Rounding left u just past the accumulated total; take the last
    // positive-mass cell.
    for (std::size_t i = post.masses.size(); i-- > 0;) {
      if (post.masses[i] > 0.0) {
        chosen = i;
        break;
      }
    }
    if (chosen == post.masses.size()) {
      throw ConfigError("posterior has no positive-mass cell");
    }
  }
  return top_two(table.cells[chosen].vec);
}

}  // namespace ctb
