#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ctb/arm_model.hpp"
#include "ctb/bayes_posterior.hpp"
#include "ctb/cell_geometry.hpp"
#include "ctb/ctb_explicit.hpp"

using namespace ctb;

namespace {

CellVector vec(int n, std::initializer_list<int> bits) {
  std::vector<std::uint8_t> b;
  for (int v : bits) b.push_back(static_cast<std::uint8_t>(v));
  return CellVector(n, std::move(b));
}

Instance random_instance(int n, std::uint64_t seed) {
  InstanceSpec spec;
  spec.kind = InstanceSpec::Kind::kCustom;
  spec.n_arms = n;
  Rng rng(seed);
  return generate_instance(spec, rng);
}

struct Trajectory {
  CellPosterior post;
  std::vector<double> prior;
};

Trajectory run_random_updates(const CellTable& table, double q, int steps,
                              Rng& rng) {
  Trajectory traj;
  traj.post = make_posterior(table, q);
  traj.prior = traj.post.masses;
  const int n = table.n_arms;
  for (int t = 0; t < steps; ++t) {
    const int first = rng.uniform_int(0, n - 1);
    int second = rng.uniform_int(0, n - 2);
    if (second >= first) ++second;
    const int outcome = rng.uniform01() < 0.7 ? 0 : 1;
    update_posterior(traj.post, table, first, second, outcome,
                     constant_q_likelihoods(table, first, second, outcome, q));
  }
  return traj;
}

}  // namespace

TEST_CASE("posterior update applies the two-case rule") {
  const std::vector<CellVector> vectors = {vec(2, {0}), vec(2, {1})};
  const CellTable table = cell_table_from_vectors(2, vectors);
  CellPosterior post = make_posterior(table, 0.8);
  CHECK(post.masses == std::vector<double>{0.5, 0.5});

  // Arm 0 beats arm 1: only the first cell sits on the winner's side.
  update_posterior(post, table, 0, 1, 0,
                   constant_q_likelihoods(table, 0, 1, 0, 0.8));
  CHECK(post.masses[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(post.masses[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(post.inc[0] == 1);
  CHECK(post.inc[1] == 0);

  // A flat likelihood (the q = 0.5 boundary) leaves the posterior unchanged.
  update_posterior(post, table, 0, 1, 0, {0.5, 0.5});
  CHECK(post.masses[0] == doctest::Approx(0.8).epsilon(1e-12));

  CHECK_THROWS_AS(make_posterior(table, 0.5), ConfigError);
  CHECK_THROWS_AS(make_posterior(table, 1.0), ConfigError);
}

TEST_CASE("zero-mass cells never revive and total mass is conserved") {
  const std::vector<CellVector> vectors = {vec(3, {0, 0, 0}), vec(3, {1, 1, 0}),
                                           vec(3, {1, 1, 1})};
  CellTable table = cell_table_from_vectors(3, vectors);
  table.cells[0].prior_mass = 0.6;
  table.cells[1].prior_mass = 0.4;
  table.cells[2].prior_mass = 0.0;
  CellPosterior post = make_posterior(table, 0.7);
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const int first = rng.uniform_int(0, 2);
    int second = rng.uniform_int(0, 1);
    if (second >= first) ++second;
    const int outcome = rng.uniform01() < 0.5 ? 0 : 1;
    update_posterior(post, table, first, second, outcome,
                     constant_q_likelihoods(table, first, second, outcome, 0.7));
    double total = 0.0;
    for (double m : post.masses) total += m;
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(post.masses[2] == 0.0);
  }
}

TEST_CASE("annihilating every positive-mass cell is an error") {
  const std::vector<CellVector> vectors = {vec(2, {0}), vec(2, {1})};
  CellTable table = cell_table_from_vectors(2, vectors);
  table.cells[0].prior_mass = 1.0;
  table.cells[1].prior_mass = 0.0;
  CellPosterior post = make_posterior(table, 0.8);
  CHECK_THROWS_AS(update_posterior(post, table, 0, 1, 0, {0.0, 0.5}),
                  ConfigError);
}

TEST_CASE("closed form reduces to the prior at t = 0") {
  const std::vector<double> prior{0.3, 0.2, 0.5};
  const auto mass = posterior_closed_form(prior, 0.6, 0, {0, 0, 0});
  for (std::size_t i = 0; i < prior.size(); ++i) {
    CHECK(mass[i] == doctest::Approx(prior[i]).epsilon(1e-14));
  }
}

TEST_CASE("closed form equals the recursion on random trajectories") {
  const Instance inst = random_instance(4, 321);
  const CellTable table = enumerate_cells_sweep(inst.arms);
  Rng rng(15);
  for (double q : {0.6, 0.8}) {
    for (int traj = 0; traj < 10; ++traj) {
      const Trajectory t = run_random_updates(table, q, 100, rng);
      const auto closed =
          posterior_closed_form(t.prior, q, t.post.t, t.post.inc);
      for (std::size_t i = 0; i < closed.size(); ++i) {
        CHECK(std::abs(closed[i] - t.post.masses[i]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("one-sided histories tilt the posterior geometrically") {
  const int t = 20;
  const double q = 0.6;
  const auto mass = posterior_closed_form({0.5, 0.5}, q, t,
                                          {t, 0});
  const double expected_ratio = std::pow(q / (1.0 - q), t);
  CHECK(mass[0] / mass[1] == doctest::Approx(expected_ratio).epsilon(1e-9));
}

TEST_CASE("prior-to-score map") {
  const auto scores = prior_to_scores({1.0, 0.5, 0.0}, 0.6);
  CHECK(scores[0] == 0.0);
  CHECK(scores[1] == doctest::Approx(-1.709511291351454).epsilon(1e-12));
  CHECK(scores[2] == kNegInf);
  CHECK_THROWS_AS(prior_to_scores({0.5}, 0.5), ConfigError);
}

TEST_CASE("prior-based scores track the posterior argmax") {
  Rng rng(77);
  for (double q : {0.6, 0.8}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Instance inst = random_instance(4, 500 + trial);
      const CellTable table = enumerate_cells_sweep(inst.arms);
      ScoreTable scores = init_scores(table, CtbVariant::kCtb3, q);
      CellPosterior post = make_posterior(table, q);
      for (int t = 0; t < 100; ++t) {
        const int first = rng.uniform_int(0, 3);
        int second = rng.uniform_int(0, 2);
        if (second >= first) ++second;
        const int outcome = rng.uniform01() < 0.7 ? 0 : 1;
        update(scores, table, first, second, outcome);
        update_posterior(post, table, first, second, outcome,
                         constant_q_likelihoods(table, first, second, outcome, q));
        std::size_t best_score = 0, best_mass = 0;
        for (std::size_t i = 1; i < table.size(); ++i) {
          if (scores.score(i) > scores.score(best_score)) best_score = i;
          if (post.masses[i] > post.masses[best_mass]) best_mass = i;
        }
        CHECK(best_score == best_mass);
      }
    }
  }
}

TEST_CASE("thompson sampling draws cells by mass and ranks within") {
  // Mass 1 on the ordering 3 > 1 > 2 always pulls (3, 1), 0-based (2, 0).
  const CellTable one = cell_table_from_vectors(3, {vec(3, {0, 1, 1})}, {1.0});
  CellPosterior post = make_posterior(one, 0.8);
  Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    CHECK(thompson_step(post, one, rng) == std::pair{2, 0});
  }

  // Uniform over two cells: each side's pair appears half the time.
  const CellTable two = cell_table_from_vectors(
      3, {vec(3, {0, 0, 0}), vec(3, {1, 1, 1})}, {0.5, 0.5});
  CellPosterior post2 = make_posterior(two, 0.8);
  int first_cell = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const auto pick = thompson_step(post2, two, rng);
    if (pick == std::pair{0, 1}) {
      ++first_cell;
    } else {
      CHECK(pick == std::pair{2, 1});
    }
  }
  CHECK(static_cast<double>(first_cell) / draws ==
        doctest::Approx(0.5).epsilon(0.011));  // 3 sigma is 0.0047

  Rng a(12), b(12);
  for (int k = 0; k < 100; ++k) {
    CHECK(thompson_step(post2, two, a) == thompson_step(post2, two, b));
  }
}

TEST_CASE("model likelihoods need representatives and a generative oracle") {
  const CellTable bare = cell_table_from_vectors(2, {vec(2, {0}), vec(2, {1})});
  ArmSet arms;
  arms.n_arms = 2;
  arms.dim = 2;
  arms.features = {{1.0, 0.0}, {0.0, 1.0}};
  UtilityModel linear;
  CHECK_THROWS_AS(model_likelihoods(bare, arms, linear,
                                    OracleKind::kBradleyTerry, 0.0, 0, 1, 0),
                  ConfigError);
  CHECK_THROWS_AS(model_likelihoods(bare, arms, linear,
                                    OracleKind::kExplicitMatrix, 0.0, 0, 1, 0),
                  ConfigError);

  // With representatives, the likelihood is the win probability there.
  const CellTable table = enumerate_cells_sweep(arms);
  const auto lik = model_likelihoods(table, arms, linear,
                                     OracleKind::kBradleyTerry, 0.0, 0, 1, 0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& rep = table.cells[i].representative;
    const double u0 = linear.value_at(rep, arms.features[0]);
    const double u1 = linear.value_at(rep, arms.features[1]);
    CHECK(lik[i] == doctest::Approx(bradley_terry_win_prob(u0, u1)).epsilon(1e-12));
    CHECK(lik[i] > 0.0);
    CHECK(lik[i] < 1.0);
  }
  // Constant-p oracles reduce to the two-case rule.
  const auto reduced = model_likelihoods(table, arms, linear,
                                         OracleKind::kConstantP, 0.8, 0, 1, 0);
  const auto direct = constant_q_likelihoods(table, 0, 1, 0, 0.8);
  CHECK(reduced == direct);
}
