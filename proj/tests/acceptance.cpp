// Acceptance suite: exercises every stated behavioral guarantee end to end
// and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ctb/experiment.hpp"

using namespace ctb;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int index, const char* name, bool ok, const std::string& detail,
            double seconds) {
  std::printf("[%d/9] %s - %s (%s, %.1fs)\n", index, ok ? "PASS" : "FAIL", name,
              detail.c_str(), seconds);
  if (!ok) ++g_failures;
}

Instance random_instance(int n, std::uint64_t seed, double p = 0.8) {
  InstanceSpec spec;
  spec.kind = InstanceSpec::Kind::kCustom;
  spec.n_arms = n;
  spec.p = p;
  Rng rng(seed);
  return generate_instance(spec, rng);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Random-walk occupancy identity, Monte Carlo vs closed form.
// ---------------------------------------------------------------------------
void criterion_walk_occupancy() {
  Timer timer;
  bool ok = true;
  std::string detail;
  Rng rng(20260810);
  for (double p : {0.6, 0.8}) {
    for (int s : {0, 1, 2}) {
      const WalkOccupancy occ = walk_occupancy_check(p, s, 100000, 10000, rng);
      if (std::abs(occ.z_score) > 3.0) ok = false;
      detail += "z(" + fmt(p) + "," + std::to_string(s) + ")=" +
                fmt(occ.z_score) + " ";
    }
  }
  report(1, "walk occupancy identity", ok, detail, timer.seconds());
}

// ---------------------------------------------------------------------------
// 2. Closed-form posterior equals the recursive update.
// ---------------------------------------------------------------------------
void criterion_posterior_equivalence() {
  Timer timer;
  bool ok = true;
  double worst = 0.0;
  const Instance inst = random_instance(4, 88);
  const CellTable table = enumerate_cells_sweep(inst.arms);
  Rng rng(5150);
  for (double q : {0.6, 0.8}) {
    for (int traj = 0; traj < 100; ++traj) {
      CellPosterior post = make_posterior(table, q);
      const std::vector<double> prior = post.masses;
      for (int t = 0; t < 100; ++t) {
        const int first = rng.uniform_int(0, 3);
        int second = rng.uniform_int(0, 2);
        if (second >= first) ++second;
        const int outcome = rng.uniform01() < 0.7 ? 0 : 1;
        update_posterior(post, table, first, second, outcome,
                         constant_q_likelihoods(table, first, second, outcome, q));
      }
      const auto closed = posterior_closed_form(prior, q, post.t, post.inc);
      for (std::size_t i = 0; i < closed.size(); ++i) {
        worst = std::max(worst, std::abs(closed[i] - post.masses[i]));
      }
    }
  }
  ok = worst <= 1e-10;
  report(2, "posterior closed form vs recursion", ok,
         "max cell deviation " + fmt(worst), timer.seconds());
}

// ---------------------------------------------------------------------------
// 3. Decomposed and explicit implementations emit identical duel sequences.
// ---------------------------------------------------------------------------
void criterion_fast_explicit_identity() {
  Timer timer;
  bool ok = true;
  long checked = 0;
  for (int n = 3; n <= 6 && ok; ++n) {
    const CellTable table = full_order_table(n);
    for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
      const Instance inst = random_instance(n, 7000 + seed);
      ScoreTable scores = init_scores(table, CtbVariant::kCtb2Explicit);
      PairState state(n);
      Rng rng(seed);
      for (int t = 0; t < 200; ++t) {
        const auto expl = select_arms(scores, table);
        const auto fast = select_arms_fast(state);
        if (expl != fast) {
          ok = false;
          break;
        }
        ++checked;
        const int outcome =
            inst.oracle.sample_winner(expl.first, expl.second, rng);
        update(scores, table, expl.first, expl.second, outcome);
        record_duel(state, expl.first, expl.second, outcome);
      }
    }
  }
  report(3, "decomposed vs explicit duel sequences", ok,
         std::to_string(checked) + " duels compared", timer.seconds());
}

// ---------------------------------------------------------------------------
// 4. Closed-form pairwise optimum equals brute-force enumeration.
// ---------------------------------------------------------------------------
double brute_force_best_value(const PairState& state, int k) {
  const int n = state.n_arms;
  auto weight = [&](int i, int j) {
    return static_cast<double>(state.win_count(i, j)) + state.prior(i, j);
  };
  std::vector<std::pair<int, int>> free_pairs;
  double forced = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (i == k || j == k) {
        forced += weight(k, i == k ? j : i);
      } else {
        free_pairs.emplace_back(i, j);
      }
    }
  }
  double best = -1e300;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_pairs.size());
       ++mask) {
    double value = forced;
    for (std::size_t b = 0; b < free_pairs.size(); ++b) {
      const auto [i, j] = free_pairs[b];
      value += (mask >> b) & 1 ? weight(j, i) : weight(i, j);
    }
    best = std::max(best, value);
  }
  return best;
}

void criterion_ip_closed_form() {
  Timer timer;
  bool ok = true;
  Rng rng(31337);
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const int n = 3 + rng.uniform_int(0, 2);
    PairState state(n);
    std::vector<std::vector<double>> priors(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        state.wins[static_cast<std::size_t>(i) * n + j] = rng.uniform_int(0, 20);
        // Quarter-integer priors add exactly in doubles, so the check is
        // literal equality.
        priors[i][j] = rng.uniform_int(-8, 8) * 0.25;
      }
    }
    state.set_priors(priors);
    for (int k = 0; k < n; ++k) {
      if (best_cell_value(state, k) != brute_force_best_value(state, k)) {
        ok = false;
      }
    }
  }
  report(4, "pairwise optimum vs brute force", ok, "1000 random states",
         timer.seconds());
}

// ---------------------------------------------------------------------------
// 5. Cell geometry: soundness, completeness, size bound, rank bijection.
// ---------------------------------------------------------------------------
void criterion_cell_geometry() {
  Timer timer;
  bool ok = true;
  std::string detail = "ok";
  UtilityModel linear;
  Rng rng(2718);
  for (int trial = 0; trial < 100 && ok; ++trial) {
    const int n = 3 + rng.uniform_int(0, 7);
    const Instance inst = random_instance(n, 9000 + trial);
    const CellTable table = enumerate_cells_sweep(inst.arms);
    if (table.size() > static_cast<std::size_t>(n) * (n - 1)) {
      ok = false;
      detail = "cell count exceeded n(n-1)";
      break;
    }
    for (const auto& cell : table.cells) {
      if (!(classify(cell.representative, inst.arms, linear) == cell.vec)) {
        ok = false;
        detail = "representative failed to round-trip";
        break;
      }
    }
    for (int s = 0; s < 100 && ok; ++s) {
      const double a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      try {
        const CellVector cell = classify(
            std::vector<double>{std::cos(a), std::sin(a)}, inst.arms, linear);
        if (!table.find(cell)) {
          ok = false;
          detail = "sampled point fell outside the table";
        }
      } catch (const BoundaryError&) {
      }
    }
  }
  for (int n = 2; n <= 4 && ok; ++n) {
    for (std::uint64_t rank = 1; rank <= (std::uint64_t{1} << n_pairs(n));
         ++rank) {
      if (lex_rank_u64(cell_from_rank_u64(n, rank)) != rank) {
        ok = false;
        detail = "rank bijection failed";
        break;
      }
    }
  }
  report(5, "cell geometry soundness and completeness", ok, detail,
         timer.seconds());
}

// ---------------------------------------------------------------------------
// 6. Simulated regret never exceeds the constant bound.
// ---------------------------------------------------------------------------
void criterion_bound_consistency() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (int n : {3, 4}) {
    for (double p : {0.7, 0.8}) {
      double regret_sum = 0.0, bound_sum = 0.0;
      const int reps = 500;
      for (int rep = 0; rep < reps; ++rep) {
        Rng inst_rng(1234, rep, 0);
        InstanceSpec spec;
        spec.kind = InstanceSpec::Kind::kCustom;
        spec.n_arms = n;
        spec.p = p;
        const Instance inst = generate_instance(spec, inst_rng);
        auto table = std::make_shared<const CellTable>(
            enumerate_cells_sweep(inst.arms));
        CtbExplicitPolicy policy("ctb-1", table, CtbVariant::kCtb1);
        bound_sum += weak_regret_bound(
            bound_inputs_for(inst, *table, policy.scores()));
        Rng run_rng(1234, rep, 1);
        const RegretSeries series =
            run_replication(policy, inst, 500, RegretMode::kUtilityWeak, run_rng);
        regret_sum += series.steps.back().cum_regret;
      }
      const double mean_regret = regret_sum / reps;
      const double mean_bound = bound_sum / reps;
      if (mean_regret > mean_bound) ok = false;
      detail += "n=" + std::to_string(n) + ",p=" + fmt(p) + ": " +
                fmt(mean_regret) + "<=" + fmt(mean_bound) + " ";
    }
  }
  report(6, "regret stays under the constant bound", ok, detail,
         timer.seconds());
}

// ---------------------------------------------------------------------------
// 7. Binary-regret experiment: flattening and algorithm ordering.
// ---------------------------------------------------------------------------
ExperimentConfig base_config(const std::string& name, const std::string& dir) {
  ExperimentConfig config;
  config.name = name;
  config.horizon = 500;
  config.replications = 200;
  config.seed = 20260810;
  config.output_dir = dir;
  config.checkpoints = {100, 200, 300, 400, 500};
  return config;
}

double mean_at(const AlgorithmResult& alg, int t) {
  for (const auto& row : alg.aggregates) {
    if (row.t == t) return row.mean_cum_regret;
  }
  throw std::logic_error("missing checkpoint");
}

double stderr_at(const AlgorithmResult& alg, int t) {
  for (const auto& row : alg.aggregates) {
    if (row.t == t) return row.stderr_cum_regret;
  }
  throw std::logic_error("missing checkpoint");
}

void criterion_binary_experiment() {
  Timer timer;
  ExperimentConfig config =
      base_config("binary-constant-p", "acceptance_out/setting1");
  config.instance.kind = InstanceSpec::Kind::kSetting1;
  config.regret_mode = RegretMode::kBinaryWeak;
  config.algorithms = {AlgorithmSpec{"ctb-1", {}, {}, {}, {}},
                       AlgorithmSpec{"ws-w", {}, {}, {}, {}},
                       AlgorithmSpec{"rucb", {}, {}, {}, {}}};
  std::filesystem::remove_all(config.output_dir);
  const ExperimentResult result = run_experiment(config);

  const auto& ctb1 = result.algorithms[0];
  const auto& wsw = result.algorithms[1];
  const auto& rucb = result.algorithms[2];

  const double early = mean_at(ctb1, 100);
  const double late = mean_at(ctb1, 500) - mean_at(ctb1, 400);
  const bool flat = late <= 0.1 * early;
  const bool ordered = mean_at(ctb1, 500) < mean_at(wsw, 500) &&
                       mean_at(wsw, 500) < mean_at(rucb, 500);
  report(7, "binary experiment: flattening and ordering", flat && ordered,
         "late/early=" + fmt(late) + "/" + fmt(early) + ", t=500 means " +
             fmt(mean_at(ctb1, 500)) + " < " + fmt(mean_at(wsw, 500)) + " < " +
             fmt(mean_at(rucb, 500)),
         timer.seconds());
}

// ---------------------------------------------------------------------------
// 8. Prior-information experiment: one-sided separation tests.
// ---------------------------------------------------------------------------
double welch_z(const AlgorithmResult& lo, const AlgorithmResult& hi, int t) {
  const double gap = mean_at(hi, t) - mean_at(lo, t);
  const double se = std::sqrt(stderr_at(lo, t) * stderr_at(lo, t) +
                              stderr_at(hi, t) * stderr_at(hi, t));
  return gap / se;
}

void criterion_prior_experiment() {
  Timer timer;
  ExperimentConfig config =
      base_config("bradley-terry-prior", "acceptance_out/setting2");
  config.instance.kind = InstanceSpec::Kind::kSetting2;
  config.regret_mode = RegretMode::kUtilityWeak;
  config.algorithms = {
      AlgorithmSpec{"ctb-3", 0.6, {}, {}, {}},
      AlgorithmSpec{"thompson", {}, {}, std::string("model"), {}},
      AlgorithmSpec{"ctb-2", {}, {}, {}, {}},
      AlgorithmSpec{"ws-w", {}, {}, {}, {}}};
  std::filesystem::remove_all(config.output_dir);
  const ExperimentResult result = run_experiment(config);

  const auto& ctb3 = result.algorithms[0];
  const auto& thom = result.algorithms[1];
  const auto& ctb2 = result.algorithms[2];
  const auto& wsw = result.algorithms[3];

  // One-sided two-sample tests at the 0.05 level: z > 1.645.
  const double z3 = welch_z(ctb3, thom, 500);
  bool ok = z3 > 1.645;
  std::string detail = "z(ctb3<thom,500)=" + fmt(z3);
  for (int t : {300, 400, 500}) {
    const double z2 = welch_z(ctb2, wsw, t);
    detail += " z(ctb2<wsw," + std::to_string(t) + ")=" + fmt(z2);
    if (z2 <= 1.645) ok = false;
  }
  report(8, "prior experiment: separation tests", ok, detail, timer.seconds());
}

// ---------------------------------------------------------------------------
// 9. Determinism: identical config and seed give byte-identical raw output.
// ---------------------------------------------------------------------------
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_determinism() {
  Timer timer;
  ExperimentConfig config = base_config("determinism", "acceptance_out/det1");
  config.instance.kind = InstanceSpec::Kind::kCustom;
  config.instance.n_arms = 4;
  config.horizon = 50;
  config.replications = 5;
  config.checkpoints = {25, 50};
  config.regret_mode = RegretMode::kBinaryWeak;
  config.algorithms = {AlgorithmSpec{"ctb-1", {}, {}, {}, {}},
                       AlgorithmSpec{"ctb-2", {}, {}, {}, {}},
                       AlgorithmSpec{"thompson", 0.8, {},
                                     std::string("constant-q"), {}},
                       AlgorithmSpec{"rucb", {}, {}, {}, {}},
                       AlgorithmSpec{"ws-w", {}, {}, {}, {}}};
  const ExperimentResult first = run_experiment(config);
  const std::string raw1 = slurp(first.raw_path);
  config.output_dir = "acceptance_out/det2";
  const ExperimentResult second = run_experiment(config);
  const std::string raw2 = slurp(second.raw_path);
  const bool ok = !raw1.empty() && raw1 == raw2;
  report(9, "byte-identical reruns", ok,
         std::to_string(raw1.size()) + " bytes compared", timer.seconds());
}

}  // namespace

int main() {
  criterion_walk_occupancy();
  criterion_posterior_equivalence();
  criterion_fast_explicit_identity();
  criterion_ip_closed_form();
  criterion_cell_geometry();
  criterion_bound_consistency();
  criterion_binary_experiment();
  criterion_prior_experiment();
  criterion_determinism();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
