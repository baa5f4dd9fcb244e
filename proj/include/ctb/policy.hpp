#pragma once

#include <memory>
#include <string>
#include <utility>

#include "ctb/arm_model.hpp"
#include "ctb/bayes_posterior.hpp"
#include "ctb/benchmarks.hpp"
#include "ctb/cell_geometry.hpp"
#include "ctb/ctb_explicit.hpp"
#include "ctb/ctb_fast.hpp"

namespace ctb {

// One replication's worth of policy state. Policies see opaque arm indices
// and duel outcomes only; never theta, utilities, or true win probabilities
// (Thompson's likelihood model is the one sanctioned exception).
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::pair<int, int> select(Rng& rng) = 0;
  virtual void observe(int first, int second, int outcome) = 0;
  virtual const std::string& name() const { return name_; }

 protected:
  explicit Policy(std::string name) : name_(std::move(name)) {}
  std::string name_;
};

// Explicit score-table policy over an enumerated candidate table.
class CtbExplicitPolicy : public Policy {
 public:
  CtbExplicitPolicy(std::string name, std::shared_ptr<const CellTable> table,
                    CtbVariant variant, std::optional<double> q = std::nullopt)
      : Policy(std::move(name)),
        table_(std::move(table)),
        scores_(init_scores(*table_, variant, q)) {}

  std::pair<int, int> select(Rng&) override { return select_arms(scores_, *table_); }
  void observe(int first, int second, int outcome) override {
    update(scores_, *table_, first, second, outcome);
  }
  const ScoreTable& scores() const { return scores_; }
  const CellTable& table() const { return *table_; }

 private:
  std::shared_ptr<const CellTable> table_;
  ScoreTable scores_;
};

// Decomposed pairwise policy; optional per-pair priors.
class CtbFastPolicy : public Policy {
 public:
  CtbFastPolicy(std::string name, int n_arms,
                const std::vector<std::vector<double>>* priors = nullptr)
      : Policy(std::move(name)), state_(n_arms) {
    if (priors != nullptr) state_.set_priors(*priors);
  }

  std::pair<int, int> select(Rng&) override { return select_arms_fast(state_); }
  void observe(int first, int second, int outcome) override {
    record_duel(state_, first, second, outcome);
  }
  const PairState& state() const { return state_; }

 private:
  PairState state_;
};

// Posterior-sampling policy. In constant-q mode the update is the two-case
// multiplicative rule; in model mode the likelihood is the oracle's win
// probability evaluated at each cell's representative.
class ThompsonPolicy : public Policy {
 public:
  // Constant-q likelihood.
  ThompsonPolicy(std::string name, std::shared_ptr<const CellTable> table,
                 double q)
      : Policy(std::move(name)),
        table_(std::move(table)),
        post_(make_posterior(*table_, q)),
        use_model_(false) {}

  // Generative-model likelihood at cell representatives. Takes only what the
  // model needs: arm features and the oracle's functional form, not theta.
  ThompsonPolicy(std::string name, std::shared_ptr<const CellTable> table,
                 ArmSet arms, UtilityKind util_kind, OracleKind oracle_kind,
                 double oracle_param)
      : Policy(std::move(name)),
        table_(std::move(table)),
        post_(make_posterior(
            *table_, oracle_kind == OracleKind::kConstantP ? oracle_param
                                                           : 0.75)),
        use_model_(oracle_kind != OracleKind::kConstantP),
        arms_(std::move(arms)),
        util_kind_(util_kind),
        oracle_kind_(oracle_kind),
        oracle_param_(oracle_param) {}

  std::pair<int, int> select(Rng& rng) override {
    return thompson_step(post_, *table_, rng);
  }

  void observe(int first, int second, int outcome) override {
    UtilityModel util;
    util.kind = util_kind_;
    const std::vector<double> lik =
        use_model_ ? model_likelihoods(*table_, arms_, util, oracle_kind_,
                                       oracle_param_, first, second, outcome)
                   : constant_q_likelihoods(*table_, first, second, outcome,
                                            post_.q);
    update_posterior(post_, *table_, first, second, outcome, lik);
  }

  const CellPosterior& posterior() const { return post_; }

 private:
  std::shared_ptr<const CellTable> table_;
  CellPosterior post_;
  bool use_model_;
  ArmSet arms_;
  UtilityKind util_kind_ = UtilityKind::kLinearDot;
  OracleKind oracle_kind_ = OracleKind::kConstantP;
  double oracle_param_ = 0.0;
};

class RucbPolicy : public Policy {
 public:
  RucbPolicy(std::string name, int n_arms, double alpha)
      : Policy(std::move(name)), state_(n_arms, alpha) {}

  std::pair<int, int> select(Rng& rng) override {
    return rucb_step(state_, t_, rng);
  }
  void observe(int first, int second, int outcome) override {
    rucb_observe(state_, first, second, outcome);
    ++t_;
  }

 private:
  RucbState state_;
  std::int64_t t_ = 1;
};

class WsPolicy : public Policy {
 public:
  WsPolicy(std::string name, int n_arms)
      : Policy(std::move(name)), state_(n_arms) {}

  std::pair<int, int> select(Rng& rng) override { return ws_step(state_, rng); }
  void observe(int first, int second, int outcome) override {
    ws_observe(state_, first, second, outcome);
  }

 private:
  WsState state_;
};

}  // namespace ctb
