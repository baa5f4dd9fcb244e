#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ctb/errors.hpp"
#include "ctb/rng.hpp"

namespace ctb {

// Minimum pairwise utility gap accepted at instance construction. Below this
// two arms are considered tied and the instance is rejected.
inline constexpr double kUtilityGapTolerance = 1e-12;

// N arms with distinct d-dimensional feature vectors.
struct ArmSet {
  int n_arms = 0;
  int dim = 0;
  std::vector<std::vector<double>> features;  // n_arms vectors of length dim

  void validate() const;  // throws ConfigError on duplicate arms or N < 2
};

enum class UtilityKind { kLinearDot, kCustom };

// u(theta, A_i). theta is the environment's hidden preference vector; the
// same functional form is also evaluated at arbitrary points when
// classifying cells.
struct UtilityModel {
  UtilityKind kind = UtilityKind::kLinearDot;
  std::vector<double> theta;
  std::function<double(std::span<const double>, std::span<const double>)>
      custom;  // used when kind == kCustom

  double value_at(std::span<const double> x,
                  std::span<const double> arm) const;
  double value(std::span<const double> arm) const { return value_at(theta, arm); }
};

double utility(const UtilityModel& model, std::span<const double> arm);

enum class OracleKind { kConstantP, kBradleyTerry, kProbit, kExplicitMatrix };

double bradley_terry_win_prob(double u_winner, double u_loser);
double probit_win_prob(double u_winner, double u_loser);

// Simulated environment: the full matrix of duel-win probabilities.
// p[i][j] + p[j][i] = 1 and p[i][j] != 0.5 off the diagonal.
class PreferenceOracle {
 public:
  static PreferenceOracle constant_p(int n_arms, double p);
  static PreferenceOracle bradley_terry(const std::vector<double>& utilities);
  static PreferenceOracle probit(const std::vector<double>& utilities);
  static PreferenceOracle explicit_matrix(std::vector<std::vector<double>> p);

  OracleKind kind() const { return kind_; }
  int n_arms() const { return n_; }
  double param() const { return param_; }  // p for kConstantP, else 0

  double win_prob(int i, int j) const;  // p_{i,j}; throws on i == j

  // min over pairs of the winning side's probability; > 0.5 by construction.
  double min_win_prob() const;

  // 0 if `first` wins, 1 if `second` wins. Consumes exactly one uniform draw.
  int sample_winner(int first, int second, Rng& rng) const;

  // Checks row/column complement, no 0.5 entries, and (when utilities are
  // given) order consistency: p_{i,j} > 0.5 iff u_i > u_j.
  void validate(const std::vector<double>* utilities = nullptr) const;

 private:
  PreferenceOracle(OracleKind kind, int n, std::vector<double> flat,
                   double param)
      : kind_(kind), n_(n), p_(std::move(flat)), param_(param) {}

  OracleKind kind_ = OracleKind::kConstantP;
  int n_ = 0;
  std::vector<double> p_;  // n x n, row-major; diagonal unused
  double param_ = 0.0;
};

// Which problem instance to generate.
struct InstanceSpec {
  enum class Kind { kSetting1, kSetting2, kCustom };
  Kind kind = Kind::kSetting1;
  // Custom descriptor (d = 2 arms uniform on the unit circle):
  int n_arms = 0;
  OracleKind oracle = OracleKind::kConstantP;
  double p = 0.8;  // for kConstantP
};

// A fully built environment. Arm indices are relabeled after generation so
// utilities strictly decrease in arm index: arm 0 is the best arm.
struct Instance {
  ArmSet arms;
  UtilityModel util;  // hidden from policies; the harness uses it for regret
  PreferenceOracle oracle;
  std::vector<double> utilities;  // u(theta, A_i), strictly decreasing
  InstanceSpec spec;

  double utility_span() const { return utilities.front() - utilities.back(); }
};

// setting-1: 20 arms uniform on the unit circle, theta uniform on the unit
//            circle, constant-p oracle with p = 0.8.
// setting-2: 19 arms uniform on the arc {x<0, y<0}, 1 arm and theta uniform
//            on the arc {x>0, y>0}, Bradley-Terry oracle.
// Regenerates on a utility tie (bounded retries), then fails.
Instance generate_instance(const InstanceSpec& spec, Rng& rng);

// Builds an instance from explicit parts: validates distinct utilities,
// relabels arms so utilities strictly decrease, and builds the oracle on the
// relabeled indices. `explicit_p` (original labels, permuted internally) is
// required for kExplicitMatrix and ignored otherwise.
Instance make_instance(ArmSet arms, UtilityModel util, OracleKind oracle_kind,
                       double constant_p_value, InstanceSpec spec,
                       std::vector<std::vector<double>> explicit_p = {});

// Plain-text record of an instance (arm coordinates, theta, model kind,
// parameters) for replay. Round-trips exactly.
std::string serialize_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

}  // namespace ctb
