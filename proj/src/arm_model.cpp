#include "ctb/arm_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ctb {
namespace {

constexpr int kMaxGenerationRetries = 100;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::vector<double> circle_point(double angle) {
  return {std::cos(angle), std::sin(angle)};
}

double min_utility_gap(const std::vector<double>& utilities) {
  std::vector<double> sorted = utilities;
  std::sort(sorted.begin(), sorted.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    gap = std::min(gap, sorted[i] - sorted[i - 1]);
  }
  return gap;
}

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw ConfigError("instance record: bad number '" + tok + "'");
  }
  return v;
}

}  // namespace

void ArmSet::validate() const {
  if (n_arms < 2) throw ConfigError("arm set needs at least 2 arms");
  if (static_cast<int>(features.size()) != n_arms) {
    throw ConfigError("arm count does not match feature list");
  }
  for (const auto& f : features) {
    if (static_cast<int>(f.size()) != dim) {
      throw ConfigError("arm feature dimension mismatch");
    }
  }
  for (int i = 0; i < n_arms; ++i) {
    for (int j = i + 1; j < n_arms; ++j) {
      if (features[i] == features[j]) {
        throw ConfigError("arm feature vectors must be pairwise distinct");
      }
    }
  }
}

double UtilityModel::value_at(std::span<const double> x,
                              std::span<const double> arm) const {
  if (kind == UtilityKind::kCustom) return custom(x, arm);
  if (x.size() != arm.size()) {
    throw ConfigError("utility: preference/arm dimension mismatch");
  }
  return dot(x, arm);
}

double utility(const UtilityModel& model, std::span<const double> arm) {
  return model.value(arm);
}

double bradley_terry_win_prob(double u_winner, double u_loser) {
  // exp(u_i) / (exp(u_i) + exp(u_j)), computed as a logistic of the gap.
  return 1.0 / (1.0 + std::exp(u_loser - u_winner));
}

double probit_win_prob(double u_winner, double u_loser) {
  return 0.5 * std::erfc(-(u_winner - u_loser) / std::numbers::sqrt2);
}

PreferenceOracle PreferenceOracle::constant_p(int n_arms, double p) {
  if (n_arms < 2) throw ConfigError("oracle needs at least 2 arms");
  if (!(p > 0.5 && p <= 1.0)) {
    throw ConfigError("constant-p oracle requires p in (0.5, 1]");
  }
  std::vector<double> flat(static_cast<std::size_t>(n_arms) * n_arms, 0.0);
  for (int i = 0; i < n_arms; ++i) {
    for (int j = i + 1; j < n_arms; ++j) {
      flat[i * n_arms + j] = p;
      flat[j * n_arms + i] = 1.0 - p;
    }
  }
  return PreferenceOracle(OracleKind::kConstantP, n_arms, std::move(flat), p);
}

PreferenceOracle PreferenceOracle::bradley_terry(
    const std::vector<double>& utilities) {
  const int n = static_cast<int>(utilities.size());
  if (n < 2) throw ConfigError("oracle needs at least 2 arms");
  std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double pij = bradley_terry_win_prob(utilities[i], utilities[j]);
      flat[i * n + j] = pij;
      flat[j * n + i] = 1.0 - pij;
    }
  }
  PreferenceOracle oracle(OracleKind::kBradleyTerry, n, std::move(flat), 0.0);
  oracle.validate(&utilities);
  return oracle;
}

PreferenceOracle PreferenceOracle::probit(
    const std::vector<double>& utilities) {
  const int n = static_cast<int>(utilities.size());
  if (n < 2) throw ConfigError("oracle needs at least 2 arms");
  std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double pij = probit_win_prob(utilities[i], utilities[j]);
      flat[i * n + j] = pij;
      flat[j * n + i] = 1.0 - pij;
    }
  }
  PreferenceOracle oracle(OracleKind::kProbit, n, std::move(flat), 0.0);
  oracle.validate(&utilities);
  return oracle;
}

PreferenceOracle PreferenceOracle::explicit_matrix(
    std::vector<std::vector<double>> p) {
  const int n = static_cast<int>(p.size());
  if (n < 2) throw ConfigError("oracle needs at least 2 arms");
  std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(p[i].size()) != n) {
      throw ConfigError("explicit oracle matrix must be square");
    }
    for (int j = 0; j < n; ++j) flat[i * n + j] = p[i][j];
  }
  PreferenceOracle oracle(OracleKind::kExplicitMatrix, n, std::move(flat), 0.0);
  oracle.validate();
  return oracle;
}

double PreferenceOracle::win_prob(int i, int j) const {
  if (i == j) throw InvalidPairError("win_prob requires two distinct arms");
  return p_[static_cast<std::size_t>(i) * n_ + j];
}

double PreferenceOracle::min_win_prob() const {
  double p = 1.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      p = std::min(p, std::max(win_prob(i, j), win_prob(j, i)));
    }
  }
  return p;
}

int PreferenceOracle::sample_winner(int first, int second, Rng& rng) const {
  if (first == second) {
    throw InvalidPairError("sample_winner requires two distinct arms");
  }
  return rng.uniform01() < win_prob(first, second) ? 0 : 1;
}

void PreferenceOracle::validate(const std::vector<double>* utilities) const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const double pij = win_prob(i, j);
      const double pji = win_prob(j, i);
      if (pij + pji != 1.0) {
        throw ConfigError("oracle matrix rows must satisfy p_ij + p_ji = 1");
      }
      if (pij == 0.5) {
        throw ConfigError("oracle forbids p_ij = 0.5 for distinct arms");
      }
      if (pij < 0.0 || pij > 1.0) {
        throw ConfigError("oracle probabilities must lie in [0, 1]");
      }
      if (utilities != nullptr) {
        const bool order = (*utilities)[i] > (*utilities)[j];
        if ((pij > 0.5) != order) {
          throw ConfigError("oracle inconsistent with the utility order");
        }
      }
    }
  }
}

Instance make_instance(ArmSet arms, UtilityModel util, OracleKind oracle_kind,
                       double constant_p_value, InstanceSpec spec,
                       std::vector<std::vector<double>> explicit_p) {
  arms.validate();
  std::vector<double> utilities(arms.n_arms);
  for (int i = 0; i < arms.n_arms; ++i) utilities[i] = util.value(arms.features[i]);
  if (min_utility_gap(utilities) <= kUtilityGapTolerance) {
    throw ConfigError("arm utilities must be pairwise distinct");
  }

  // Relabel so u(theta, A_0) > u(theta, A_1) > ... ; policies only ever see
  // the relabeled opaque indices.
  std::vector<int> order(arms.n_arms);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return utilities[a] > utilities[b]; });

  ArmSet relabeled;
  relabeled.n_arms = arms.n_arms;
  relabeled.dim = arms.dim;
  std::vector<double> sorted_utilities(arms.n_arms);
  for (int i = 0; i < arms.n_arms; ++i) {
    relabeled.features.push_back(arms.features[order[i]]);
    sorted_utilities[i] = utilities[order[i]];
  }

  PreferenceOracle oracle = [&] {
    switch (oracle_kind) {
      case OracleKind::kConstantP:
        return PreferenceOracle::constant_p(arms.n_arms, constant_p_value);
      case OracleKind::kBradleyTerry:
        return PreferenceOracle::bradley_terry(sorted_utilities);
      case OracleKind::kProbit:
        return PreferenceOracle::probit(sorted_utilities);
      case OracleKind::kExplicitMatrix: {
        if (static_cast<int>(explicit_p.size()) != arms.n_arms) {
          throw ConfigError("explicit oracle matrix size mismatch");
        }
        std::vector<std::vector<double>> permuted(
            arms.n_arms, std::vector<double>(arms.n_arms, 0.0));
        for (int i = 0; i < arms.n_arms; ++i) {
          for (int j = 0; j < arms.n_arms; ++j) {
            permuted[i][j] = explicit_p[order[i]][order[j]];
          }
        }
        return PreferenceOracle::explicit_matrix(std::move(permuted));
      }
    }
    throw ConfigError("unknown oracle kind");
  }();
  oracle.validate(&sorted_utilities);

  return Instance{std::move(relabeled), std::move(util), std::move(oracle),
                  std::move(sorted_utilities), spec};
}

Instance generate_instance(const InstanceSpec& spec, Rng& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
    ArmSet arms;
    arms.dim = 2;
    UtilityModel util;
    OracleKind oracle_kind = OracleKind::kConstantP;
    double p = 0.8;

    switch (spec.kind) {
      case InstanceSpec::Kind::kSetting1:
        arms.n_arms = 20;
        for (int i = 0; i < arms.n_arms; ++i) {
          arms.features.push_back(circle_point(rng.uniform(0.0, two_pi)));
        }
        util.theta = circle_point(rng.uniform(0.0, two_pi));
        oracle_kind = OracleKind::kConstantP;
        p = 0.8;
        break;
      case InstanceSpec::Kind::kSetting2:
        arms.n_arms = 20;
        for (int i = 0; i < 19; ++i) {
          arms.features.push_back(
              circle_point(rng.uniform(std::numbers::pi, 1.5 * std::numbers::pi)));
        }
        arms.features.push_back(
            circle_point(rng.uniform(0.0, 0.5 * std::numbers::pi)));
        util.theta = circle_point(rng.uniform(0.0, 0.5 * std::numbers::pi));
        oracle_kind = OracleKind::kBradleyTerry;
        break;
      case InstanceSpec::Kind::kCustom:
        if (spec.n_arms < 2) throw ConfigError("custom instance needs n_arms >= 2");
        arms.n_arms = spec.n_arms;
        for (int i = 0; i < arms.n_arms; ++i) {
          arms.features.push_back(circle_point(rng.uniform(0.0, two_pi)));
        }
        util.theta = circle_point(rng.uniform(0.0, two_pi));
        oracle_kind = spec.oracle;
        p = spec.p;
        break;
    }

    try {
      return make_instance(std::move(arms), std::move(util), oracle_kind, p,
                           spec);
    } catch (const ConfigError&) {
      // Utility tie or duplicate arm (probability zero under continuous
      // generation); redraw.
      continue;
    }
  }
  throw ConfigError("failed to generate an instance with distinct utilities");
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "ctb-instance v1\n";
  out << "n " << inst.arms.n_arms << " d " << inst.arms.dim << "\n";
  out << "theta";
  for (double v : inst.util.theta) out << ' ' << fmt(v);
  out << "\n";
  switch (inst.oracle.kind()) {
    case OracleKind::kConstantP:
      out << "oracle constant-p " << fmt(inst.oracle.param()) << "\n";
      break;
    case OracleKind::kBradleyTerry:
      out << "oracle bradley-terry\n";
      break;
    case OracleKind::kProbit:
      out << "oracle probit\n";
      break;
    case OracleKind::kExplicitMatrix: {
      out << "oracle explicit-matrix";
      for (int i = 0; i < inst.arms.n_arms; ++i) {
        for (int j = 0; j < inst.arms.n_arms; ++j) {
          out << ' ' << fmt(i == j ? 0.0 : inst.oracle.win_prob(i, j));
        }
      }
      out << "\n";
      break;
    }
  }
  for (const auto& arm : inst.arms.features) {
    out << "arm";
    for (double v : arm) out << ' ' << fmt(v);
    out << "\n";
  }
  return out.str();
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "ctb-instance v1") {
    throw ConfigError("instance record: bad header");
  }

  auto tokens = [](const std::string& s) {
    std::istringstream ts(s);
    std::vector<std::string> toks;
    std::string t;
    while (ts >> t) toks.push_back(t);
    return toks;
  };

  if (!std::getline(in, line)) throw ConfigError("instance record: truncated");
  auto dims = tokens(line);
  if (dims.size() != 4 || dims[0] != "n" || dims[2] != "d") {
    throw ConfigError("instance record: bad dimension line");
  }
  const int n = static_cast<int>(parse_double(dims[1]));
  const int d = static_cast<int>(parse_double(dims[3]));

  if (!std::getline(in, line)) throw ConfigError("instance record: truncated");
  auto theta_toks = tokens(line);
  if (theta_toks.empty() || theta_toks[0] != "theta") {
    throw ConfigError("instance record: missing theta");
  }
  UtilityModel util;
  for (std::size_t k = 1; k < theta_toks.size(); ++k) {
    util.theta.push_back(parse_double(theta_toks[k]));
  }

  if (!std::getline(in, line)) throw ConfigError("instance record: truncated");
  auto oracle_toks = tokens(line);
  if (oracle_toks.size() < 2 || oracle_toks[0] != "oracle") {
    throw ConfigError("instance record: missing oracle");
  }
  OracleKind kind;
  double p = 0.8;
  std::vector<std::vector<double>> matrix;
  if (oracle_toks[1] == "constant-p") {
    kind = OracleKind::kConstantP;
    p = parse_double(oracle_toks.at(2));
  } else if (oracle_toks[1] == "bradley-terry") {
    kind = OracleKind::kBradleyTerry;
  } else if (oracle_toks[1] == "probit") {
    kind = OracleKind::kProbit;
  } else if (oracle_toks[1] == "explicit-matrix") {
    kind = OracleKind::kExplicitMatrix;
    if (oracle_toks.size() != 2 + static_cast<std::size_t>(n) * n) {
      throw ConfigError("instance record: bad oracle matrix");
    }
    matrix.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        matrix[i][j] = parse_double(oracle_toks[2 + i * n + j]);
      }
    }
  } else {
    throw ConfigError("instance record: unknown oracle kind");
  }

  ArmSet arms;
  arms.n_arms = n;
  arms.dim = d;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto toks = tokens(line);
    if (toks[0] != "arm" || static_cast<int>(toks.size()) != d + 1) {
      throw ConfigError("instance record: bad arm line");
    }
    std::vector<double> arm;
    for (int k = 1; k <= d; ++k) arm.push_back(parse_double(toks[k]));
    arms.features.push_back(std::move(arm));
  }
  if (static_cast<int>(arms.features.size()) != n) {
    throw ConfigError("instance record: arm count mismatch");
  }

  InstanceSpec spec;
  spec.kind = InstanceSpec::Kind::kCustom;
  spec.n_arms = n;
  spec.oracle = kind;
  spec.p = p;
  return make_instance(std::move(arms), std::move(util), kind, p, spec,
                       std::move(matrix));
}

}  // namespace ctb
