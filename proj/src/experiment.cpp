#include "ctb/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ctb {
namespace {

using nlohmann::json;

const std::vector<std::string> kAlgorithmIds = {"ctb-1", "ctb-2",   "ctb-3",
                                                "thompson", "rucb", "ws-w"};

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + it.key() + "' in " + context);
    }
  }
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + key + "' in " + context);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + key + "' in " + context);
  }
}

std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

InstanceSpec parse_instance_spec(const json& obj) {
  require_keys(obj, {"type", "n_arms", "generation", "oracle"}, "instance");
  InstanceSpec spec;
  const auto type = require<std::string>(obj, "type", "instance");
  if (type == "setting-1") {
    spec.kind = InstanceSpec::Kind::kSetting1;
    require_keys(obj, {"type"}, "a built-in instance");
    return spec;
  }
  if (type == "setting-2") {
    spec.kind = InstanceSpec::Kind::kSetting2;
    require_keys(obj, {"type"}, "a built-in instance");
    return spec;
  }
  if (type != "custom") {
    throw ConfigError("instance type must be setting-1, setting-2 or custom");
  }
  spec.kind = InstanceSpec::Kind::kCustom;
  spec.n_arms = require<int>(obj, "n_arms", "instance");
  if (spec.n_arms < 2) throw ConfigError("instance n_arms must be >= 2");
  if (obj.contains("generation")) {
    const auto gen = require<std::string>(obj, "generation", "instance");
    if (gen != "uniform-circle") {
      throw ConfigError("only uniform-circle generation is supported");
    }
  }
  const json oracle =
      obj.contains("oracle") ? obj.at("oracle") : json::object();
  require_keys(oracle, {"kind", "p"}, "instance.oracle");
  const auto kind = oracle.contains("kind")
                        ? oracle.at("kind").get<std::string>()
                        : std::string("constant-p");
  if (kind == "constant-p") {
    spec.oracle = OracleKind::kConstantP;
    spec.p = oracle.contains("p") ? require<double>(oracle, "p", "instance.oracle")
                                  : 0.8;
  } else if (kind == "bradley-terry") {
    spec.oracle = OracleKind::kBradleyTerry;
    require_keys(oracle, {"kind"}, "a bradley-terry oracle");
  } else if (kind == "probit") {
    spec.oracle = OracleKind::kProbit;
    require_keys(oracle, {"kind"}, "a probit oracle");
  } else {
    throw ConfigError("oracle kind must be constant-p, bradley-terry or probit");
  }
  return spec;
}

json instance_spec_to_json(const InstanceSpec& spec) {
  json obj;
  switch (spec.kind) {
    case InstanceSpec::Kind::kSetting1:
      obj["type"] = "setting-1";
      return obj;
    case InstanceSpec::Kind::kSetting2:
      obj["type"] = "setting-2";
      return obj;
    case InstanceSpec::Kind::kCustom:
      break;
  }
  obj["type"] = "custom";
  obj["n_arms"] = spec.n_arms;
  obj["generation"] = "uniform-circle";
  json oracle;
  switch (spec.oracle) {
    case OracleKind::kConstantP:
      oracle["kind"] = "constant-p";
      oracle["p"] = spec.p;
      break;
    case OracleKind::kBradleyTerry:
      oracle["kind"] = "bradley-terry";
      break;
    case OracleKind::kProbit:
      oracle["kind"] = "probit";
      break;
    case OracleKind::kExplicitMatrix:
      throw ConfigError("explicit-matrix oracles are not configurable");
  }
  obj["oracle"] = oracle;
  return obj;
}

AlgorithmSpec parse_algorithm_spec(const json& obj, std::size_t index) {
  const std::string context = "algorithms[" + std::to_string(index) + "]";
  require_keys(obj, {"id", "q", "alpha", "likelihood", "prior_matrix"}, context);
  AlgorithmSpec alg;
  alg.id = require<std::string>(obj, "id", context);
  if (std::find(kAlgorithmIds.begin(), kAlgorithmIds.end(), alg.id) ==
      kAlgorithmIds.end()) {
    throw ConfigError("unknown algorithm id '" + alg.id + "' in " + context);
  }
  if (obj.contains("q")) alg.q = require<double>(obj, "q", context);
  if (obj.contains("alpha")) alg.alpha = require<double>(obj, "alpha", context);
  if (obj.contains("likelihood")) {
    alg.likelihood = require<std::string>(obj, "likelihood", context);
  }
  if (obj.contains("prior_matrix")) {
    alg.prior_matrix = require<std::string>(obj, "prior_matrix", context);
  }

  if (alg.id == "ctb-3") {
    if (!alg.q) throw ConfigError(context + ": ctb-3 requires q");
    if (!(*alg.q > 0.5 && *alg.q < 1.0)) {
      throw ConfigError(context + ": q must lie in (0.5, 1)");
    }
  }
  if (alg.id == "thompson") {
    if (!alg.likelihood) {
      throw ConfigError(context + ": thompson requires likelihood");
    }
    if (*alg.likelihood == "constant-q") {
      if (!alg.q) throw ConfigError(context + ": constant-q requires q");
      if (!(*alg.q > 0.5 && *alg.q < 1.0)) {
        throw ConfigError(context + ": q must lie in (0.5, 1)");
      }
    } else if (*alg.likelihood != "model") {
      throw ConfigError(context + ": likelihood must be constant-q or model");
    }
  }
  if (alg.alpha && !(*alg.alpha > 0.5)) {
    throw ConfigError(context + ": alpha must exceed 0.5");
  }
  if (alg.prior_matrix && alg.id != "ctb-2") {
    throw ConfigError(context + ": prior_matrix applies to ctb-2 only");
  }
  return alg;
}

json algorithm_spec_to_json(const AlgorithmSpec& alg) {
  json obj;
  obj["id"] = alg.id;
  if (alg.q) obj["q"] = *alg.q;
  if (alg.alpha) obj["alpha"] = *alg.alpha;
  if (alg.likelihood) obj["likelihood"] = *alg.likelihood;
  if (alg.prior_matrix) obj["prior_matrix"] = *alg.prior_matrix;
  return obj;
}

std::unique_ptr<Policy> make_policy(
    const AlgorithmSpec& alg, const Instance& inst,
    const std::shared_ptr<const CellTable>& table,
    const std::vector<std::vector<double>>* prior_matrix) {
  if (alg.id == "ctb-1") {
    return std::make_unique<CtbExplicitPolicy>(alg.id, table, CtbVariant::kCtb1);
  }
  if (alg.id == "ctb-3") {
    return std::make_unique<CtbExplicitPolicy>(alg.id, table, CtbVariant::kCtb3,
                                               alg.q);
  }
  if (alg.id == "ctb-2") {
    return std::make_unique<CtbFastPolicy>(alg.id, inst.arms.n_arms,
                                           prior_matrix);
  }
  if (alg.id == "thompson") {
    if (*alg.likelihood == "constant-q") {
      return std::make_unique<ThompsonPolicy>(alg.id, table, *alg.q);
    }
    return std::make_unique<ThompsonPolicy>(alg.id, table, inst.arms,
                                            inst.util.kind, inst.oracle.kind(),
                                            inst.oracle.param());
  }
  if (alg.id == "rucb") {
    return std::make_unique<RucbPolicy>(alg.id, inst.arms.n_arms,
                                        alg.alpha.value_or(0.51));
  }
  if (alg.id == "ws-w") {
    return std::make_unique<WsPolicy>(alg.id, inst.arms.n_arms);
  }
  throw ConfigError("unknown algorithm id '" + alg.id + "'");
}

bool needs_cell_table(const AlgorithmSpec& alg) {
  return alg.id == "ctb-1" || alg.id == "ctb-3" || alg.id == "thompson";
}

int parallelism(int replications) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CTB_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) threads = parsed;
  }
  if (threads < 1) threads = 1;
  return std::min(threads, replications);
}

void write_raw_csv(std::ostream& out,
                   const std::vector<AlgorithmResult>& results,
                   int completed_replications) {
  out << "algorithm,replication,t,first,second,outcome,instant_regret,"
         "cum_regret\n";
  for (const auto& alg : results) {
    const int reps = std::min<int>(completed_replications,
                                   static_cast<int>(alg.series.size()));
    for (int r = 0; r < reps; ++r) {
      for (const auto& step : alg.series[r].steps) {
        out << alg.id << ',' << r << ',' << step.t << ',' << step.first + 1
            << ',' << step.second + 1 << ',' << step.outcome << ','
            << fmt_double(step.instant_regret) << ','
            << fmt_double(step.cum_regret) << '\n';
      }
    }
  }
}

void write_summary_csv(std::ostream& out,
                       const std::vector<AlgorithmResult>& results) {
  out << "algorithm,t,mean_cum_regret,stderr\n";
  for (const auto& alg : results) {
    for (const auto& row : alg.aggregates) {
      out << alg.id << ',' << row.t << ',' << fmt_double(row.mean_cum_regret)
          << ',' << fmt_double(row.stderr_cum_regret) << '\n';
    }
  }
}

}  // namespace

bool operator==(const InstanceSpec& a, const InstanceSpec& b) {
  return a.kind == b.kind && a.n_arms == b.n_arms && a.oracle == b.oracle &&
         a.p == b.p;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.name == b.name && a.instance == b.instance &&
         a.algorithms == b.algorithms && a.horizon == b.horizon &&
         a.replications == b.replications && a.seed == b.seed &&
         a.regret_mode == b.regret_mode && a.output_dir == b.output_dir &&
         a.checkpoints == b.checkpoints;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(root,
               {"name", "instance", "algorithms", "horizon", "replications",
                "seed", "regret_mode", "output_dir", "checkpoints"},
               "config");
  ExperimentConfig config;
  config.name = require<std::string>(root, "name", "config");
  if (!root.contains("instance")) throw ConfigError("missing key 'instance'");
  config.instance = parse_instance_spec(root.at("instance"));

  if (!root.contains("algorithms") || !root.at("algorithms").is_array() ||
      root.at("algorithms").empty()) {
    throw ConfigError("config needs a nonempty 'algorithms' array");
  }
  for (std::size_t i = 0; i < root.at("algorithms").size(); ++i) {
    config.algorithms.push_back(
        parse_algorithm_spec(root.at("algorithms").at(i), i));
  }
  for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
    for (std::size_t j = i + 1; j < config.algorithms.size(); ++j) {
      if (config.algorithms[i].id == config.algorithms[j].id) {
        throw ConfigError("algorithm ids must be unique");
      }
    }
  }

  config.horizon = require<int>(root, "horizon", "config");
  if (config.horizon < 1) throw ConfigError("horizon must be >= 1");
  config.replications = require<int>(root, "replications", "config");
  if (config.replications < 1) throw ConfigError("replications must be >= 1");
  config.seed = require<std::uint64_t>(root, "seed", "config");
  const auto mode = require<std::string>(root, "regret_mode", "config");
  if (mode == "binary-weak") {
    config.regret_mode = RegretMode::kBinaryWeak;
  } else if (mode == "utility-weak") {
    config.regret_mode = RegretMode::kUtilityWeak;
  } else {
    throw ConfigError("regret_mode must be binary-weak or utility-weak");
  }
  config.output_dir = require<std::string>(root, "output_dir", "config");
  if (root.contains("checkpoints")) {
    config.checkpoints = require<std::vector<int>>(root, "checkpoints", "config");
    if (config.checkpoints.empty()) {
      throw ConfigError("checkpoints must not be empty");
    }
    for (int t : config.checkpoints) {
      if (t < 1 || t > config.horizon) {
        throw ConfigError("checkpoints must lie in [1, horizon]");
      }
    }
  } else {
    config.checkpoints.clear();
    for (int t = 100; t <= config.horizon; t += 100) config.checkpoints.push_back(t);
    if (config.checkpoints.empty()) config.checkpoints.push_back(config.horizon);
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  json root;
  root["name"] = config.name;
  root["instance"] = instance_spec_to_json(config.instance);
  root["algorithms"] = json::array();
  for (const auto& alg : config.algorithms) {
    root["algorithms"].push_back(algorithm_spec_to_json(alg));
  }
  root["horizon"] = config.horizon;
  root["replications"] = config.replications;
  root["seed"] = config.seed;
  root["regret_mode"] = config.regret_mode == RegretMode::kBinaryWeak
                            ? "binary-weak"
                            : "utility-weak";
  root["output_dir"] = config.output_dir;
  root["checkpoints"] = config.checkpoints;
  return root.dump(2);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::vector<double>> load_prior_matrix(const std::string& path,
                                                   int n_arms) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prior matrix file '" + path + "'");
  std::vector<std::vector<double>> matrix(n_arms, std::vector<double>(n_arms));
  for (int i = 0; i < n_arms; ++i) {
    for (int j = 0; j < n_arms; ++j) {
      if (!(in >> matrix[i][j])) {
        throw ConfigError("prior matrix file must hold n*n reals");
      }
    }
  }
  double extra;
  if (in >> extra) throw ConfigError("prior matrix file has trailing values");
  return matrix;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const int reps = config.replications;
  const std::size_t n_algs = config.algorithms.size();

  ExperimentResult result;
  result.algorithms.resize(n_algs);
  for (std::size_t a = 0; a < n_algs; ++a) {
    result.algorithms[a].id = config.algorithms[a].id;
    result.algorithms[a].series.resize(reps);
  }

  const bool any_table = std::any_of(config.algorithms.begin(),
                                     config.algorithms.end(), needs_cell_table);

  // Prior matrices can only be sized once the arm count is known; built-in
  // settings have 20 arms, custom ones carry it in the spec.
  const int n_arms = config.instance.kind == InstanceSpec::Kind::kCustom
                         ? config.instance.n_arms
                         : 20;
  std::vector<std::optional<std::vector<std::vector<double>>>> priors(n_algs);
  for (std::size_t a = 0; a < n_algs; ++a) {
    if (config.algorithms[a].prior_matrix) {
      priors[a] = load_prior_matrix(*config.algorithms[a].prior_matrix, n_arms);
    }
  }

  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string first_error;
  std::vector<std::uint8_t> replication_done(reps, 0);

  auto run_one = [&](int r) {
    Rng inst_rng(config.seed, static_cast<std::uint64_t>(r), 0);
    const Instance inst = generate_instance(config.instance, inst_rng);
    std::shared_ptr<const CellTable> table;
    if (any_table) {
      table = std::make_shared<const CellTable>(enumerate_cells_sweep(inst.arms));
    }
    for (std::size_t a = 0; a < n_algs; ++a) {
      Rng run_rng(config.seed, static_cast<std::uint64_t>(r),
                  1 + static_cast<std::uint64_t>(a));
      auto policy = make_policy(config.algorithms[a], inst, table,
                                priors[a] ? &*priors[a] : nullptr);
      result.algorithms[a].series[r] =
          run_replication(*policy, inst, config.horizon, config.regret_mode,
                          run_rng);
    }
    replication_done[r] = 1;
  };

  const int threads = parallelism(reps);
  if (threads <= 1) {
    for (int r = 0; r < reps && !failed.load(); ++r) {
      try {
        run_one(r);
      } catch (const std::exception& e) {
        failed = true;
        first_error = e.what();
      }
    }
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) {
      pool.emplace_back([&, k] {
        for (int r = k; r < reps; r += threads) {
          if (failed.load()) return;
          try {
            run_one(r);
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!failed.exchange(true)) first_error = e.what();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  int completed = 0;
  while (completed < reps && replication_done[completed]) ++completed;

  std::filesystem::create_directories(config.output_dir);
  result.raw_path = (std::filesystem::path(config.output_dir) / "raw.csv").string();
  result.summary_path =
      (std::filesystem::path(config.output_dir) / "summary.csv").string();

  {
    std::ofstream raw(result.raw_path, std::ios::binary);
    if (!raw) throw ConfigError("cannot write " + result.raw_path);
    write_raw_csv(raw, result.algorithms, completed);
  }
  if (failed.load()) {
    throw std::runtime_error("experiment failed (" + std::to_string(completed) +
                             "/" + std::to_string(reps) +
                             " replications flushed): " + first_error);
  }

  for (auto& alg : result.algorithms) {
    alg.aggregates = aggregate(alg.series, config.checkpoints);
  }
  {
    std::ofstream summary(result.summary_path, std::ios::binary);
    if (!summary) throw ConfigError("cannot write " + result.summary_path);
    write_summary_csv(summary, result.algorithms);
  }
  return result;
}

std::string enumerate_cells_listing(const ExperimentConfig& config) {
  Rng inst_rng(config.seed, 0, 0);
  const Instance inst = generate_instance(config.instance, inst_rng);
  return cell_listing(enumerate_cells_sweep(inst.arms));
}

}  // namespace ctb
