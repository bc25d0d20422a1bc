#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "iwal/bootstrap.hpp"
#include "iwal/convex_solver.hpp"
#include "iwal/dataset.hpp"
#include "iwal/engine.hpp"
#include "iwal/loss_weighting.hpp"
#include "iwal/losses.hpp"

namespace iwal {

enum class Strategy { loss_weighting_finite, loss_weighting_linear, bootstrap, passive };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

// Hypothesis family used by the passive strategy (the other strategies imply one).
enum class Learner { linear, finite, tree };

std::string_view to_string(Learner learner);
Learner parse_learner(std::string_view name);

struct DatasetConfig {
  std::string source = "sphere";  // file | sphere | point_mass | lower_bound
  std::filesystem::path path;
  std::filesystem::path test_path;  // optional for file sources
  DataFormat format = DataFormat::csv;
  std::size_t dimension = 5;
  double noise = 0.05;
  double beta = 0.1;
  bool binary = true;  // point_mass: map the 0 response to +1
  double eta = 0.2;
  double epsilon = 0.05;
  std::size_t train_size = 1000;
  std::size_t test_size = 1000;
  bool standardize = false;
};

struct FiniteClassConfig {
  std::string kind = "stumps";  // stumps | random_linear
  std::size_t thresholds = 8;   // stumps per feature and polarity
  std::size_t count = 16;       // random_linear members
};

struct ExperimentConfig {
  DatasetConfig dataset;
  Strategy strategy = Strategy::loss_weighting_linear;
  Learner learner = Learner::linear;
  LossKind loss = LossKind::logistic;
  std::optional<double> range_bound;  // derived from the data when absent
  double norm_bound = 1.0;
  double effective_class_size = 1000.0;
  FiniteClassConfig finite;
  double delta = 0.1;
  SlackMode slack = SlackMode::paper;
  double slack_constant = 8.0;  // the 8 in the paper-mode slack
  std::optional<double> p_min;  // defaults to 0.1 for bootstrap, 0 otherwise
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
  std::size_t erm_every = 1;
  CommitteeOptions committee;
  SolverOptions solver;

  // Throws ConfigError for missing or out-of-range fields. `seed` is required.
  static ExperimentConfig from_json(const nlohmann::json& j);
  // Floor on p_t actually applied: p_min, or the strategy's default.
  double query_floor() const {
    return p_min.value_or(strategy == Strategy::bootstrap ? 0.1 : 0.0);
  }

  nlohmann::json to_json() const;
  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

struct CurvePoint {
  std::size_t t = 0;
  std::size_t cum_queries = 0;
  double active_test_loss = 0.0;
  double passive_test_loss = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct ArmSummary {
  double test_loss = 0.0;
  double test_error = 0.0;
  std::size_t queries = 0;
  double query_fraction = 0.0;

  bool operator==(const ArmSummary&) const = default;
};

struct SolverSummary {
  std::size_t solves = 0;
  std::size_t short_circuits = 0;
  std::size_t newton_iterations = 0;
  double max_final_gap = 0.0;

  bool operator==(const SolverSummary&) const = default;
};

// Everything about a run except its per-step trace.
struct RunSummary {
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string strategy;
  std::size_t horizon = 0;
  ArmSummary active;
  ArmSummary passive;
  std::size_t oracle_calls = 0;
  SolverSummary solver;
  std::vector<CurvePoint> curve;

  bool operator==(const RunSummary&) const = default;
};

struct RunReport {
  RunSummary summary;
  QueryTrace trace;  // active arm
};

struct Statistic {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for one replicate

  bool operator==(const Statistic&) const = default;
};

// Mean and standard deviation, computed on the sorted values so the result
// does not depend on the order replicates finished in.
Statistic summarize(std::vector<double> values);

struct CompareReport {
  std::vector<RunReport> runs;
  Statistic query_fraction;
  Statistic active_error;
  Statistic passive_error;
  Statistic active_loss;
  Statistic passive_loss;
  Statistic error_gap;  // active minus passive test error
};

struct Split {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> test;
};

// Training stream and held-out test set for one replicate seed.
Split make_split(const ExperimentConfig& config, std::uint64_t seed);

/// One paired run: the configured strategy and the passive baseline (p = 1,
/// same learner) consume the identical training stream; test loss of both
/// arms is recorded every max(1, T/100) steps and at T.
RunReport run_experiment(const ExperimentConfig& config, std::size_t replicate = 0);

// config.replicates paired runs with seeds derived from config.seed.
CompareReport run_comparison(const ExperimentConfig& config);

}  // namespace iwal
