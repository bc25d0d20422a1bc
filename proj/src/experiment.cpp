#include "iwal/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>

#include "iwal/decision_tree.hpp"
#include "iwal/kernels.hpp"
#include "iwal/theory.hpp"

namespace iwal {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::loss_weighting_finite: return "loss-weighting-finite";
    case Strategy::loss_weighting_linear: return "loss-weighting-linear";
    case Strategy::bootstrap: return "bootstrap";
    case Strategy::passive: return "passive";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "loss-weighting-finite") return Strategy::loss_weighting_finite;
  if (name == "loss-weighting-linear") return Strategy::loss_weighting_linear;
  if (name == "bootstrap") return Strategy::bootstrap;
  if (name == "passive") return Strategy::passive;
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(Learner learner) {
  switch (learner) {
    case Learner::linear: return "linear";
    case Learner::finite: return "finite";
    case Learner::tree: return "tree";
  }
  return "unknown";
}

Learner parse_learner(std::string_view name) {
  if (name == "linear") return Learner::linear;
  if (name == "finite") return Learner::finite;
  if (name == "tree") return Learner::tree;
  throw ConfigError("unknown learner '" + std::string(name) + "'");
}

namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

Learner effective_learner(const ExperimentConfig& c) {
  switch (c.strategy) {
    case Strategy::loss_weighting_finite: return Learner::finite;
    case Strategy::loss_weighting_linear: return Learner::linear;
    case Strategy::bootstrap: return Learner::tree;
    case Strategy::passive: return c.learner;
  }
  return c.learner;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("seed")) throw ConfigError("config needs a 'seed' (unseeded runs are not allowed)");
  read(j, "seed", c.seed);

  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    if (!d.is_object()) throw ConfigError("'dataset' must be an object");
    read(d, "source", c.dataset.source);
    std::string path, test_path, format = "csv";
    read(d, "path", path);
    read(d, "test_path", test_path);
    read(d, "format", format);
    c.dataset.path = path;
    c.dataset.test_path = test_path;
    c.dataset.format = parse_data_format(format);
    read(d, "dimension", c.dataset.dimension);
    read(d, "noise", c.dataset.noise);
    read(d, "beta", c.dataset.beta);
    read(d, "binary", c.dataset.binary);
    read(d, "eta", c.dataset.eta);
    read(d, "epsilon", c.dataset.epsilon);
    read(d, "train_size", c.dataset.train_size);
    read(d, "test_size", c.dataset.test_size);
    read(d, "standardize", c.dataset.standardize);
  }

  std::string strategy(to_string(c.strategy)), learner(to_string(c.learner));
  read(j, "strategy", strategy);
  read(j, "learner", learner);
  c.strategy = parse_strategy(strategy);
  c.learner = parse_learner(learner);

  if (j.contains("loss")) {
    const auto& l = j.at("loss");
    std::string kind(to_string(c.loss));
    read(l, "kind", kind);
    c.loss = parse_loss_kind(kind);
    if (l.contains("range_bound")) {
      double b = 0.0;
      read(l, "range_bound", b);
      c.range_bound = b;
    }
  }
  if (j.contains("hypotheses")) {
    const auto& h = j.at("hypotheses");
    read(h, "norm_bound", c.norm_bound);
    read(h, "effective_class_size", c.effective_class_size);
    read(h, "finite_kind", c.finite.kind);
    read(h, "thresholds", c.finite.thresholds);
    read(h, "count", c.finite.count);
  }
  read(j, "delta", c.delta);
  std::string slack(to_string(c.slack));
  read(j, "slack", slack);
  try {
    c.slack = parse_slack_mode(slack);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  read(j, "slack_constant", c.slack_constant);
  if (j.contains("p_min")) {
    double p = 0.0;
    read(j, "p_min", p);
    c.p_min = p;
  }
  read(j, "replicates", c.replicates);
  read(j, "erm_every", c.erm_every);
  if (j.contains("committee")) {
    const auto& k = j.at("committee");
    read(k, "size", c.committee.size);
    read(k, "initial_fraction", c.committee.initial_fraction);
    read(k, "max_depth", c.committee.tree.max_depth);
    read(k, "min_leaf", c.committee.tree.min_leaf);
  }
  if (j.contains("solver")) {
    const auto& v = j.at("solver");
    read(v, "gap_tolerance", c.solver.gap_tolerance);
    read(v, "initial_barrier", c.solver.initial_barrier);
    read(v, "barrier_growth", c.solver.barrier_growth);
    read(v, "newton_tolerance", c.solver.newton_tolerance);
    read(v, "line_search_alpha", c.solver.line_search_alpha);
    read(v, "line_search_beta", c.solver.line_search_beta);
    read(v, "max_newton_iterations", c.solver.max_newton_iterations);
    read(v, "max_stages", c.solver.max_stages);
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json d = {{"source", dataset.source},
            {"format", std::string(iwal::to_string(dataset.format))},
            {"dimension", dataset.dimension},
            {"noise", dataset.noise},
            {"beta", dataset.beta},
            {"binary", dataset.binary},
            {"eta", dataset.eta},
            {"epsilon", dataset.epsilon},
            {"train_size", dataset.train_size},
            {"test_size", dataset.test_size},
            {"standardize", dataset.standardize}};
  if (!dataset.path.empty()) d["path"] = dataset.path.string();
  if (!dataset.test_path.empty()) d["test_path"] = dataset.test_path.string();
  json loss_json = {{"kind", std::string(iwal::to_string(loss))}};
  if (range_bound) loss_json["range_bound"] = *range_bound;
  return {{"dataset", d},
          {"strategy", std::string(iwal::to_string(strategy))},
          {"learner", std::string(iwal::to_string(learner))},
          {"loss", loss_json},
          {"hypotheses",
           {{"norm_bound", norm_bound},
            {"effective_class_size", effective_class_size},
            {"finite_kind", finite.kind},
            {"thresholds", finite.thresholds},
            {"count", finite.count}}},
          {"delta", delta},
          {"slack", std::string(iwal::to_string(slack))},
          {"slack_constant", slack_constant},
          {"p_min", query_floor()},
          {"seed", seed},
          {"replicates", replicates},
          {"erm_every", erm_every},
          {"committee",
           {{"size", committee.size},
            {"initial_fraction", committee.initial_fraction},
            {"max_depth", committee.tree.max_depth},
            {"min_leaf", committee.tree.min_leaf}}},
          {"solver",
           {{"gap_tolerance", solver.gap_tolerance},
            {"initial_barrier", solver.initial_barrier},
            {"barrier_growth", solver.barrier_growth},
            {"newton_tolerance", solver.newton_tolerance},
            {"line_search_alpha", solver.line_search_alpha},
            {"line_search_beta", solver.line_search_beta},
            {"max_newton_iterations", solver.max_newton_iterations},
            {"max_stages", solver.max_stages}}}};
}

void ExperimentConfig::validate() const {
  const auto& d = dataset;
  if (d.source == "file") {
    if (d.path.empty()) throw ConfigError("file dataset needs a 'path'");
  } else if (d.source == "sphere") {
    if (d.dimension < 2) throw ConfigError("sphere dataset needs dimension >= 2");
    if (!(d.noise >= 0.0 && d.noise <= 0.5)) throw ConfigError("noise must lie in [0, 0.5]");
  } else if (d.source == "point_mass") {
    if (d.dimension < 1) throw ConfigError("point_mass dataset needs dimension >= 1");
    if (!(d.beta > 0.0 && d.beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
  } else if (d.source == "lower_bound") {
    if (d.dimension < 2) throw ConfigError("lower_bound dataset needs dimension >= 2");
    if (!(d.epsilon > 0.0 && 2.0 * d.epsilon <= d.eta && d.eta <= 0.25)) {
      throw ConfigError("lower_bound dataset needs 0 < 2 epsilon <= eta <= 1/4");
    }
  } else {
    throw ConfigError("unknown dataset source '" + d.source + "'");
  }
  if (d.source != "file" && (d.train_size == 0 || d.test_size == 0)) {
    throw ConfigError("synthetic datasets need positive train_size and test_size");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  const double p_floor = query_floor();
  if (!(p_floor >= 0.0 && p_floor <= 1.0)) throw ConfigError("p_min must lie in [0, 1]");
  if (!(norm_bound > 0.0) || !std::isfinite(norm_bound)) throw ConfigError("norm_bound must be positive");
  if (!(effective_class_size >= 1.0)) throw ConfigError("effective_class_size must be at least 1");
  if (range_bound && !(*range_bound >= 0.0 && std::isfinite(*range_bound))) {
    throw ConfigError("loss range_bound must be finite and nonnegative");
  }
  if (!(slack_constant > 0.0) || !std::isfinite(slack_constant)) {
    throw ConfigError("slack_constant must be positive");
  }
  const auto& v = solver;
  if (!(v.gap_tolerance > 0.0) || !(v.initial_barrier > 0.0) || !(v.barrier_growth > 1.0) ||
      !(v.newton_tolerance > 0.0) || !(v.line_search_alpha > 0.0 && v.line_search_alpha < 0.5) ||
      !(v.line_search_beta > 0.0 && v.line_search_beta < 1.0) || v.max_newton_iterations == 0 ||
      v.max_stages == 0) {
    throw ConfigError("solver options out of range (need positive tolerances, barrier_growth > 1, "
                      "alpha in (0, 1/2), beta in (0, 1), positive iteration caps)");
  }
  if (replicates == 0) throw ConfigError("replicates must be positive");
  if (erm_every == 0) throw ConfigError("erm_every must be positive");
  if (committee.size < 2) throw ConfigError("committee size must be at least 2");
  if (!(committee.initial_fraction > 0.0 && committee.initial_fraction <= 1.0)) {
    throw ConfigError("committee initial_fraction must lie in (0, 1]");
  }
  if (committee.tree.min_leaf == 0) throw ConfigError("committee min_leaf must be positive");
  if (strategy == Strategy::bootstrap && !(p_floor > 0.0)) {
    throw ConfigError("bootstrap strategy needs p_min > 0");
  }
  const Learner learner_used = effective_learner(*this);
  if (learner_used == Learner::linear && loss != LossKind::logistic && loss != LossKind::squared) {
    throw ConfigError("linear learner needs a smooth loss (logistic or squared)");
  }
  if (learner_used == Learner::finite && finite.kind != "stumps" && finite.kind != "random_linear") {
    throw ConfigError("finite_kind must be 'stumps' or 'random_linear'");
  }
  if (learner_used == Learner::finite &&
      ((finite.kind == "stumps" && finite.thresholds == 0) ||
       (finite.kind == "random_linear" && finite.count == 0))) {
    throw ConfigError("finite class must have at least one member");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

Statistic summarize(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

namespace {

std::vector<LabeledExample> shuffled(std::vector<LabeledExample> data, Rng& rng) {
  for (std::size_t i = data.size(); i > 1; --i) {
    const auto j = std::min(i - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i)));
    std::swap(data[i - 1], data[j]);
  }
  return data;
}

std::vector<LabeledExample> sample_finite(const FiniteInstance& inst, std::size_t n, Rng& rng) {
  std::vector<LabeledExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample(inst, rng));
  return out;
}

}  // namespace

Split make_split(const ExperimentConfig& config, std::uint64_t seed) {
  const auto& d = config.dataset;
  Rng rng(seed);
  Split split;
  if (d.source == "file") {
    auto data = shuffled(load_dataset(d.path, d.format), rng);
    if (!d.test_path.empty()) {
      split.test = load_dataset(d.test_path, d.format);
      const std::size_t n = d.train_size == 0 ? data.size() : std::min(d.train_size, data.size());
      split.train.assign(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(n));
    } else {
      std::size_t n_train = d.train_size, n_test = d.test_size;
      if (n_train == 0 && n_test == 0) {
        n_train = data.size() / 2;
        n_test = data.size() - n_train;
      } else if (n_train == 0) {
        n_train = data.size() > n_test ? data.size() - n_test : 0;
      } else if (n_test == 0) {
        n_test = data.size() > n_train ? data.size() - n_train : 0;
      }
      if (n_train == 0 || n_test == 0 || n_train + n_test > data.size()) {
        throw ConfigError("dataset has " + std::to_string(data.size()) +
                          " rows, too few for the requested train/test split");
      }
      split.train.assign(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(n_train));
      split.test.assign(data.begin() + static_cast<std::ptrdiff_t>(n_train),
                        data.begin() + static_cast<std::ptrdiff_t>(n_train + n_test));
    }
    if (split.train.front().x.size() != split.test.front().x.size()) {
      throw DataError("train and test feature dimensions differ");
    }
  } else if (d.source == "sphere") {
    const auto inst = sphere_instance(d.dimension, d.noise, rng);
    split.train = draw(TheoryInstance{inst}, d.train_size, rng);
    split.test = draw(TheoryInstance{inst}, d.test_size, rng);
  } else if (d.source == "point_mass") {
    auto inst = point_mass_instance(d.beta, d.dimension);
    if (d.binary) {
      for (auto& atom : inst.atoms) {
        for (auto& outcome : atom.labels) outcome.label = outcome.label > -0.5 ? 1.0 : -1.0;
      }
    }
    split.train = sample_finite(inst, d.train_size, rng);
    split.test = sample_finite(inst, d.test_size, rng);
  } else if (d.source == "lower_bound") {
    const auto lb = lower_bound_instance(d.dimension, d.eta, d.epsilon, rng);
    split.train = sample_finite(lb.instance, d.train_size, rng);
    split.test = sample_finite(lb.instance, d.test_size, rng);
  } else {
    throw ConfigError("unknown dataset source '" + d.source + "'");
  }
  if (d.standardize) {
    const auto s = Standardizer::fit(split.train);
    s.apply(split.train);
    s.apply(split.test);
  }
  return split;
}

namespace {

struct Evaluation {
  double loss = 0.0;
  double error = 0.0;
};

Evaluation evaluate(const std::function<double(const Vector&)>& output,
                    const std::vector<LabeledExample>& test, const LossFunction& loss) {
  Evaluation ev;
  for (const auto& e : test) {
    const double raw = output(e.x);
    ev.loss += loss.value(loss.to_prediction(raw), e.y);
    const double label = e.y > 0.0 ? 1.0 : -1.0;
    ev.error += (raw >= 0.0 ? 1.0 : -1.0) != label ? 1.0 : 0.0;
  }
  const auto n = static_cast<double>(test.size());
  return {ev.loss / n, ev.error / n};
}

LossFunction resolve_loss(const ExperimentConfig& config, Learner learner,
                          const std::vector<LabeledExample>& train) {
  if (learner != Learner::linear) return LossFunction(config.loss, config.range_bound.value_or(1.0));
  double max_norm = 0.0;
  for (const auto& e : train) max_norm = std::max(max_norm, e.x.norm());
  const double required = std::sqrt(config.norm_bound) * max_norm;
  if (config.range_bound && *config.range_bound < required * (1.0 - 1e-12)) {
    throw ConfigError("loss range_bound " + std::to_string(*config.range_bound) +
                      " is below sqrt(norm_bound) * max ||x|| = " + std::to_string(required) +
                      "; the linear solver needs the loss unclamped on the ball");
  }
  return LossFunction(config.loss, config.range_bound.value_or(required > 0.0 ? required : 1.0));
}

FiniteClass build_finite_class(const ExperimentConfig& config,
                               const std::vector<LabeledExample>& train, std::uint64_t seed) {
  FiniteClass cls;
  const auto dim = train.front().x.size();
  if (config.finite.kind == "stumps") {
    // Thresholds on an even grid over the observed feature range; labels unused.
    for (Eigen::Index f = 0; f < dim; ++f) {
      double lo = kInfinity, hi = -kInfinity;
      for (const auto& e : train) {
        lo = std::min(lo, e.x[f]);
        hi = std::max(hi, e.x[f]);
      }
      const auto k = config.finite.thresholds;
      for (std::size_t i = 1; i <= k; ++i) {
        const double threshold = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k + 1);
        for (double polarity : {1.0, -1.0}) {
          cls.members.push_back(StumpPredictor{static_cast<std::size_t>(f), threshold, polarity});
        }
      }
    }
  } else {
    Rng rng(seed);
    for (std::size_t i = 0; i < config.finite.count; ++i) {
      Vector w(dim);
      for (Eigen::Index j = 0; j < dim; ++j) w[j] = standard_normal(rng);
      w *= std::sqrt(config.norm_bound) / w.norm();
      cls.members.push_back(LinearPredictor{w});
    }
  }
  return cls;
}

std::vector<std::size_t> checkpoints(std::size_t horizon) {
  const std::size_t every = std::max<std::size_t>(1, horizon / 100);
  std::vector<std::size_t> out;
  for (std::size_t t = every; t <= horizon; t += every) out.push_back(t);
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

// Test-set predictor for an arm at a checkpoint.
using Predictor = std::function<double(const Vector&)>;

Predictor erm_predictor(const Engine& engine) {
  const Hypothesis h = engine.erm()->hypothesis;
  return [h](const Vector& x) { return raw_output(h, x); };
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config, std::size_t replicate) {
  config.validate();
  const std::uint64_t run_seed = derive_seed(config.seed, replicate);
  const Split split = make_split(config, derive_seed(run_seed, 0));
  if (split.train.empty() || split.test.empty()) throw DataError("empty train or test split");

  const Learner learner = effective_learner(config);
  const LossFunction loss = resolve_loss(config, learner, split.train);
  const std::size_t horizon = split.train.size();
  const auto dim = static_cast<std::size_t>(split.train.front().x.size());

  std::optional<ErmProblem> problem;
  std::shared_ptr<RejectionThreshold> threshold;
  std::shared_ptr<BootstrapThreshold> bootstrap;
  SlackOptions slack{config.slack, config.delta, config.slack_constant};

  if (learner == Learner::linear) {
    problem = ErmProblem{LinearBall{dim, config.norm_bound}, loss};
  } else if (learner == Learner::finite) {
    problem = ErmProblem{build_finite_class(config, split.train, derive_seed(run_seed, 6)), loss};
  }

  switch (config.strategy) {
    case Strategy::loss_weighting_linear:
      threshold = std::make_shared<LossWeightingLinear>(LinearBall{dim, config.norm_bound}, loss,
                                                        slack, config.effective_class_size,
                                                        config.solver);
      break;
    case Strategy::loss_weighting_finite:
      threshold = std::make_shared<LossWeightingFinite>(
          std::get<FiniteClass>(problem->hypotheses), loss, slack);
      break;
    case Strategy::bootstrap: {
      CommitteeOptions options = config.committee;
      options.p_min = config.query_floor();
      const auto prefix = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(options.initial_fraction * static_cast<double>(horizon))));
      bootstrap = std::make_shared<BootstrapThreshold>(prefix, options, loss, derive_seed(run_seed, 3));
      threshold = bootstrap;
      break;
    }
    case Strategy::passive:
      threshold = std::make_shared<ConstantThreshold>(1.0);
      break;
  }

  EngineOptions active_options;
  active_options.seed = derive_seed(run_seed, 1);
  active_options.p_min = config.query_floor();
  active_options.erm_every = config.erm_every;
  active_options.solver = config.solver;
  Engine active(active_options, threshold, problem);

  // The passive arm only needs h_t at checkpoints.
  EngineOptions passive_options;
  passive_options.seed = derive_seed(run_seed, 2);
  passive_options.erm_every = horizon + 1;
  passive_options.solver = config.solver;
  Engine passive(passive_options, std::make_shared<ConstantThreshold>(1.0), problem);

  Rng active_costing(derive_seed(run_seed, 4));
  Rng passive_costing(derive_seed(run_seed, 5));
  auto tree_predictor = [&](const Engine& engine, Rng& rng, const std::vector<LabeledExample>& fallback) {
    const auto resampled = costing_resample(engine.sample(), rng);
    const auto tree = train_final(resampled, config.committee.tree, fallback);
    return Predictor([tree](const Vector& x) { return tree.predict(x); });
  };

  RunReport report;
  auto& summary = report.summary;
  summary.config = config.to_json();
  summary.seed = run_seed;
  summary.strategy = std::string(to_string(config.strategy));
  summary.horizon = horizon;

  const auto marks = checkpoints(horizon);
  std::size_t next_mark = 0;
  Evaluation active_eval, passive_eval;
  for (std::size_t i = 0; i < horizon; ++i) {
    const auto& example = split.train[i];
    const LabelOracle oracle = [&example] { return example.y; };
    active.step(example.x, oracle);
    passive.step(example.x, oracle);

    if (next_mark < marks.size() && i + 1 == marks[next_mark]) {
      ++next_mark;
      Predictor active_h, passive_h;
      if (learner == Learner::tree) {
        const std::vector<LabeledExample> none;
        active_h = tree_predictor(active, active_costing, bootstrap ? bootstrap->prefix() : none);
        passive_h = tree_predictor(passive, passive_costing, none);
      } else {
        active.refresh_hypothesis();
        passive.refresh_hypothesis();
        active_h = erm_predictor(active);
        passive_h = erm_predictor(passive);
      }
      active_eval = evaluate(active_h, split.test, loss);
      passive_eval = evaluate(passive_h, split.test, loss);
      summary.curve.push_back({i + 1, active.trace().total_queries(), active_eval.loss, passive_eval.loss});
    }
  }

  const auto arm = [horizon](const Engine& engine, const Evaluation& ev) {
    ArmSummary s;
    s.test_loss = ev.loss;
    s.test_error = ev.error;
    s.queries = engine.trace().total_queries();
    s.query_fraction = static_cast<double>(s.queries) / static_cast<double>(horizon);
    return s;
  };
  summary.active = arm(active, active_eval);
  summary.passive = arm(passive, passive_eval);
  summary.oracle_calls = active.oracle_calls();
  const SolverStats stats = active.solver_stats();
  summary.solver = {stats.solves, stats.short_circuits, stats.newton_iterations, stats.max_final_gap};
  report.trace = active.trace();
  return report;
}

CompareReport run_comparison(const ExperimentConfig& config) {
  config.validate();
  CompareReport out;
  out.runs = kernels::map_indexed<RunReport>(
      config.replicates, [&](std::size_t r) { return run_experiment(config, r); });
  std::vector<double> qf, ae, pe, al, pl, gap;
  for (const auto& run : out.runs) {
    const auto& s = run.summary;
    qf.push_back(s.active.query_fraction);
    ae.push_back(s.active.test_error);
    pe.push_back(s.passive.test_error);
    al.push_back(s.active.test_loss);
    pl.push_back(s.passive.test_loss);
    gap.push_back(s.active.test_error - s.passive.test_error);
  }
  out.query_fraction = summarize(qf);
  out.active_error = summarize(ae);
  out.passive_error = summarize(pe);
  out.active_loss = summarize(al);
  out.passive_loss = summarize(pl);
  out.error_gap = summarize(gap);
  return out;
}

}  // namespace iwal
