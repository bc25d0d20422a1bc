// iwal: run importance-weighted active learning experiments and theory probes.
//
// Exit codes: 0 success, 1 configuration or input error, 2 runtime or solver
// error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iwal/experiment.hpp"
#include "iwal/report.hpp"
#include "iwal/theory.hpp"

namespace {

using nlohmann::json;
using namespace iwal;

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> strategy;
  std::optional<double> delta;
  std::optional<double> p_min;
  std::optional<std::string> slack;
  std::optional<std::size_t> replicates;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Override the config seed");
  cmd->add_option("--strategy", o.strategy,
                  "loss-weighting-finite | loss-weighting-linear | bootstrap | passive");
  cmd->add_option("--delta", o.delta, "Confidence parameter delta");
  cmd->add_option("--pmin", o.p_min, "Floor on the query probability");
  cmd->add_option("--slack", o.slack, "Slack schedule")->check(CLI::IsMember({"paper", "optimistic"}));
}

ExperimentConfig configure(const std::string& path, const Overrides& o) {
  auto config = load_config(path);
  if (o.seed) config.seed = *o.seed;
  if (o.strategy) config.strategy = parse_strategy(*o.strategy);
  if (o.delta) config.delta = *o.delta;
  if (o.p_min) config.p_min = *o.p_min;
  if (o.slack) config.slack = parse_slack_mode(*o.slack);
  if (o.replicates) config.replicates = *o.replicates;
  config.validate();
  return config;
}

void emit_json(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot open " + out + " for writing");
  file << j.dump(2) << '\n';
  if (!file) throw std::runtime_error("write failed for " + out);
}

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse weight '" + item + "'");
    }
  }
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json instance_json(const FiniteInstance& inst) {
  json atoms = json::array();
  for (const auto& a : inst.atoms) {
    json labels = json::array();
    for (const auto& l : a.labels) labels.push_back({{"label", l.label}, {"probability", l.probability}});
    atoms.push_back({{"x", std::vector<double>(a.x.data(), a.x.data() + a.x.size())},
                     {"mass", a.mass},
                     {"labels", labels}});
  }
  return {{"atoms", atoms}, {"optimal_loss", inst.optimal_loss}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Importance-weighted active learning experiments and theory probes"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  Overrides overrides;

  auto* run = app.add_subcommand("run", "Run one paired active/passive experiment");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory");
  add_overrides(run, overrides);

  auto* compare = app.add_subcommand("compare", "Replicated paired active/passive comparison");
  compare->add_option("config", config_path, "Experiment config (JSON)")->required();
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--replicates", overrides.replicates, "Override the replicate count");
  add_overrides(compare, overrides);

  auto* probe = app.add_subcommand("probe", "Theory probes; results are printed as JSON");
  probe->require_subcommand(1);
  std::string probe_out;
  std::uint64_t probe_seed = 1;

  // rho between two linear hypotheses on a generated finite instance.
  auto* rho_cmd = probe->add_subcommand("rho", "rho(f, g) and the rho upper-bound check");
  std::string instance_kind = "lower-bound", f_text, g_text;
  std::size_t atoms = 4, dimension = 2;
  double eta = 0.2, epsilon = 0.05, beta = 0.1;
  rho_cmd->add_option("--instance", instance_kind, "lower-bound | point-mass")
      ->check(CLI::IsMember({"lower-bound", "point-mass"}));
  rho_cmd->add_option("--atoms", atoms, "Atoms of the lower-bound instance");
  rho_cmd->add_option("--dimension", dimension, "Dimension of the point-mass instance");
  rho_cmd->add_option("--eta", eta);
  rho_cmd->add_option("--epsilon", epsilon);
  rho_cmd->add_option("--beta", beta);
  rho_cmd->add_option("--f", f_text, "Comma-separated weights of f")->required();
  rho_cmd->add_option("--g", g_text, "Comma-separated weights of g")->required();
  rho_cmd->add_option("--seed", probe_seed);
  rho_cmd->add_option("--out", probe_out, "Write JSON here instead of stdout");

  auto* theta_cmd = probe->add_subcommand("theta", "Disagreement coefficient estimate on the sphere");
  double noise = 0.0, norm_bound = 1.0;
  std::size_t hypotheses = 2000, budget = 10000;
  std::string radii_text = "0.005,0.01,0.02,0.05,0.1,0.2";
  theta_cmd->add_option("--dimension", dimension, "Sphere dimension (>= 2)");
  theta_cmd->add_option("--noise", noise);
  theta_cmd->add_option("--norm-bound", norm_bound, "Squared norm bound of the linear class");
  theta_cmd->add_option("--hypotheses", hypotheses, "Size of the sampled hypothesis ball");
  theta_cmd->add_option("--budget", budget, "Monte-Carlo draws of x (>= 1000)");
  theta_cmd->add_option("--radii", radii_text, "Comma-separated r grid");
  theta_cmd->add_option("--seed", probe_seed);
  theta_cmd->add_option("--out", probe_out);

  auto* lb_cmd = probe->add_subcommand("lower-bound-gen", "Generate the hard lower-bound instance");
  lb_cmd->add_option("--atoms", atoms, "Number of atoms d (>= 2)");
  lb_cmd->add_option("--eta", eta);
  lb_cmd->add_option("--epsilon", epsilon);
  lb_cmd->add_option("--seed", probe_seed);
  lb_cmd->add_option("--out", probe_out);

  auto* bounds_cmd = probe->add_subcommand("bounds", "Deviation and label complexity bounds");
  double p_min = 0.5, class_size = 8, delta = 0.1, theta = 1.0, k_l = 1.0, optimal_loss = 0.0;
  std::size_t horizon = 1000;
  bounds_cmd->add_option("--pmin", p_min);
  bounds_cmd->add_option("--class-size", class_size);
  bounds_cmd->add_option("--delta", delta);
  bounds_cmd->add_option("--horizon", horizon);
  bounds_cmd->add_option("--theta", theta);
  bounds_cmd->add_option("--slope-asymmetry", k_l);
  bounds_cmd->add_option("--optimal-loss", optimal_loss);
  bounds_cmd->add_option("--out", probe_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      const auto config = configure(config_path, overrides);
      const auto report = run_experiment(config);
      emit_curves(report, out_dir);
      const auto& s = report.summary;
      std::printf("%s: T=%zu queries=%zu (%.3f) active error %.4f passive error %.4f -> %s\n",
                  s.strategy.c_str(), s.horizon, s.active.queries, s.active.query_fraction,
                  s.active.test_error, s.passive.test_error, out_dir.c_str());
    } else if (*compare) {
      const auto config = configure(config_path, overrides);
      const auto report = run_comparison(config);
      emit_comparison(report, out_dir);
      std::printf("%zu replicates: query fraction %.3f +- %.3f, active error %.4f, passive error %.4f, "
                  "gap %.4f -> %s\n",
                  report.runs.size(), report.query_fraction.mean, report.query_fraction.stddev,
                  report.active_error.mean, report.passive_error.mean, report.error_gap.mean,
                  out_dir.c_str());
    } else if (*rho_cmd) {
      Rng rng(probe_seed);
      FiniteInstance inst;
      std::optional<LossFunction> loss;
      if (instance_kind == "lower-bound") {
        inst = lower_bound_instance(atoms, eta, epsilon, rng).instance;
        loss = LossFunction(LossKind::zero_one);
      } else {
        inst = point_mass_instance(beta, dimension);
        loss = LossFunction(LossKind::squared, 1.0);
      }
      const Hypothesis f = LinearPredictor{parse_vector(f_text)};
      const Hypothesis g = LinearPredictor{parse_vector(g_text)};
      json result = {{"instance", instance_kind},
                     {"loss", std::string(to_string(loss->kind()))},
                     {"rho", rho(f, g, inst, *loss)},
                     {"slope_asymmetry", slope_asymmetry(*loss)},
                     {"f_loss", expected_loss(f, inst, *loss)},
                     {"g_loss", expected_loss(g, inst, *loss)}};
      if (inst.optimal) {
        result["optimal_loss"] = inst.optimal_loss;
        result["rho_upper_check"] = {{"f", rho_upper_check(f, *inst.optimal, *loss, inst)},
                                     {"g", rho_upper_check(g, *inst.optimal, *loss, inst)}};
      }
      emit_json(result, probe_out);
    } else if (*theta_cmd) {
      const Vector radii = parse_vector(radii_text);
      const std::vector<double> grid(radii.data(), radii.data() + radii.size());
      const auto probe = sphere_theta_probe(dimension, noise, norm_bound, hypotheses, budget, grid,
                                            probe_seed);
      const auto& est = probe.estimate;
      json rows = json::array();
      for (const auto& row : est.rows) {
        rows.push_back({{"r", row.r}, {"ball_size", row.ball_size}, {"theta", optional_json(row.theta)}});
      }
      emit_json({{"dimension", dimension},
                 {"rows", rows},
                 {"sup", est.sup},
                 {"warnings", est.warnings},
                 {"bound", probe.bound},
                 {"note", "finite hypothesis sample: theta estimates are lower estimates"}},
                probe_out);
    } else if (*lb_cmd) {
      Rng rng(probe_seed);
      const auto lb = lower_bound_instance(atoms, eta, epsilon, rng);
      json j = instance_json(lb.instance);
      j["eta"] = lb.eta;
      j["epsilon"] = lb.epsilon;
      j["beta"] = lb.beta;
      j["gamma"] = lb.gamma;
      j["bits"] = lb.bits;
      emit_json(j, probe_out);
    } else if (*bounds_cmd) {
      json j = {{"safety_bound", safety_bound(p_min, class_size, delta, horizon)}};
      const auto lc = label_complexity_bound(theta, k_l, optimal_loss, horizon, class_size, delta);
      j["label_complexity"] = {{"linear_term", lc.linear_term},
                               {"sublinear_term", lc.sublinear_term},
                               {"total", lc.total()},
                               {"note", "sublinear term reported with constant 1"}};
      j["per_step_label_bound"] = per_step_label_bound(theta, k_l, optimal_loss, horizon, class_size, delta);
      emit_json(j, probe_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (after " << e.diagnostics().newton_iterations
              << " Newton iterations)\n";
    return kRuntimeError;
  } catch (const DomainError& e) {
    // Probe arguments go straight into the theory functions, so a domain
    // violation there is bad input rather than a failed run.
    std::cerr << "error: " << e.what() << '\n';
    return *probe ? kConfigError : kRuntimeError;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
