#include "iwal/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace iwal {

LabeledExample SphereInstance::sample(Rng& rng) const {
  Vector x(static_cast<Eigen::Index>(dimension));
  double norm = 0.0;
  while (norm == 0.0) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = standard_normal(rng);
    norm = x.norm();
  }
  x /= norm;
  double y = hidden.dot(x) >= 0.0 ? 1.0 : -1.0;
  if (bernoulli(rng, noise)) y = -y;
  return {x, y};
}

void validate(const FiniteInstance& instance) {
  if (instance.atoms.empty()) throw DomainError("instance has no atoms");
  double total = 0.0;
  for (const auto& atom : instance.atoms) {
    if (!(atom.mass >= 0.0)) throw DomainError("negative atom mass");
    total += atom.mass;
    double label_total = 0.0;
    for (const auto& outcome : atom.labels) {
      if (!(outcome.probability >= 0.0 && outcome.probability <= 1.0)) {
        throw DomainError("conditional label probability outside [0, 1]");
      }
      label_total += outcome.probability;
    }
    if (std::abs(label_total - 1.0) > 1e-12) throw DomainError("label probabilities must sum to 1");
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("atom masses must sum to 1");
}

LabeledExample sample(const FiniteInstance& instance, Rng& rng) {
  double u = uniform01(rng);
  const Atom* chosen = &instance.atoms.back();
  for (const auto& atom : instance.atoms) {
    if (u < atom.mass) {
      chosen = &atom;
      break;
    }
    u -= atom.mass;
  }
  double v = uniform01(rng);
  double label = chosen->labels.back().label;
  for (const auto& outcome : chosen->labels) {
    if (v < outcome.probability) {
      label = outcome.label;
      break;
    }
    v -= outcome.probability;
  }
  return {chosen->x, label};
}

std::vector<LabeledExample> draw(const TheoryInstance& instance, std::size_t n, Rng& rng) {
  std::vector<LabeledExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto* finite = std::get_if<FiniteInstance>(&instance)) {
      out.push_back(sample(*finite, rng));
    } else {
      out.push_back(std::get<SphereInstance>(instance).sample(rng));
    }
  }
  return out;
}

double expected_loss(const Hypothesis& h, const FiniteInstance& instance, const LossFunction& loss) {
  double total = 0.0;
  for (const auto& atom : instance.atoms) {
    const double z = predict(h, atom.x, loss);
    for (const auto& outcome : atom.labels) {
      total += atom.mass * outcome.probability * loss.value(z, outcome.label);
    }
  }
  return total;
}

double rho(const Hypothesis& f, const Hypothesis& g, const FiniteInstance& instance,
           const LossFunction& loss) {
  double total = 0.0;
  for (const auto& atom : instance.atoms) {
    total += atom.mass * kernels::max_label_deviation(predict(f, atom.x, loss),
                                                      predict(g, atom.x, loss), loss);
  }
  return total;
}

MonteCarloEstimate rho(const Hypothesis& f, const Hypothesis& g, std::span<const Vector> draws,
                       const LossFunction& loss) {
  if (draws.empty()) throw DomainError("Monte-Carlo rho needs at least one draw");
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& x : draws) {
    const double v = kernels::max_label_deviation(predict(f, x, loss), predict(g, x, loss), loss);
    sum += v;
    sum_sq += v * v;
  }
  const auto n = static_cast<double>(draws.size());
  const double mean = sum / n;
  const double var = draws.size() > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n), draws.size()};
}

bool rho_upper_check(const Hypothesis& h, const Hypothesis& h_star, const LossFunction& loss,
                     const FiniteInstance& instance) {
  const double k = slope_asymmetry(loss);
  if (!std::isfinite(k)) return true;
  const double lhs = rho(h, h_star, instance, loss);
  const double rhs = k * (expected_loss(h, instance, loss) + expected_loss(h_star, instance, loss));
  return lhs <= rhs + 1e-12;
}

DisagreementEstimate disagreement_coefficient(const Hypothesis& h_star,
                                              std::span<const Hypothesis> hypotheses,
                                              std::span<const Vector> points,
                                              std::span<const double> weights,
                                              std::span<const double> r_grid,
                                              const LossFunction& loss, kernels::Execution exec) {
  const std::vector<double> distance =
      kernels::weighted_deviation_to_center(hypotheses, h_star, points, weights, loss, exec);

  std::vector<std::size_t> order(hypotheses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return distance[a] < distance[b]; });
  std::vector<Hypothesis> ordered;
  ordered.reserve(order.size());
  for (auto i : order) ordered.push_back(hypotheses[i]);

  std::vector<std::size_t> cuts;
  cuts.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r > 0.0)) throw DomainError("radius grid entries must be positive");
    std::size_t n = 0;
    while (n < order.size() && distance[order[n]] <= r) ++n;
    cuts.push_back(n);
  }
  // Cuts follow the grid order; evaluate on a sorted copy and map back.
  std::vector<std::size_t> cut_order(cuts.size());
  std::iota(cut_order.begin(), cut_order.end(), 0);
  std::stable_sort(cut_order.begin(), cut_order.end(),
                   [&](std::size_t a, std::size_t b) { return cuts[a] < cuts[b]; });
  std::vector<std::size_t> sorted_cuts;
  for (auto i : cut_order) sorted_cuts.push_back(cuts[i]);
  const std::vector<double> sorted_sups =
      kernels::prefix_sup_deviation(ordered, h_star, points, weights, sorted_cuts, loss, exec);

  DisagreementEstimate result;
  result.rows.resize(r_grid.size());
  for (std::size_t j = 0; j < cut_order.size(); ++j) {
    const std::size_t g = cut_order[j];
    auto& row = result.rows[g];
    row.r = r_grid[g];
    row.ball_size = cuts[g];
    if (cuts[g] == 0) {
      std::ostringstream msg;
      msg << "empty ball sample at r = " << r_grid[g] << "; skipped";
      result.warnings.push_back(msg.str());
      continue;
    }
    row.theta = sorted_sups[j] / r_grid[g];
    result.sup = std::max(result.sup, *row.theta);
  }
  return result;
}

std::vector<Hypothesis> perturbation_sample(const Vector& center, std::size_t count,
                                            double norm_bound, double min_radius,
                                            double max_radius, Rng& rng) {
  if (!(min_radius > 0.0 && min_radius <= max_radius)) {
    throw DomainError("perturbation radii must satisfy 0 < min <= max");
  }
  if (count == 0) return {};
  const double limit = std::sqrt(norm_bound);
  std::vector<Hypothesis> out;
  out.reserve(count);
  out.push_back(LinearPredictor{center});
  const double log_lo = std::log(min_radius), log_hi = std::log(max_radius);
  for (std::size_t i = 1; i < count; ++i) {
    Vector v(center.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = standard_normal(rng);
    const double r = std::exp(log_lo + (log_hi - log_lo) * uniform01(rng));
    Vector w = center + (r / v.norm()) * v;
    if (w.norm() > limit) w *= limit / w.norm();
    out.push_back(LinearPredictor{w});
  }
  return out;
}

DisagreementEstimate estimate_disagreement_coefficient(const Hypothesis& h_star,
                                                       std::span<const Hypothesis> hypotheses,
                                                       std::span<const Vector> draws,
                                                       std::span<const double> r_grid,
                                                       const LossFunction& loss,
                                                       kernels::Execution exec) {
  if (draws.size() < 1000) throw DomainError("Monte-Carlo budget must be at least 1000 draws");
  const std::vector<double> weights(draws.size(), 1.0 / static_cast<double>(draws.size()));
  return disagreement_coefficient(h_star, hypotheses, draws, weights, r_grid, loss, exec);
}

DisagreementEstimate disagreement_coefficient_exact(const Hypothesis& h_star,
                                                    std::span<const Hypothesis> hypotheses,
                                                    const FiniteInstance& instance,
                                                    std::span<const double> r_grid,
                                                    const LossFunction& loss) {
  std::vector<Vector> points;
  std::vector<double> weights;
  for (const auto& atom : instance.atoms) {
    points.push_back(atom.x);
    weights.push_back(atom.mass);
  }
  return disagreement_coefficient(h_star, hypotheses, points, weights, r_grid, loss,
                                  kernels::Execution::serial);
}

SphereThetaProbe sphere_theta_probe(std::size_t dimension, double noise, double norm_bound,
                                    std::size_t hypotheses, std::size_t budget,
                                    std::span<const double> r_grid, std::uint64_t seed) {
  if (r_grid.empty()) throw DomainError("theta probe needs a nonempty r grid");
  if (!(norm_bound > 0.0)) throw DomainError("norm bound must be positive");
  Rng rng(seed);
  const auto inst = sphere_instance(dimension, noise, rng);
  const double radius = std::sqrt(norm_bound);
  // Unit-norm inputs keep |w . x| <= radius, so no prediction is clamped.
  const LossFunction loss(LossKind::logistic, radius);
  const Vector center = radius * inst.hidden;
  const double smallest = *std::min_element(r_grid.begin(), r_grid.end());
  const auto sample = perturbation_sample(center, hypotheses, norm_bound, smallest / 10.0,
                                          4.0 * radius, rng);
  std::vector<Vector> draws;
  draws.reserve(budget);
  for (std::size_t i = 0; i < budget; ++i) draws.push_back(inst.sample(rng).x);
  SphereThetaProbe probe;
  probe.estimate =
      estimate_disagreement_coefficient(LinearPredictor{center}, sample, draws, r_grid, loss);
  const auto [c0, c1] = derivative_bounds(loss);
  probe.bound = 2.0 * c1 / c0 * std::sqrt(static_cast<double>(dimension));
  return probe;
}

double safety_bound(double p_min, double class_size, double delta, std::size_t horizon) {
  if (!(p_min > 0.0 && p_min <= 1.0)) throw DomainError("p_min must lie in (0, 1]");
  if (!(class_size >= 1.0)) throw DomainError("class size must be at least 1");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (horizon == 0) throw DomainError("T must be at least 1");
  return std::sqrt(2.0) / p_min *
         std::sqrt((std::log(class_size) + std::log(2.0 / delta)) / static_cast<double>(horizon));
}

LabelComplexityBound label_complexity_bound(double theta, double slope_asymmetry,
                                            double optimal_loss, std::size_t horizon,
                                            double class_size, double delta) {
  if (!std::isfinite(theta) || !std::isfinite(slope_asymmetry)) {
    throw UnsupportedError("label complexity bound is vacuous for infinite theta or K_l");
  }
  if (!(class_size >= 1.0) || !(delta > 0.0) || horizon == 0) {
    throw DomainError("label complexity bound needs |H| >= 1, delta > 0, T >= 1");
  }
  const double t = static_cast<double>(horizon);
  const double scale = 4.0 * theta * slope_asymmetry;
  return {scale * optimal_loss * t, scale * std::sqrt(t * std::log(class_size * t / delta))};
}

double per_step_label_bound(double theta, double slope_asymmetry, double optimal_loss,
                            std::size_t horizon, double class_size, double delta,
                            double slack_constant) {
  double total = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    if (t == 1) {
      total += 1.0;
      continue;
    }
    const double d = std::sqrt(slack_constant / static_cast<double>(t - 1) *
                               std::log(2.0 * static_cast<double>(t - 1) * static_cast<double>(t) *
                                        class_size * class_size / delta));
    total += std::min(1.0, 4.0 * theta * slope_asymmetry * (optimal_loss + d));
  }
  return total;
}

LowerBoundInstance lower_bound_instance(std::size_t atoms, double eta, double epsilon, Rng& rng) {
  if (atoms < 2) throw DomainError("lower-bound instance needs at least 2 atoms");
  if (!(epsilon > 0.0 && 2.0 * epsilon <= eta && eta <= 0.25)) {
    throw DomainError("lower-bound instance needs 0 < 2 epsilon <= eta <= 1/4");
  }
  LowerBoundInstance lb;
  lb.eta = eta;
  lb.epsilon = epsilon;
  lb.beta = 2.0 * (eta + 2.0 * epsilon);
  lb.gamma = 2.0 * epsilon / lb.beta;

  const auto d = static_cast<Eigen::Index>(atoms);
  Vector u = Vector::Zero(d);
  u[0] = 1.0;
  lb.instance.atoms.push_back({Vector::Unit(d, 0), 1.0 - lb.beta, {{1.0, 1.0}}});
  const double light = lb.beta / static_cast<double>(atoms - 1);
  for (Eigen::Index i = 1; i < d; ++i) {
    const int b = bernoulli(rng, 0.5) ? 1 : -1;
    lb.bits.push_back(b);
    u[i] = b;
    const double p_pos = 0.5 + lb.gamma * b;
    lb.instance.atoms.push_back({Vector::Unit(d, i), light, {{1.0, p_pos}, {-1.0, 1.0 - p_pos}}});
  }
  lb.instance.optimal = LinearPredictor{u};
  lb.instance.optimal_loss = expected_loss(*lb.instance.optimal, lb.instance,
                                           LossFunction(LossKind::zero_one));
  return lb;
}

FiniteInstance point_mass_instance(double beta, std::size_t dimension) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("point-mass weight beta must lie in (0, 1)");
  if (dimension < 1) throw DomainError("dimension must be positive");
  const auto d = static_cast<Eigen::Index>(dimension);
  FiniteInstance inst;
  inst.atoms.push_back({Vector::Zero(d), 1.0 - beta, {{1.0, 1.0}}});
  inst.atoms.push_back({Vector::Unit(d, 0), beta, {{-1.0, 0.5}, {0.0, 0.5}}});
  Vector w = Vector::Zero(d);
  w[0] = -0.5;
  inst.optimal = LinearPredictor{w};
  inst.optimal_loss = expected_loss(*inst.optimal, inst, LossFunction(LossKind::squared, 1.0));
  return inst;
}

SphereInstance sphere_instance(std::size_t dimension, double noise, Rng& rng) {
  if (dimension < 2) throw DomainError("sphere instance needs d >= 2");
  if (!(noise >= 0.0 && noise <= 0.5)) throw DomainError("noise rate must lie in [0, 1/2]");
  SphereInstance s;
  s.dimension = dimension;
  s.noise = noise;
  s.hidden = Vector(static_cast<Eigen::Index>(dimension));
  for (Eigen::Index i = 0; i < s.hidden.size(); ++i) s.hidden[i] = standard_normal(rng);
  s.hidden.normalize();
  return s;
}

}  // namespace iwal
