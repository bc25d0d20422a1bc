#include "iwal/loss_weighting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iwal {

std::string_view to_string(SlackMode mode) {
  return mode == SlackMode::paper ? "paper" : "optimistic";
}

SlackMode parse_slack_mode(std::string_view name) {
  if (name == "paper") return SlackMode::paper;
  if (name == "optimistic") return SlackMode::optimistic;
  throw ConfigError("unknown slack mode '" + std::string(name) + "' (expected paper|optimistic)");
}

double slack(std::size_t t, double class_size, double delta, double constant) {
  if (!(class_size >= 1.0)) throw DomainError("class size must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(constant > 0.0)) throw DomainError("slack constant must be positive");
  if (t == 0) return kInfinity;
  const double td = static_cast<double>(t);
  const double log_term = std::log(2.0) + std::log(td) + std::log(td + 1.0) +
                          2.0 * std::log(class_size) - std::log(delta);
  return std::sqrt(constant / td * log_term);
}

double optimistic_slack(std::size_t t) {
  return t == 0 ? kInfinity : 1.0 / std::sqrt(static_cast<double>(t));
}

double slack(std::size_t t, double class_size, const SlackOptions& options) {
  if (options.mode == SlackMode::optimistic) return optimistic_slack(t);
  return slack(t, class_size, options.delta, options.constant);
}

SurvivorSetFinite::SurvivorSetFinite(std::size_t class_size) : members_(class_size) {
  for (std::size_t i = 0; i < class_size; ++i) members_[i] = i;
}

SurvivorSetFinite::SurvivorSetFinite(std::vector<std::size_t> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool SurvivorSetFinite::contains(std::size_t index) const {
  return std::binary_search(members_.begin(), members_.end(), index);
}

bool SurvivorSetFinite::subset_of(const SurvivorSetFinite& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

SurvivorSetFinite shrink_finite(const SurvivorSetFinite& survivors,
                                std::span<const double> average_losses, double delta) {
  if (survivors.size() == 0 || delta == kInfinity) return survivors;
  double best = kInfinity;
  for (auto i : survivors.members()) best = std::min(best, average_losses[i]);
  std::vector<std::size_t> kept;
  kept.reserve(survivors.size());
  for (auto i : survivors.members()) {
    if (average_losses[i] <= best + delta) kept.push_back(i);
  }
  return SurvivorSetFinite(std::move(kept));
}

double p_finite(const Vector& x, const FiniteClass& cls, const SurvivorSetFinite& survivors,
                const LossFunction& loss, kernels::Execution exec) {
  std::vector<double> z;
  z.reserve(survivors.size());
  for (auto i : survivors.members()) z.push_back(predict(cls.members[i], x, loss));
  return kernels::loss_spread(z, loss, exec);
}

Vector interior_point(const SurvivorSetLinear& survivors, const Vector& hint) {
  ConvexProgram probe{LinearObjective{Vector::Zero(hint.size())}, static_cast<std::size_t>(hint.size()),
                      survivors.norm_bound, std::nullopt, {}};
  if (survivors.has_constraint()) {
    probe.constraint = LossConstraint{survivors.loss, survivors.examples, survivors.bound};
  }
  for (double scale : {1.0, 1.0 - 1e-9, 1.0 - 1e-6, 1.0 - 1e-4, 0.99, 0.9, 0.5, 0.0}) {
    Vector u = scale * hint;
    if (strictly_feasible(probe, u)) return u;
  }
  throw DomainError("no strictly feasible point found for the survivor set");
}

double a_of_x(const Vector& x, const SurvivorSetLinear& survivors, const Vector& hint,
              const SolverOptions& options, SolverStats* stats) {
  std::optional<LossConstraint> constraint;
  if (survivors.has_constraint()) {
    constraint = LossConstraint{survivors.loss, survivors.examples, survivors.bound};
  }
  // minimize_linear short-circuits before it needs the start.
  const Vector ball_optimum =
      x.norm() > 0.0 ? Vector((-std::sqrt(survivors.norm_bound) / x.norm()) * x) : Vector(x);
  const bool needs_start =
      constraint && x.norm() > 0.0 &&
      weighted_loss_value(constraint->loss, constraint->examples, ball_optimum) > constraint->bound;
  const Vector start = needs_start ? interior_point(survivors, hint) : Vector::Zero(x.size());
  SolveResult r = minimize_linear(x, survivors.norm_bound, constraint, start, options);
  if (stats) stats->add(r.diagnostics);
  return r.objective;
}

double interval_loss_spread(double low, double high, const LossFunction& loss) {
  const double za = loss.to_prediction(low);
  const double zb = loss.to_prediction(high);
  if (loss.is_margin_nonincreasing()) {
    // y = +1 and y = -1 cases of the closed form.
    return std::max(loss.phi(za) - loss.phi(zb), loss.phi(-zb) - loss.phi(-za));
  }
  double spread = 0.0;
  for (double y : {1.0, -1.0}) {
    const double at_a = loss.value(za, y), at_b = loss.value(zb, y);
    const double inner = loss.value(std::clamp(y, za, zb), y);
    spread = std::max(spread, std::max(at_a, at_b) - std::min({at_a, at_b, inner}));
  }
  return spread;
}

double p_linear(const Vector& x, const SurvivorSetLinear& survivors, const Vector& hint,
                const SolverOptions& options, SolverStats* stats) {
  if (x.norm() == 0.0) return 0.0;
  const double low = a_of_x(x, survivors, hint, options, stats);
  const double high = -a_of_x(-x, survivors, hint, options, stats);
  double p = interval_loss_spread(low, std::max(low, high), survivors.loss);
  if (p < 0.0 && p >= -1e-9) p = 0.0;
  if (p > 1.0 && p <= 1.0 + 1e-9) p = 1.0;
  return p;
}

LossWeightingFinite::LossWeightingFinite(FiniteClass cls, LossFunction loss,
                                         SlackOptions slack_options)
    : cls_(std::move(cls)),
      loss_(loss),
      slack_(slack_options),
      survivors_(cls_.members.size()),
      sums_(cls_.members.size(), 0.0) {
  if (cls_.members.empty()) throw DomainError("finite hypothesis class is empty");
}

double LossWeightingFinite::probability(const Vector& x, const History& history) {
  const std::size_t prior = history.steps;
  if (prior >= 1 && prior != steps_seen_) {
    std::vector<double> averages(sums_.size());
    for (std::size_t i = 0; i < sums_.size(); ++i) averages[i] = sums_[i] / static_cast<double>(prior);
    last_slack_ = slack(prior, static_cast<double>(cls_.members.size()), slack_);
    survivors_ = shrink_finite(survivors_, averages, last_slack_);
    steps_seen_ = prior;
  }
  return p_finite(x, cls_, survivors_, loss_, kernels::Execution::serial);
}

void LossWeightingFinite::observe(const Vector& x, double p, std::optional<double> label) {
  if (!label) return;
  for (std::size_t i = 0; i < cls_.members.size(); ++i) {
    sums_[i] += loss_of(cls_.members[i], x, *label, loss_) / p;
  }
}

LossWeightingLinear::LossWeightingLinear(LinearBall ball, LossFunction loss,
                                         SlackOptions slack_options, double effective_class_size,
                                         SolverOptions solver)
    : ball_(ball),
      loss_(loss),
      slack_(slack_options),
      class_size_(effective_class_size),
      solver_(solver) {
  if (!loss_.is_smooth()) {
    throw UnsupportedError("linear loss-weighting needs a smooth loss (logistic or squared)");
  }
  if (!(class_size_ >= 1.0)) throw DomainError("effective class size must be at least 1");
}

double LossWeightingLinear::probability(const Vector& x, const History& history) {
  if (static_cast<std::size_t>(x.size()) != ball_.dimension) {
    throw DomainError("input dimension does not match the linear class");
  }
  if (x.norm() == 0.0) return 0.0;
  SurvivorSetLinear survivors{ball_.norm_bound, loss_, history.sample, kInfinity};
  Vector hint = Vector::Zero(x.size());
  if (history.steps >= 1 && !history.sample.empty()) {
    if (history.erm == nullptr) {
      throw ContractViolation("linear loss-weighting needs the engine's running ERM");
    }
    const double delta = slack(history.steps, class_size_, slack_);
    survivors.bound = history.erm->objective + static_cast<double>(history.steps) * delta;
    hint = std::get<LinearPredictor>(history.erm->hypothesis).weights;
  }
  return p_linear(x, survivors, hint, solver_, &stats_);
}

}  // namespace iwal
