#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "iwal/convex_solver.hpp"
#include "iwal/engine.hpp"
#include "iwal/hypotheses.hpp"
#include "iwal/kernels.hpp"
#include "iwal/losses.hpp"

namespace iwal {

enum class SlackMode { paper, optimistic };

std::string_view to_string(SlackMode mode);
SlackMode parse_slack_mode(std::string_view name);

struct SlackOptions {
  SlackMode mode = SlackMode::paper;
  double delta = 0.1;     // confidence parameter, in (0, 1)
  double constant = 8.0;  // the 8 in sqrt((8/t) ln(...))
};

/// Delta_t = sqrt((constant / t) ln(2 t (t + 1) |H|^2 / delta)); +infinity at t = 0.
double slack(std::size_t t, double class_size, double delta, double constant = 8.0);

// 1 / sqrt(t); +infinity at t = 0.
double optimistic_slack(std::size_t t);

double slack(std::size_t t, double class_size, const SlackOptions& options);

/// Indices of the members of a FiniteClass still in H_t, ascending.
class SurvivorSetFinite {
 public:
  SurvivorSetFinite() = default;
  explicit SurvivorSetFinite(std::size_t class_size);
  explicit SurvivorSetFinite(std::vector<std::size_t> members);

  std::span<const std::size_t> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::size_t index) const;
  bool subset_of(const SurvivorSetFinite& other) const;

 private:
  std::vector<std::size_t> members_;
};

// Keeps the members whose average weighted loss is within delta of the best
// survivor; `average_losses` is indexed by class member.
SurvivorSetFinite shrink_finite(const SurvivorSetFinite& survivors,
                                std::span<const double> average_losses, double delta);

// max over survivor pairs f, g and y of l(f(x), y) - l(g(x), y).
double p_finite(const Vector& x, const FiniteClass& cls, const SurvivorSetFinite& survivors,
                const LossFunction& loss,
                kernels::Execution exec = kernels::Execution::parallel);

/// Ball intersected with the most recent empirical-loss constraint:
/// { u : ||u||^2 <= norm_bound, sum_S c l(u . x, y) <= bound }.
struct SurvivorSetLinear {
  double norm_bound = 1.0;
  LossFunction loss{LossKind::logistic};
  std::span<const WeightedExample> examples;
  double bound = kInfinity;  // +infinity: no retained constraint

  bool has_constraint() const noexcept { return bound < kInfinity && !examples.empty(); }
};

// A strictly feasible point: `hint` scaled toward the origin until both
// constraints hold strictly. Throws DomainError if none of the scalings works.
Vector interior_point(const SurvivorSetLinear& survivors, const Vector& hint);

/// A(x) = min over the survivor set of u . x.
double a_of_x(const Vector& x, const SurvivorSetLinear& survivors, const Vector& hint,
              const SolverOptions& options = {}, SolverStats* stats = nullptr);

/// Largest loss spread over the survivor set, from the two solves A(x), A(-x).
/// Margin-nonincreasing losses use
///   max{ phi(A(x)) - phi(-A(-x)), phi(A(-x)) - phi(-A(x)) };
/// squared/absolute use the loss extremes over the prediction interval.
double p_linear(const Vector& x, const SurvivorSetLinear& survivors, const Vector& hint,
                const SolverOptions& options = {}, SolverStats* stats = nullptr);

// Largest loss spread for predictions ranging over [low, high] (raw outputs).
double interval_loss_spread(double low, double high, const LossFunction& loss);

/// Loss-weighting threshold over an explicit finite class.
class LossWeightingFinite final : public RejectionThreshold {
 public:
  LossWeightingFinite(FiniteClass cls, LossFunction loss, SlackOptions slack_options);

  double probability(const Vector& x, const History& history) override;
  void observe(const Vector& x, double p, std::optional<double> label) override;
  std::string name() const override { return "loss-weighting-finite"; }

  const SurvivorSetFinite& survivors() const noexcept { return survivors_; }
  // sum_{i < t} (Q_i / p_i) l(h(x_i), y_i), per member.
  const std::vector<double>& weighted_sums() const noexcept { return sums_; }
  double last_slack() const noexcept { return last_slack_; }

 private:
  FiniteClass cls_;
  LossFunction loss_;
  SlackOptions slack_;
  SurvivorSetFinite survivors_;
  std::vector<double> sums_;
  std::size_t steps_seen_ = 0;
  double last_slack_ = kInfinity;
};

/// Loss-weighting threshold over the linear ball. L*_{t-1} is the engine's
/// ERM over the whole ball, and only the constraint from step t-1 is kept.
class LossWeightingLinear final : public RejectionThreshold {
 public:
  // effective_class_size stands in for |H| inside Delta_t in paper mode.
  LossWeightingLinear(LinearBall ball, LossFunction loss, SlackOptions slack_options,
                      double effective_class_size, SolverOptions solver = {});

  double probability(const Vector& x, const History& history) override;
  std::string name() const override { return "loss-weighting-linear"; }
  SolverStats solver_stats() const override { return stats_; }

 private:
  LinearBall ball_;
  LossFunction loss_;
  SlackOptions slack_;
  double class_size_;
  SolverOptions solver_;
  SolverStats stats_;
};

}  // namespace iwal
