#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "iwal/losses.hpp"
#include "iwal/types.hpp"

namespace iwal {

// Log-barrier interior-point parameters. The run stops once the barrier's
// duality-gap bound m / t drops below gap_tolerance.
struct SolverOptions {
  double gap_tolerance = 1e-6;
  double initial_barrier = 1.0;
  double barrier_growth = 10.0;
  double newton_tolerance = 1e-10;  // on lambda^2 / 2
  double line_search_alpha = 0.25;
  double line_search_beta = 0.5;
  std::size_t max_newton_iterations = 100;  // per centering stage
  std::size_t max_stages = 40;
};

struct SolverDiagnostics {
  std::size_t stages = 0;
  std::size_t newton_iterations = 0;
  double final_gap = 0.0;
  bool short_circuited = false;
  // Objective value after each centering stage.
  std::vector<double> stage_objectives;
};

// Running totals over many solves, for run summaries.
struct SolverStats {
  std::size_t solves = 0;
  std::size_t short_circuits = 0;
  std::size_t newton_iterations = 0;
  double max_final_gap = 0.0;

  void add(const SolverDiagnostics& d) {
    ++solves;
    if (d.short_circuited) ++short_circuits;
    newton_iterations += d.newton_iterations;
    if (d.final_gap > max_final_gap) max_final_gap = d.final_gap;
  }
  void merge(const SolverStats& other) {
    solves += other.solves;
    short_circuits += other.short_circuits;
    newton_iterations += other.newton_iterations;
    if (other.max_final_gap > max_final_gap) max_final_gap = other.max_final_gap;
  }
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Vector last_iterate, SolverDiagnostics diagnostics)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        diagnostics_(std::move(diagnostics)) {}

  const Vector& last_iterate() const noexcept { return last_iterate_; }
  const SolverDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Vector last_iterate_;
  SolverDiagnostics diagnostics_;
};

// sum_i c_i * l(u . x_i, y_i), normalized loss, unclamped predictions.
struct WeightedLossObjective {
  LossFunction loss;
  std::span<const WeightedExample> examples;
};

// u . direction
struct LinearObjective {
  Vector direction;
};

// sum_i c_i * l(u . x_i, y_i) <= bound.
struct LossConstraint {
  LossFunction loss;
  std::span<const WeightedExample> examples;
  double bound = kInfinity;
};

/// minimize objective(u) s.t. ||u||^2 <= norm_bound [, constraint(u) <= 0].
struct ConvexProgram {
  std::variant<WeightedLossObjective, LinearObjective> objective;
  std::size_t dimension = 0;
  double norm_bound = 1.0;
  std::optional<LossConstraint> constraint;
  SolverOptions options;
};

struct SolveResult {
  Vector solution;
  double objective = 0.0;
  SolverDiagnostics diagnostics;
};

// Value, gradient and Hessian of sum_i c_i l(u . x_i, y_i).
double weighted_loss_value(const LossFunction& loss, std::span<const WeightedExample> examples,
                           const Vector& u);
Vector weighted_loss_gradient(const LossFunction& loss, std::span<const WeightedExample> examples,
                              const Vector& u);
Matrix weighted_loss_hessian(const LossFunction& loss, std::span<const WeightedExample> examples,
                             const Vector& u);

double objective_value(const ConvexProgram& program, const Vector& u);
bool strictly_feasible(const ConvexProgram& program, const Vector& u);

// Throws DomainError for an infeasible start, UnsupportedError for a
// nonsmooth objective or constraint, and
// SolverError when a centering stage fails to converge.
SolveResult solve(const ConvexProgram& program, const Vector& start);

// Weighted ERM over the ball, started at the origin.
SolveResult minimize_weighted_loss(const LossFunction& loss,
                                   std::span<const WeightedExample> examples,
                                   std::size_t dimension, double norm_bound,
                                   const SolverOptions& options = {});

// min u . direction over the ball intersected with an optional loss
// constraint. Short-circuits to -sqrt(norm_bound) * ||direction|| when the
// constraint holds at the ball minimizer.
SolveResult minimize_linear(const Vector& direction, double norm_bound,
                            const std::optional<LossConstraint>& constraint, const Vector& start,
                            const SolverOptions& options = {});

}  // namespace iwal
