#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "iwal/convex_solver.hpp"
#include "iwal/losses.hpp"
#include "iwal/types.hpp"

namespace iwal {

struct ConstantPredictor {
  double value = 1.0;
};

struct LinearPredictor {
  Vector weights;
};

// Axis threshold: polarity if x[feature] > threshold, else -polarity.
struct StumpPredictor {
  std::size_t feature = 0;
  double threshold = 0.0;
  double polarity = 1.0;
};

// Lookup table over a finite input space; exact match on x, fallback otherwise.
struct TablePredictor {
  std::vector<Vector> points;
  std::vector<double> outputs;
  double fallback = 1.0;
};

using Hypothesis = std::variant<ConstantPredictor, LinearPredictor, StumpPredictor, TablePredictor>;

// Raw real output of h at x; throws DomainError on a dimension mismatch.
double raw_output(const Hypothesis& h, const Vector& x);

// h(x) in the loss's prediction space Z (clamped to [-B, B], or the sign for
// zero-one).
double predict(const Hypothesis& h, const Vector& x, const LossFunction& loss);

// Normalized loss of h on (x, y).
inline double loss_of(const Hypothesis& h, const Vector& x, double y, const LossFunction& loss) {
  return loss.value(predict(h, x, loss), y);
}

struct FiniteClass {
  std::vector<Hypothesis> members;
};

// { u in R^d : ||u||^2 <= norm_bound }
struct LinearBall {
  std::size_t dimension = 0;
  double norm_bound = 1.0;
};

using HypothesisClass = std::variant<FiniteClass, LinearBall>;

std::size_t class_size(const FiniteClass& cls);

struct ErmResult {
  Hypothesis hypothesis;
  std::size_t index = 0;  // member index; 0 for the linear ball
  double objective = 0.0;  // sum_S c * l(h(x), y)
  SolverDiagnostics diagnostics;
};

/// argmin_h sum_{(x,y,c) in S} c * l(h(x), y).
///
/// Finite classes are scanned exhaustively and ties go to the lowest member
/// index. The linear ball is solved by the barrier method on the unclamped
/// loss, which coincides with the clamped one whenever the loss range bound
/// covers sqrt(norm_bound) * max ||x||. An empty sample yields member 0 or the
/// zero vector.
ErmResult erm_weighted(const HypothesisClass& cls, std::span<const WeightedExample> sample,
                       const LossFunction& loss, const SolverOptions& options = {});

ErmResult erm_finite(const FiniteClass& cls, std::span<const WeightedExample> sample,
                     const LossFunction& loss);

ErmResult erm_linear(const LinearBall& ball, std::span<const WeightedExample> sample,
                     const LossFunction& loss, const SolverOptions& options = {});

}  // namespace iwal
