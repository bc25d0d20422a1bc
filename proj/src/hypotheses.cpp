#include "iwal/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iwal/kernels.hpp"

namespace iwal {
namespace {

struct OutputVisitor {
  const Vector& x;

  double operator()(const ConstantPredictor& c) const { return c.value; }

  double operator()(const LinearPredictor& l) const {
    if (l.weights.size() != x.size()) {
      throw DomainError("dimension mismatch: hypothesis has " + std::to_string(l.weights.size()) +
                        ", input has " + std::to_string(x.size()));
    }
    return l.weights.dot(x);
  }

  double operator()(const StumpPredictor& s) const {
    if (s.feature >= static_cast<std::size_t>(x.size())) {
      throw DomainError("stump feature index outside input dimension");
    }
    return x[static_cast<Eigen::Index>(s.feature)] > s.threshold ? s.polarity : -s.polarity;
  }

  double operator()(const TablePredictor& t) const {
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      if (t.points[i].size() == x.size() && t.points[i] == x) return t.outputs[i];
    }
    return t.fallback;
  }
};

}  // namespace

double raw_output(const Hypothesis& h, const Vector& x) {
  return std::visit(OutputVisitor{x}, h);
}

double predict(const Hypothesis& h, const Vector& x, const LossFunction& loss) {
  return loss.to_prediction(raw_output(h, x));
}

std::size_t class_size(const FiniteClass& cls) {
  return cls.members.size();
}

ErmResult erm_finite(const FiniteClass& cls, std::span<const WeightedExample> sample,
                     const LossFunction& loss) {
  if (cls.members.empty()) throw DomainError("finite hypothesis class is empty");
  const std::vector<double> sums = kernels::weighted_loss_sums(cls.members, sample, loss);
  const auto best = std::min_element(sums.begin(), sums.end());
  const auto index = static_cast<std::size_t>(best - sums.begin());
  return {cls.members[index], index, *best, {}};
}

ErmResult erm_linear(const LinearBall& ball, std::span<const WeightedExample> sample,
                     const LossFunction& loss, const SolverOptions& options) {
  if (ball.dimension == 0) throw DomainError("linear class needs a positive dimension");
  for (const auto& e : sample) {
    if (static_cast<std::size_t>(e.x.size()) != ball.dimension) {
      throw DomainError("sample dimension does not match the linear class");
    }
  }
  SolveResult r = minimize_weighted_loss(loss, sample, ball.dimension, ball.norm_bound, options);
  return {LinearPredictor{std::move(r.solution)}, 0, r.objective, std::move(r.diagnostics)};
}

ErmResult erm_weighted(const HypothesisClass& cls, std::span<const WeightedExample> sample,
                       const LossFunction& loss, const SolverOptions& options) {
  if (const auto* finite = std::get_if<FiniteClass>(&cls)) return erm_finite(*finite, sample, loss);
  return erm_linear(std::get<LinearBall>(cls), sample, loss, options);
}

}  // namespace iwal
