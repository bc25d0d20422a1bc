#include "iwal/convex_solver.hpp"

#include <cmath>
#include <string>

namespace iwal {

double weighted_loss_value(const LossFunction& loss, std::span<const WeightedExample> examples,
                           const Vector& u) {
  double total = 0.0;
  for (const auto& e : examples) total += e.weight * loss.value(u.dot(e.x), e.y);
  return total;
}

Vector weighted_loss_gradient(const LossFunction& loss, std::span<const WeightedExample> examples,
                              const Vector& u) {
  Vector g = Vector::Zero(u.size());
  for (const auto& e : examples) g += (e.weight * loss.derivative(u.dot(e.x), e.y)) * e.x;
  return g;
}

Matrix weighted_loss_hessian(const LossFunction& loss, std::span<const WeightedExample> examples,
                             const Vector& u) {
  Matrix h = Matrix::Zero(u.size(), u.size());
  for (const auto& e : examples) {
    h.selfadjointView<Eigen::Lower>().rankUpdate(e.x,
                                                 e.weight * loss.second_derivative(u.dot(e.x), e.y));
  }
  return h.selfadjointView<Eigen::Lower>();
}

namespace {

void check_program(const ConvexProgram& p) {
  if (!(p.norm_bound > 0.0)) throw DomainError("norm bound must be positive");
  if (const auto* w = std::get_if<WeightedLossObjective>(&p.objective)) {
    if (!w->loss.is_smooth()) {
      throw UnsupportedError("barrier solver needs a smooth objective (logistic or squared), got " +
                             std::string(to_string(w->loss.kind())));
    }
  }
  if (p.constraint && !p.constraint->loss.is_smooth()) {
    throw UnsupportedError("loss constraint must be smooth");
  }
}

// A weighted sample laid out as a dense n x d matrix, so margins for a whole
// Newton iteration or line-search trial are one matrix-vector product.
struct PackedLoss {
  LossFunction loss;
  Matrix x;
  Vector y;
  Vector c;

  PackedLoss(const LossFunction& l, std::span<const WeightedExample> examples, Eigen::Index dim)
      : loss(l), x(static_cast<Eigen::Index>(examples.size()), dim),
        y(static_cast<Eigen::Index>(examples.size())), c(static_cast<Eigen::Index>(examples.size())) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const auto& e = examples[static_cast<std::size_t>(i)];
      if (e.x.size() != dim) throw DomainError("example dimension does not match the program");
      x.row(i) = e.x.transpose();
      y[i] = e.y;
      c[i] = e.weight;
    }
  }

  double value(const Vector& margins) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) total += c[i] * loss.value(margins[i], y[i]);
    return total;
  }

  // Returns the value; adds scale * gradient and scale * Hessian into grad/hess.
  double accumulate(const Vector& margins, double scale, Vector& grad, Matrix& hess) const {
    double total = 0.0;
    Vector first(margins.size());
    Vector root_second(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      const auto d = loss.taylor(margins[i], y[i]);
      total += c[i] * d.value;
      first[i] = c[i] * d.first;
      root_second[i] = std::sqrt(std::max(0.0, c[i] * d.second));
    }
    grad.noalias() += scale * (x.transpose() * first);
    const Matrix scaled = root_second.asDiagonal() * x;
    hess.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose(), scale);
    return total;
  }
};

}  // namespace

double objective_value(const ConvexProgram& program, const Vector& u) {
  if (const auto* w = std::get_if<WeightedLossObjective>(&program.objective)) {
    return weighted_loss_value(w->loss, w->examples, u);
  }
  return u.dot(std::get<LinearObjective>(program.objective).direction);
}

bool strictly_feasible(const ConvexProgram& program, const Vector& u) {
  if (!(program.norm_bound - u.squaredNorm() > 0.0)) return false;
  if (!program.constraint) return true;
  const auto& c = *program.constraint;
  return c.bound - weighted_loss_value(c.loss, c.examples, u) > 0.0;
}

SolveResult solve(const ConvexProgram& program, const Vector& start) {
  check_program(program);
  if (static_cast<std::size_t>(start.size()) != program.dimension) {
    throw DomainError("start dimension does not match the program");
  }
  if (!strictly_feasible(program, start)) {
    throw DomainError("solver start is not strictly feasible");
  }

  const auto dim = start.size();
  std::optional<PackedLoss> objective_loss;
  Vector direction;
  if (const auto* w = std::get_if<WeightedLossObjective>(&program.objective)) {
    objective_loss.emplace(w->loss, w->examples, dim);
  } else {
    direction = std::get<LinearObjective>(program.objective).direction;
  }
  std::optional<PackedLoss> constraint_loss;
  double constraint_bound = 0.0;
  if (program.constraint) {
    constraint_loss.emplace(program.constraint->loss, program.constraint->examples, dim);
    constraint_bound = program.constraint->bound;
  }

  // t * f0(u) - log(B - ||u||^2) - log(bound - g(u)); +infinity off the interior.
  auto barrier_value = [&](const Vector& u, double t) {
    const double s1 = program.norm_bound - u.squaredNorm();
    if (!(s1 > 0.0)) return kInfinity;
    double f0 = objective_loss ? objective_loss->value(objective_loss->x * u) : direction.dot(u);
    double value = t * f0 - std::log(s1);
    if (constraint_loss) {
      const double s2 = constraint_bound - constraint_loss->value(constraint_loss->x * u);
      if (!(s2 > 0.0)) return kInfinity;
      value -= std::log(s2);
    }
    return value;
  };

  const auto& opt = program.options;
  const double m = program.constraint ? 2.0 : 1.0;
  SolverDiagnostics diag;
  Vector u = start;
  Vector grad(dim);
  Matrix hess(dim, dim);
  double t = opt.initial_barrier;

  for (std::size_t stage = 0; stage < opt.max_stages; ++stage) {
    bool centered = false;
    double current = barrier_value(u, t);
    for (std::size_t it = 0; it < opt.max_newton_iterations; ++it) {
      grad.setZero();
      hess.setZero();
      if (objective_loss) {
        objective_loss->accumulate(objective_loss->x * u, t, grad, hess);
      } else {
        grad = t * direction;
      }
      const double s1 = program.norm_bound - u.squaredNorm();
      grad += (2.0 / s1) * u;
      hess.selfadjointView<Eigen::Lower>().rankUpdate(u, 4.0 / (s1 * s1));
      hess.diagonal().array() += 2.0 / s1;
      if (constraint_loss) {
        Vector cg = Vector::Zero(dim);
        Matrix ch = Matrix::Zero(dim, dim);
        const double g = constraint_loss->accumulate(constraint_loss->x * u, 1.0, cg, ch);
        const double s2 = constraint_bound - g;
        grad += cg / s2;
        hess += ch / s2;
        hess.selfadjointView<Eigen::Lower>().rankUpdate(cg, 1.0 / (s2 * s2));
      }

      Eigen::LDLT<Matrix> ldlt(hess.selfadjointView<Eigen::Lower>());
      const Vector step = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        throw SolverError("Newton system is singular", u, diag);
      }
      const double slope = grad.dot(step);
      ++diag.newton_iterations;
      if (-slope / 2.0 <= opt.newton_tolerance) {
        centered = true;
        break;
      }

      double s = 1.0;
      Vector next = u + step;
      double next_value = barrier_value(next, t);
      while (!(next_value <= current + opt.line_search_alpha * s * slope) && s > 1e-30) {
        s *= opt.line_search_beta;
        next = u + s * step;
        next_value = barrier_value(next, t);
      }
      if (s <= 1e-30 || !(next_value < current)) {
        // No representable decrease left; the iterate is centered to precision.
        centered = true;
        break;
      }
      u = next;
      current = next_value;
    }
    if (!centered) {
      diag.final_gap = m / t;
      throw SolverError("centering did not converge within the Newton iteration cap", u, diag);
    }
    ++diag.stages;
    diag.stage_objectives.push_back(objective_value(program, u));
    diag.final_gap = m / t;
    if (m / t < opt.gap_tolerance) {
      return {u, objective_value(program, u), std::move(diag)};
    }
    t *= opt.barrier_growth;
  }
  throw SolverError("barrier schedule exhausted before reaching the gap target", u, diag);
}

SolveResult minimize_weighted_loss(const LossFunction& loss,
                                   std::span<const WeightedExample> examples,
                                   std::size_t dimension, double norm_bound,
                                   const SolverOptions& options) {
  ConvexProgram program{WeightedLossObjective{loss, examples}, dimension, norm_bound, std::nullopt,
                        options};
  if (examples.empty()) {
    return {Vector::Zero(static_cast<Eigen::Index>(dimension)), 0.0, {}};
  }
  return solve(program, Vector::Zero(static_cast<Eigen::Index>(dimension)));
}

SolveResult minimize_linear(const Vector& direction, double norm_bound,
                            const std::optional<LossConstraint>& constraint, const Vector& start,
                            const SolverOptions& options) {
  const auto dim = static_cast<std::size_t>(direction.size());
  const double length = direction.norm();
  if (length == 0.0) {
    SolveResult r{Vector::Zero(direction.size()), 0.0, {}};
    r.diagnostics.short_circuited = true;
    return r;
  }
  const Vector ball_optimum = (-std::sqrt(norm_bound) / length) * direction;
  const bool inactive =
      !constraint || !std::isfinite(constraint->bound) ||
      weighted_loss_value(constraint->loss, constraint->examples, ball_optimum) <= constraint->bound;
  if (inactive) {
    SolveResult r{ball_optimum, -std::sqrt(norm_bound) * length, {}};
    r.diagnostics.short_circuited = true;
    return r;
  }
  ConvexProgram program{LinearObjective{direction}, dim, norm_bound, constraint, options};
  return solve(program, start);
}

}  // namespace iwal
