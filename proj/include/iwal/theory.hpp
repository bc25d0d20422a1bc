#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "iwal/hypotheses.hpp"
#include "iwal/kernels.hpp"
#include "iwal/losses.hpp"
#include "iwal/random.hpp"
#include "iwal/types.hpp"

namespace iwal {

struct LabelOutcome {
  double label = 1.0;
  double probability = 1.0;
};

struct Atom {
  Vector x;
  double mass = 0.0;
  std::vector<LabelOutcome> labels;
};

// Finitely supported distribution over X x Y.
struct FiniteInstance {
  std::vector<Atom> atoms;
  std::optional<Hypothesis> optimal;  // h*, when known
  double optimal_loss = 0.0;          // L(h*) under the instance's intended loss
};

// x uniform on the unit sphere in R^d, y = sign(hidden . x) flipped w.p. noise.
struct SphereInstance {
  std::size_t dimension = 2;
  double noise = 0.0;
  Vector hidden;

  LabeledExample sample(Rng& rng) const;
};

using TheoryInstance = std::variant<FiniteInstance, SphereInstance>;

// Throws DomainError unless masses sum to 1 (1e-12) and label laws are valid.
void validate(const FiniteInstance& instance);

LabeledExample sample(const FiniteInstance& instance, Rng& rng);
std::vector<LabeledExample> draw(const TheoryInstance& instance, std::size_t n, Rng& rng);

// L(h) by enumeration.
double expected_loss(const Hypothesis& h, const FiniteInstance& instance, const LossFunction& loss);

/// rho(f, g) = E_x max_y |l(f(x), y) - l(g(x), y)|, exact on a finite instance.
double rho(const Hypothesis& f, const Hypothesis& g, const FiniteInstance& instance,
           const LossFunction& loss);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

// Monte-Carlo rho over x draws.
MonteCarloEstimate rho(const Hypothesis& f, const Hypothesis& g, std::span<const Vector> draws,
                       const LossFunction& loss);

/// rho(h, h*) <= K_l (L(h) + L*). Vacuously true when K_l is infinite.
bool rho_upper_check(const Hypothesis& h, const Hypothesis& h_star, const LossFunction& loss,
                     const FiniteInstance& instance);

struct ThetaRow {
  double r = 0.0;
  std::size_t ball_size = 0;
  std::optional<double> theta;  // empty when the ball sample is empty
};

struct DisagreementEstimate {
  std::vector<ThetaRow> rows;
  double sup = 0.0;
  std::vector<std::string> warnings;
};

/// theta(r) = E_x sup_{h in B(h*, r)} sup_y |l(h(x), y) - l(h*(x), y)| / r,
/// with the ball taken over a finite hypothesis sample and rho measured on the
/// same weighted points. A finite sample of the ball gives a lower estimate of
/// the true coefficient.
DisagreementEstimate disagreement_coefficient(const Hypothesis& h_star,
                                              std::span<const Hypothesis> hypotheses,
                                              std::span<const Vector> points,
                                              std::span<const double> weights,
                                              std::span<const double> r_grid,
                                              const LossFunction& loss,
                                              kernels::Execution exec = kernels::Execution::parallel);

// Linear hypotheses around `center`: each is center + r * v with v a uniform
// unit direction and r log-uniform on [min_radius, max_radius], projected
// back onto the ball ||w||^2 <= norm_bound. The center itself comes first
// and counts toward `count`.
std::vector<Hypothesis> perturbation_sample(const Vector& center, std::size_t count,
                                            double norm_bound, double min_radius,
                                            double max_radius, Rng& rng);

// Monte-Carlo version with uniform weights; needs at least 1000 draws.
DisagreementEstimate estimate_disagreement_coefficient(
    const Hypothesis& h_star, std::span<const Hypothesis> hypotheses, std::span<const Vector> draws,
    std::span<const double> r_grid, const LossFunction& loss,
    kernels::Execution exec = kernels::Execution::parallel);

// Exact version over the atoms of a finite instance.
DisagreementEstimate disagreement_coefficient_exact(const Hypothesis& h_star,
                                                    std::span<const Hypothesis> hypotheses,
                                                    const FiniteInstance& instance,
                                                    std::span<const double> r_grid,
                                                    const LossFunction& loss);

struct SphereThetaProbe {
  DisagreementEstimate estimate;
  double bound = 0.0;  // (2 C1 / C0) sqrt(d) for the logistic loss used
};

/// theta estimate on a uniform-sphere instance with the logistic loss and the
/// linear class ||w||^2 <= norm_bound. h* is sqrt(norm_bound) times the hidden
/// direction; the ball is sampled by perturbation_sample around it, with radii
/// from r_grid.front() / 10 up to the diameter of the class.
SphereThetaProbe sphere_theta_probe(std::size_t dimension, double noise, double norm_bound,
                                    std::size_t hypotheses, std::size_t budget,
                                    std::span<const double> r_grid, std::uint64_t seed);

/// sqrt(2) / p_min * sqrt((ln |H| + ln(2 / delta)) / T)
double safety_bound(double p_min, double class_size, double delta, std::size_t horizon);

// 4 theta K_l (L* T + sqrt(T ln(|H| T / delta))), split into its two terms.
// The hidden constant of the sublinear term is taken as 1.
struct LabelComplexityBound {
  double linear_term = 0.0;
  double sublinear_term = 0.0;
  double total() const { return linear_term + sublinear_term; }
};

LabelComplexityBound label_complexity_bound(double theta, double slope_asymmetry,
                                            double optimal_loss, std::size_t horizon,
                                            double class_size, double delta);

// sum_{t=1..T} min(1, 4 theta K_l (L* + Delta_{t-1})): the per-step bound on
// E[p_t] summed over the run, with Delta_0 = +infinity.
double per_step_label_bound(double theta, double slope_asymmetry, double optimal_loss,
                            std::size_t horizon, double class_size, double delta,
                            double slack_constant = 8.0);

struct LowerBoundInstance {
  FiniteInstance instance;
  double eta = 0.0;
  double epsilon = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::vector<int> bits;  // b_1 .. b_{d-1}
};

/// d atoms e_0 .. e_{d-1}: e_0 has mass 1 - beta and label +1; e_i has mass
/// beta / (d - 1) and P(y = +1) = 1/2 + gamma b_i, with beta = 2(eta + 2 eps)
/// and gamma = 2 eps / beta. h* = sign(e_0 + sum b_i e_i) has error eta.
LowerBoundInstance lower_bound_instance(std::size_t atoms, double eta, double epsilon, Rng& rng);

/// Origin with mass 1 - beta and label +1; e_1 with mass beta and response
/// -1 or 0 with equal probability (squared loss, ||w|| <= 1).
FiniteInstance point_mass_instance(double beta, std::size_t dimension);

SphereInstance sphere_instance(std::size_t dimension, double noise, Rng& rng);

}  // namespace iwal
