#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iwal/convex_solver.hpp"
#include "iwal/hypotheses.hpp"
#include "iwal/losses.hpp"
#include "iwal/random.hpp"
#include "iwal/types.hpp"

namespace iwal {

// What a rejection threshold may look at when choosing p_t.
struct History {
  std::size_t steps = 0;                    // t - 1 points seen before x_t
  std::span<const WeightedExample> sample;  // S_{t-1}
  const ErmResult* erm = nullptr;           // ERM over S_{t-1}, if the engine keeps one
};

/// The rejection-threshold subroutine: maps the current point and history to
/// a query probability p_t in [0, 1].
class RejectionThreshold {
 public:
  virtual ~RejectionThreshold() = default;

  virtual double probability(const Vector& x, const History& history) = 0;

  // Called once per step after the coin flip; `label` is set iff queried.
  virtual void observe(const Vector& /*x*/, double /*p*/, std::optional<double> /*label*/) {}

  virtual std::string name() const = 0;

  virtual SolverStats solver_stats() const { return {}; }
};

class ConstantThreshold final : public RejectionThreshold {
 public:
  explicit ConstantThreshold(double p) : p_(p) {}
  double probability(const Vector&, const History&) override { return p_; }
  std::string name() const override { return "constant"; }

 private:
  double p_;
};

struct StepRecord {
  std::size_t t = 0;  // 1-based
  double p = 0.0;
  bool queried = false;
  std::size_t cumulative_queries = 0;
  std::uint64_t x_digest = 0;
};

struct QueryTrace {
  std::vector<StepRecord> steps;

  std::size_t total_queries() const {
    return steps.empty() ? 0 : steps.back().cumulative_queries;
  }
};

// CSV with header t,p_t,q_t,cum_queries.
void write_trace_csv(const QueryTrace& trace, std::ostream& out);

std::uint64_t digest(const Vector& x);

struct EngineOptions {
  std::uint64_t seed = 0;
  double p_min = 0.0;         // floor applied to every p_t
  std::size_t erm_every = 1;  // recompute h_t every k steps (only when S changed)
  SolverOptions solver;
};

struct ErmProblem {
  HypothesisClass hypotheses;
  LossFunction loss;
};

using LabelOracle = std::function<double()>;

/// The importance-weighted active learning loop.
///
/// Each step asks the threshold for p_t, flips Q_t ~ Bernoulli(p_t) from the
/// seeded generator, consults the oracle only when Q_t = 1, stores
/// (x_t, y_t, 1/p_t) and refreshes the running ERM h_t.
class Engine {
 public:
  Engine(EngineOptions options, std::shared_ptr<RejectionThreshold> threshold,
         std::optional<ErmProblem> erm_problem = std::nullopt);

  const StepRecord& step(const Vector& x, const LabelOracle& oracle);

  // Recomputes h_t from the current sample if it is stale.
  void refresh_hypothesis();

  std::size_t steps() const noexcept { return trace_.steps.size(); }
  std::span<const WeightedExample> sample() const noexcept { return sample_; }
  const QueryTrace& trace() const noexcept { return trace_; }
  const std::optional<ErmResult>& erm() const noexcept { return erm_; }
  std::size_t oracle_calls() const noexcept { return oracle_calls_; }
  const RejectionThreshold& threshold() const noexcept { return *threshold_; }
  SolverStats solver_stats() const;

 private:
  EngineOptions options_;
  std::shared_ptr<RejectionThreshold> threshold_;
  std::optional<ErmProblem> erm_problem_;
  Rng rng_;
  std::vector<WeightedExample> sample_;
  QueryTrace trace_;
  std::optional<ErmResult> erm_;
  bool erm_stale_ = false;
  std::size_t oracle_calls_ = 0;
  std::vector<double> member_sums_;  // finite-class ERM accumulators
  SolverStats erm_stats_;
};

// One term of L_T(h): the step's p_t, Q_t and l(h(x_t), y_t).
struct ImportanceTerm {
  double p = 1.0;
  bool queried = false;
  double loss = 0.0;
};

/// L_T(h) = (1/T) sum_t (Q_t / p_t) l(h(x_t), y_t). Unqueried terms add
/// exactly 0; a queried term with p_t = 0 is an invalid trace.
double weighted_loss_estimate(std::span<const ImportanceTerm> terms, std::size_t horizon);

// Same estimator over a weighted sample S (weights already 1/p_t).
double weighted_loss_estimate(std::span<const WeightedExample> sample, const Hypothesis& h,
                              const LossFunction& loss, std::size_t horizon);

struct StreamResult {
  std::optional<Hypothesis> hypothesis;
  QueryTrace trace;
  std::vector<WeightedExample> sample;
  std::size_t oracle_calls = 0;
  SolverStats solver_stats;
};

// Runs the engine over a labeled stream; labels are revealed only on query.
StreamResult run_stream(const EngineOptions& options,
                        std::shared_ptr<RejectionThreshold> threshold,
                        std::optional<ErmProblem> erm_problem,
                        std::span<const LabeledExample> stream);

}  // namespace iwal
