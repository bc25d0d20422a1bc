#include "iwal/engine.hpp"

#include <algorithm>
#include <cstring>
#include <ostream>
#include <sstream>

namespace iwal {

std::uint64_t digest(const Vector& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::uint64_t bits;
    const double v = x[i];
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

void write_trace_csv(const QueryTrace& trace, std::ostream& out) {
  out << "t,p_t,q_t,cum_queries\n";
  char buf[64];
  for (const auto& s : trace.steps) {
    std::snprintf(buf, sizeof buf, "%.17g", s.p);
    out << s.t << ',' << buf << ',' << (s.queried ? 1 : 0) << ',' << s.cumulative_queries << '\n';
  }
}

Engine::Engine(EngineOptions options, std::shared_ptr<RejectionThreshold> threshold,
               std::optional<ErmProblem> erm_problem)
    : options_(std::move(options)),
      threshold_(std::move(threshold)),
      erm_problem_(std::move(erm_problem)),
      rng_(options_.seed) {
  if (!threshold_) throw DomainError("engine needs a rejection threshold");
  if (!(options_.p_min >= 0.0 && options_.p_min <= 1.0)) throw DomainError("p_min must lie in [0, 1]");
  if (options_.erm_every == 0) throw DomainError("erm_every must be positive");
  if (erm_problem_) {
    if (const auto* finite = std::get_if<FiniteClass>(&erm_problem_->hypotheses)) {
      if (finite->members.empty()) throw DomainError("finite hypothesis class is empty");
      member_sums_.assign(finite->members.size(), 0.0);
    }
    erm_stale_ = true;
    refresh_hypothesis();
  }
}

void Engine::refresh_hypothesis() {
  if (!erm_problem_ || !erm_stale_) return;
  if (const auto* finite = std::get_if<FiniteClass>(&erm_problem_->hypotheses)) {
    const auto best = std::min_element(member_sums_.begin(), member_sums_.end());
    const auto index = static_cast<std::size_t>(best - member_sums_.begin());
    erm_ = ErmResult{finite->members[index], index, *best, {}};
  } else {
    erm_ = erm_linear(std::get<LinearBall>(erm_problem_->hypotheses), sample_, erm_problem_->loss,
                      options_.solver);
    erm_stats_.add(erm_->diagnostics);
  }
  erm_stale_ = false;
}

const StepRecord& Engine::step(const Vector& x, const LabelOracle& oracle) {
  const History history{trace_.steps.size(), sample_, erm_ ? &*erm_ : nullptr};
  double p = threshold_->probability(x, history);
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "rejection threshold '" << threshold_->name() << "' returned p = " << p
        << " outside [0, 1] at t = " << trace_.steps.size() + 1;
    throw ContractViolation(msg.str());
  }
  p = std::max(p, options_.p_min);

  // The coin is always flipped so the random stream advances once per step.
  const bool queried = bernoulli(rng_, p) && p > 0.0;
  std::optional<double> label;
  if (queried) {
    label = oracle();
    ++oracle_calls_;
    sample_.push_back({x, *label, 1.0 / p});
    if (erm_problem_) {
      if (const auto* finite = std::get_if<FiniteClass>(&erm_problem_->hypotheses)) {
        const auto& e = sample_.back();
        for (std::size_t i = 0; i < finite->members.size(); ++i) {
          member_sums_[i] += e.weight * loss_of(finite->members[i], e.x, e.y, erm_problem_->loss);
        }
      }
      erm_stale_ = true;
    }
  }
  threshold_->observe(x, p, label);

  StepRecord record;
  record.t = trace_.steps.size() + 1;
  record.p = p;
  record.queried = queried;
  record.cumulative_queries = trace_.total_queries() + (queried ? 1 : 0);
  record.x_digest = digest(x);
  trace_.steps.push_back(record);

  if (erm_stale_ && record.t % options_.erm_every == 0) refresh_hypothesis();
  return trace_.steps.back();
}

SolverStats Engine::solver_stats() const {
  SolverStats stats = erm_stats_;
  stats.merge(threshold_->solver_stats());
  return stats;
}

double weighted_loss_estimate(std::span<const ImportanceTerm> terms, std::size_t horizon) {
  if (horizon == 0) throw DomainError("horizon T must be at least 1");
  double total = 0.0;
  for (const auto& term : terms) {
    if (!term.queried) continue;
    if (!(term.p > 0.0)) throw ContractViolation("invalid trace: queried step with p_t = 0");
    total += term.loss / term.p;
  }
  return total / static_cast<double>(horizon);
}

double weighted_loss_estimate(std::span<const WeightedExample> sample, const Hypothesis& h,
                              const LossFunction& loss, std::size_t horizon) {
  if (horizon == 0) throw DomainError("horizon T must be at least 1");
  double total = 0.0;
  for (const auto& e : sample) total += e.weight * loss_of(h, e.x, e.y, loss);
  return total / static_cast<double>(horizon);
}

StreamResult run_stream(const EngineOptions& options,
                        std::shared_ptr<RejectionThreshold> threshold,
                        std::optional<ErmProblem> erm_problem,
                        std::span<const LabeledExample> stream) {
  if (stream.empty()) throw DomainError("data stream is empty");
  Engine engine(options, std::move(threshold), std::move(erm_problem));
  for (const auto& example : stream) {
    engine.step(example.x, [&example] { return example.y; });
  }
  engine.refresh_hypothesis();

  StreamResult result;
  if (engine.erm()) result.hypothesis = engine.erm()->hypothesis;
  result.trace = engine.trace();
  result.sample.assign(engine.sample().begin(), engine.sample().end());
  result.oracle_calls = engine.oracle_calls();
  result.solver_stats = engine.solver_stats();
  return result;
}

}  // namespace iwal
