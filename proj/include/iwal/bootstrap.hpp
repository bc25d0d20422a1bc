#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iwal/decision_tree.hpp"
#include "iwal/engine.hpp"
#include "iwal/kernels.hpp"
#include "iwal/losses.hpp"
#include "iwal/random.hpp"

namespace iwal {

struct CommitteeOptions {
  std::size_t size = 10;
  double p_min = 0.1;
  double initial_fraction = 0.1;
  TreeParams tree;
};

// Trees frozen after training on bootstrap resamples of the initial prefix.
struct Committee {
  std::vector<DecisionTree> members;
  double p_min = 0.1;
};

/// Trains k trees, each on a with-replacement resample of the prefix of the
/// same size. Member seeds are drawn from `rng` up front, so the committee
/// does not depend on how training is scheduled.
Committee train_committee(std::span<const LabeledExample> prefix, std::size_t k,
                          const TreeParams& params, Rng& rng, double p_min = 0.1,
                          kernels::Execution exec = kernels::Execution::parallel);

/// p_min + (1 - p_min) * max over members i, j and y of l(h_i(x), y) - l(h_j(x), y).
double p_bootstrap(const Vector& x, const Committee& committee, const LossFunction& loss);

/// Costing: accepts each example independently with probability c_i / c_max
/// and returns the accepted ones unweighted.
std::vector<LabeledExample> costing_resample(std::span<const WeightedExample> sample, Rng& rng);

// Tree on the unweighted set; an empty set falls back to a majority leaf on
// `fallback` (the labeled prefix).
DecisionTree train_final(std::span<const LabeledExample> resampled, const TreeParams& params,
                         std::span<const LabeledExample> fallback);

/// Queries the first `prefix_size` points with p = 1, then trains the
/// committee once and switches to p_bootstrap.
class BootstrapThreshold final : public RejectionThreshold {
 public:
  BootstrapThreshold(std::size_t prefix_size, CommitteeOptions options, LossFunction loss,
                     std::uint64_t seed);

  double probability(const Vector& x, const History& history) override;
  void observe(const Vector& x, double p, std::optional<double> label) override;
  std::string name() const override { return "bootstrap"; }

  const std::optional<Committee>& committee() const noexcept { return committee_; }
  const std::vector<LabeledExample>& prefix() const noexcept { return prefix_; }

 private:
  std::size_t prefix_size_;
  CommitteeOptions options_;
  LossFunction loss_;
  Rng rng_;
  std::vector<LabeledExample> prefix_;
  std::optional<Committee> committee_;
};

}  // namespace iwal
