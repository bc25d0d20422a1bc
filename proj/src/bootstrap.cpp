#include "iwal/bootstrap.hpp"

#include <algorithm>

namespace iwal {

Committee train_committee(std::span<const LabeledExample> prefix, std::size_t k,
                          const TreeParams& params, Rng& rng, double p_min,
                          kernels::Execution exec) {
  if (prefix.empty()) throw DomainError("committee prefix is empty");
  if (k < 2) throw DomainError("committee needs at least two members");
  if (!(p_min > 0.0 && p_min <= 1.0)) throw DomainError("p_min must lie in (0, 1]");

  std::vector<std::uint64_t> seeds(k);
  for (auto& s : seeds) s = rng();

  auto member = [&](std::size_t i) {
    Rng local(seeds[i]);
    std::vector<LabeledExample> resample;
    resample.reserve(prefix.size());
    for (std::size_t n = 0; n < prefix.size(); ++n) {
      const auto pick = static_cast<std::size_t>(uniform01(local) * static_cast<double>(prefix.size()));
      resample.push_back(prefix[std::min(pick, prefix.size() - 1)]);
    }
    return DecisionTree::train(resample, params);
  };
  Committee committee;
  committee.p_min = p_min;
  committee.members = kernels::map_indexed<DecisionTree>(k, member, exec);
  return committee;
}

double p_bootstrap(const Vector& x, const Committee& committee, const LossFunction& loss) {
  std::vector<double> z;
  z.reserve(committee.members.size());
  for (const auto& tree : committee.members) z.push_back(loss.to_prediction(tree.predict(x)));
  const double spread = kernels::loss_spread(z, loss, kernels::Execution::serial);
  return std::min(1.0, committee.p_min + (1.0 - committee.p_min) * spread);
}

std::vector<LabeledExample> costing_resample(std::span<const WeightedExample> sample, Rng& rng) {
  double c_max = 0.0;
  for (const auto& e : sample) {
    if (!(e.weight > 0.0)) throw DomainError("costing needs positive importance weights");
    c_max = std::max(c_max, e.weight);
  }
  std::vector<LabeledExample> accepted;
  for (const auto& e : sample) {
    if (uniform01(rng) < e.weight / c_max) accepted.push_back({e.x, e.y});
  }
  return accepted;
}

DecisionTree train_final(std::span<const LabeledExample> resampled, const TreeParams& params,
                         std::span<const LabeledExample> fallback) {
  if (!resampled.empty()) return DecisionTree::train(resampled, params);
  return DecisionTree::leaf(fallback.empty() ? 1.0 : majority_label(fallback));
}

BootstrapThreshold::BootstrapThreshold(std::size_t prefix_size, CommitteeOptions options,
                                       LossFunction loss, std::uint64_t seed)
    : prefix_size_(prefix_size), options_(options), loss_(loss), rng_(seed) {
  if (prefix_size_ == 0) throw DomainError("bootstrap prefix must hold at least one example");
  if (options_.size < 2) throw DomainError("committee needs at least two members");
  if (!(options_.p_min > 0.0 && options_.p_min <= 1.0)) throw DomainError("p_min must lie in (0, 1]");
}

double BootstrapThreshold::probability(const Vector& x, const History&) {
  if (!committee_) return 1.0;
  return p_bootstrap(x, *committee_, loss_);
}

void BootstrapThreshold::observe(const Vector& x, double, std::optional<double> label) {
  if (committee_ || !label) return;
  prefix_.push_back({x, *label});
  if (prefix_.size() == prefix_size_) {
    committee_ = train_committee(prefix_, options_.size, options_.tree, rng_, options_.p_min);
  }
}

}  // namespace iwal
