#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "iwal/types.hpp"

namespace iwal {

struct TreeParams {
  std::size_t max_depth = 8;
  std::size_t min_leaf = 2;
};

/// Binary classification tree with axis-aligned splits (x[f] <= threshold goes
/// left), grown greedily by information gain.
///
/// Impure nodes split on the best available threshold even at zero gain,
/// which lets XOR-like patterns resolve at depth 2. Splits leaving fewer than
/// min_leaf points on a side are not considered. Leaf labels are the majority
/// label, ties going to +1.
class DecisionTree {
 public:
  static DecisionTree train(std::span<const LabeledExample> data, const TreeParams& params);
  static DecisionTree leaf(double label);

  double predict(const Vector& x) const;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t leaf_count() const;
  std::size_t depth() const;

  // {"label": y} for leaves, {"feature", "threshold", "left", "right"} otherwise.
  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

  bool operator==(const DecisionTree& other) const;

 private:
  struct Node {
    std::int64_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int64_t left = -1;
    std::int64_t right = -1;
    double label = 1.0;
  };

  std::size_t grow(std::span<const LabeledExample> data, std::vector<std::size_t>& idx,
                   std::size_t begin, std::size_t end, std::size_t depth, const TreeParams& params);
  nlohmann::json node_json(std::size_t node) const;
  std::size_t node_from_json(const nlohmann::json& j);
  std::size_t depth_of(std::size_t node) const;

  std::vector<Node> nodes_;
};

// Majority label of a labeled set, ties going to +1.
double majority_label(std::span<const LabeledExample> data);

}  // namespace iwal
