#include "iwal/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iwal {
namespace {

double entropy(double pos, double total) {
  if (total <= 0.0 || pos <= 0.0 || pos >= total) return 0.0;
  const double p = pos / total, q = 1.0 - p;
  return -(p * std::log2(p) + q * std::log2(q));
}

}  // namespace

double majority_label(std::span<const LabeledExample> data) {
  std::size_t pos = 0;
  for (const auto& e : data) pos += e.y > 0.0 ? 1 : 0;
  return 2 * pos >= data.size() ? 1.0 : -1.0;
}

DecisionTree DecisionTree::leaf(double label) {
  DecisionTree tree;
  tree.nodes_.push_back(Node{-1, 0.0, -1, -1, label > 0.0 ? 1.0 : -1.0});
  return tree;
}

DecisionTree DecisionTree::train(std::span<const LabeledExample> data, const TreeParams& params) {
  if (data.empty()) throw DomainError("cannot train a tree on an empty set");
  if (params.min_leaf == 0) throw DomainError("min_leaf must be positive");
  const auto dim = data.front().x.size();
  for (const auto& e : data) {
    if (e.x.size() != dim) throw DomainError("inconsistent feature dimension in tree data");
  }
  DecisionTree tree;
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  tree.grow(data, idx, 0, idx.size(), 0, params);
  return tree;
}

std::size_t DecisionTree::grow(std::span<const LabeledExample> data, std::vector<std::size_t>& idx,
                               std::size_t begin, std::size_t end, std::size_t depth,
                               const TreeParams& params) {
  const std::size_t self = nodes_.size();
  nodes_.push_back(Node{});

  const std::size_t n = end - begin;
  std::size_t pos = 0;
  for (std::size_t i = begin; i < end; ++i) pos += data[idx[i]].y > 0.0 ? 1 : 0;
  nodes_[self].label = 2 * pos >= n ? 1.0 : -1.0;
  if (pos == 0 || pos == n || depth >= params.max_depth || n < 2 * params.min_leaf) return self;

  const double parent_entropy = entropy(static_cast<double>(pos), static_cast<double>(n));
  const auto dim = data[idx[begin]].x.size();
  double best_gain = -kInfinity;
  std::int64_t best_feature = -1;
  double best_threshold = 0.0;

  std::vector<std::size_t> order(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                 idx.begin() + static_cast<std::ptrdiff_t>(end));
  for (Eigen::Index f = 0; f < dim; ++f) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double xa = data[a].x[f], xb = data[b].x[f];
      return xa < xb || (xa == xb && a < b);
    });
    std::size_t left_pos = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      left_pos += data[order[k]].y > 0.0 ? 1 : 0;
      const std::size_t left_n = k + 1, right_n = n - left_n;
      const double here = data[order[k]].x[f], next = data[order[k + 1]].x[f];
      if (here == next || left_n < params.min_leaf || right_n < params.min_leaf) continue;
      const double child =
          (static_cast<double>(left_n) * entropy(static_cast<double>(left_pos), static_cast<double>(left_n)) +
           static_cast<double>(right_n) *
               entropy(static_cast<double>(pos - left_pos), static_cast<double>(right_n))) /
          static_cast<double>(n);
      const double gain = parent_entropy - child;
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best_feature = f;
        best_threshold = 0.5 * (here + next);
      }
    }
  }
  if (best_feature < 0) return self;

  const auto mid = std::stable_partition(
      idx.begin() + static_cast<std::ptrdiff_t>(begin), idx.begin() + static_cast<std::ptrdiff_t>(end),
      [&](std::size_t i) { return data[i].x[best_feature] <= best_threshold; });
  const auto split = static_cast<std::size_t>(mid - idx.begin());

  nodes_[self].feature = best_feature;
  nodes_[self].threshold = best_threshold;
  const std::size_t left = grow(data, idx, begin, split, depth + 1, params);
  const std::size_t right = grow(data, idx, split, end, depth + 1, params);
  nodes_[self].left = static_cast<std::int64_t>(left);
  nodes_[self].right = static_cast<std::int64_t>(right);
  return self;
}

double DecisionTree::predict(const Vector& x) const {
  std::size_t node = 0;
  while (nodes_[node].feature >= 0) {
    const auto& nd = nodes_[node];
    if (nd.feature >= x.size()) throw DomainError("tree split feature outside input dimension");
    node = static_cast<std::size_t>(x[nd.feature] <= nd.threshold ? nd.left : nd.right);
  }
  return nodes_[node].label;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

std::size_t DecisionTree::depth_of(std::size_t node) const {
  const auto& nd = nodes_[node];
  if (nd.feature < 0) return 0;
  return 1 + std::max(depth_of(static_cast<std::size_t>(nd.left)),
                      depth_of(static_cast<std::size_t>(nd.right)));
}

std::size_t DecisionTree::depth() const {
  return depth_of(0);
}

nlohmann::json DecisionTree::node_json(std::size_t node) const {
  const auto& nd = nodes_[node];
  if (nd.feature < 0) return {{"label", nd.label}};
  return {{"feature", nd.feature},
          {"threshold", nd.threshold},
          {"left", node_json(static_cast<std::size_t>(nd.left))},
          {"right", node_json(static_cast<std::size_t>(nd.right))}};
}

nlohmann::json DecisionTree::to_json() const {
  return node_json(0);
}

std::size_t DecisionTree::node_from_json(const nlohmann::json& j) {
  const std::size_t self = nodes_.size();
  nodes_.push_back(Node{});
  if (j.contains("label")) {
    nodes_[self].label = j.at("label").get<double>() > 0.0 ? 1.0 : -1.0;
    return self;
  }
  const auto feature = j.at("feature").get<std::int64_t>();
  if (feature < 0) throw DataError("tree JSON has a negative feature index");
  nodes_[self].feature = feature;
  nodes_[self].threshold = j.at("threshold").get<double>();
  const std::size_t left = node_from_json(j.at("left"));
  const std::size_t right = node_from_json(j.at("right"));
  nodes_[self].left = static_cast<std::int64_t>(left);
  nodes_[self].right = static_cast<std::int64_t>(right);
  return self;
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  DecisionTree tree;
  tree.node_from_json(j);
  return tree;
}

bool DecisionTree::operator==(const DecisionTree& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& a = nodes_[i];
    const auto& b = other.nodes_[i];
    // Internal nodes keep a majority label for bookkeeping only; it is not serialized.
    if (a.feature != b.feature || a.threshold != b.threshold || a.left != b.left ||
        a.right != b.right || (a.feature < 0 && a.label != b.label)) {
      return false;
    }
  }
  return true;
}

}  // namespace iwal
