#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "ckdml/model.hpp"

namespace ckdml {

/// Gini impurity 1 - p0^2 - p1^2 of a two-class count pair; 0 for pure nodes,
/// 0.5 at a perfect split. Counts may be fractional (sample weights).
inline double gini(double count0, double count1) {
  const double total = count0 + count1;
  if (total <= 0.0) throw DataError("gini: both counts are zero");
  const double p0 = count0 / total;
  const double p1 = count1 / total;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct TreeParams {
  int max_depth = 8;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
};

/// Binary CART node. Internal nodes route x[feature] <= threshold to the
/// left child. Every node keeps its (weighted) training label counts; leaves
/// predict count1/(count0+count1).
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  double count0 = 0.0;
  double count1 = 0.0;

  bool is_leaf() const { return left == nullptr; }
  double prob1() const { return count1 / (count0 + count1); }
};

/// Route a point to its leaf.
inline const TreeNode& leaf_for(const TreeNode& root, std::span<const double> x) {
  const TreeNode* node = &root;
  while (!node->is_leaf()) {
    node = x[node->feature] <= node->threshold ? node->left.get() : node->right.get();
  }
  return *node;
}

inline json tree_to_json(const TreeNode& node) {
  if (node.is_leaf()) {
    return {{"count0", node.count0}, {"count1", node.count1}};
  }
  return {{"feature", node.feature},
          {"threshold", node.threshold},
          {"left", tree_to_json(*node.left)},
          {"right", tree_to_json(*node.right)},
          {"count0", node.count0},
          {"count1", node.count1}};
}

namespace detail {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double decrease = -1.0;  // weighted Gini decrease; < 0 means no candidate

  bool found() const { return feature >= 0; }
};

/// Exhaustive best split over the given candidate features. Thresholds are
/// midpoints between consecutive distinct sorted values. Ties are broken by
/// lower feature index, then smaller threshold (candidates are scanned in
/// that order and replaced only on strict improvement).
inline SplitChoice best_split(const Matrix& X, std::span<const int> y,
                              std::span<const double> w,
                              std::span<const std::size_t> rows,
                              std::span<const int> features,
                              int min_samples_leaf) {
  double parent0 = 0.0, parent1 = 0.0;
  for (const std::size_t r : rows) {
    (y[r] == 0 ? parent0 : parent1) += w[r];
  }
  const double parent_gini = gini(parent0, parent1);
  const double total_w = parent0 + parent1;

  SplitChoice best;
  std::vector<std::pair<double, std::size_t>> vals;
  vals.reserve(rows.size());
  for (const int f : features) {
    vals.clear();
    for (const std::size_t r : rows) vals.emplace_back(X(r, f), r);
    std::sort(vals.begin(), vals.end());

    double left0 = 0.0, left1 = 0.0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
      const std::size_t r = vals[i - 1].second;
      (y[r] == 0 ? left0 : left1) += w[r];
      if (vals[i].first <= vals[i - 1].first) continue;  // not a distinct-value boundary
      if (i < static_cast<std::size_t>(min_samples_leaf) ||
          vals.size() - i < static_cast<std::size_t>(min_samples_leaf)) {
        continue;
      }
      const double right0 = parent0 - left0;
      const double right1 = parent1 - left1;
      const double lw = left0 + left1;
      const double rw = right0 + right1;
      if (lw <= 0.0 || rw <= 0.0) continue;  // all weight on one side
      const double decrease =
          parent_gini -
          (lw * gini(left0, left1) + rw * gini(right0, right1)) / total_w;
      if (decrease > best.decrease) {
        best.feature = f;
        best.threshold = (vals[i - 1].first + vals[i].first) / 2.0;
        best.decrease = decrease;
      }
    }
  }
  return best;
}

/// Per-node candidate feature provider; the forest plugs in a seeded sampler.
using FeatureSampler = std::function<std::vector<int>()>;

inline std::unique_ptr<TreeNode> grow(const Matrix& X, std::span<const int> y,
                                      std::span<const double> w,
                                      std::vector<std::size_t>& rows, int depth,
                                      const TreeParams& params,
                                      const FeatureSampler& sample_features) {
  auto node = std::make_unique<TreeNode>();
  for (const std::size_t r : rows) {
    (y[r] == 0 ? node->count0 : node->count1) += w[r];
  }

  const bool pure = node->count0 == 0.0 || node->count1 == 0.0;
  if (pure || depth >= params.max_depth ||
      rows.size() < static_cast<std::size_t>(params.min_samples_split)) {
    return node;
  }

  const std::vector<int> features = sample_features();
  const SplitChoice split =
      best_split(X, y, w, rows, features, params.min_samples_leaf);
  if (!split.found()) return node;  // no legal candidate threshold

  std::vector<std::size_t> left_rows, right_rows;
  for (const std::size_t r : rows) {
    (X(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  node->feature = split.feature;
  node->threshold = split.threshold;
  node->left = grow(X, y, w, left_rows, depth + 1, params, sample_features);
  node->right = grow(X, y, w, right_rows, depth + 1, params, sample_features);
  return node;
}

}  // namespace detail

/// Grow a CART tree by greedy recursive splitting on weighted Gini decrease.
/// Optional per-row weights (used by boosting) default to 1.
inline std::unique_ptr<TreeNode> fit_tree(const Dataset& train, const TreeParams& params,
                                          std::span<const double> weights = {}) {
  std::vector<double> unit;
  if (weights.empty()) {
    unit.assign(train.n(), 1.0);
    weights = unit;
  } else {
    if (weights.size() != train.n()) {
      throw TrainError("decision_tree: weight vector length mismatch");
    }
    bool any = false;
    for (const double wi : weights) {
      if (wi < 0.0) throw TrainError("decision_tree: negative sample weight");
      if (wi > 0.0) any = true;
    }
    if (!any) throw TrainError("decision_tree: all sample weights are zero");
  }

  std::vector<int> all_features(train.dim());
  std::iota(all_features.begin(), all_features.end(), 0);
  std::vector<std::size_t> rows(train.n());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return detail::grow(train.features, train.labels, weights, rows, 0, params,
                      [&all_features] { return all_features; });
}

/// Single CART decision tree behind the classifier contract. score is the
/// leaf's class-1 proportion; predict thresholds at 0.5 with >= giving 1.
class DecisionTree final : public Classifier {
 public:
  explicit DecisionTree(Hyperparams hp = Hyperparams::defaults_for("decision_tree"))
      : hp_(std::move(hp)) {}

  std::string_view name() const override { return "decision_tree"; }
  bool score_is_probability() const override { return true; }

  const TreeNode& root() const { return *root_; }

  json params() const override { return tree_to_json(*root_); }

 protected:
  void do_fit(const Dataset& train, std::uint64_t /*seed*/) override {
    TreeParams params{hp_.get_int("max_depth"), hp_.get_int("min_samples_split"),
                      hp_.get_int("min_samples_leaf")};
    root_ = fit_tree(train, params);
  }

  double score_one(std::span<const double> x) const override {
    return leaf_for(*root_, x).prob1();
  }

 private:
  Hyperparams hp_;
  std::unique_ptr<TreeNode> root_;
};

}  // namespace ckdml
