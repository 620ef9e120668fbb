#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "ckdml/linear.hpp"
#include "ckdml/model.hpp"

namespace ckdml {

/// Regression tree node for boosting; leaves hold additive log-odds weights.
struct GbtNode {
  int feature = -1;
  double threshold = 0.0;
  std::unique_ptr<GbtNode> left;
  std::unique_ptr<GbtNode> right;
  double value = 0.0;

  bool is_leaf() const { return left == nullptr; }
};

inline double gbt_tree_value(const GbtNode& root, std::span<const double> x) {
  const GbtNode* node = &root;
  while (!node->is_leaf()) {
    node = x[node->feature] <= node->threshold ? node->left.get() : node->right.get();
  }
  return node->value;
}

inline json gbt_tree_to_json(const GbtNode& node) {
  if (node.is_leaf()) return {{"value", node.value}};
  return {{"feature", node.feature},
          {"threshold", node.threshold},
          {"left", gbt_tree_to_json(*node.left)},
          {"right", gbt_tree_to_json(*node.right)}};
}

/// Gradient-boosted trees on the logistic loss with second-order split gain.
/// Per round, with p = sigmoid(F): gradients g = p - y, hessians h = p(1-p);
/// the round's regression tree greedily maximizes
///   gain = [GL^2/(HL+lambda) + GR^2/(HR+lambda) - (GL+GR)^2/(HL+HR+lambda)]/2 - gamma
/// (G, H are node sums of g, h) with the same candidate-threshold and
/// tie-break rules as CART; leaf weight is -G/(H+lambda). The model is
/// F(x) = base_score + sum eta * tree_m(x) with base_score the log-odds of
/// the training positive rate. score is sigmoid(F); predict >= 0.5 is class 1.
class GradientBoosting final : public Classifier {
 public:
  explicit GradientBoosting(Hyperparams hp = Hyperparams::defaults_for("gradient_boosting"))
      : hp_(std::move(hp)) {}

  std::string_view name() const override { return "gradient_boosting"; }
  bool score_is_probability() const override { return true; }

  const std::vector<std::unique_ptr<GbtNode>>& trees() const { return trees_; }
  double base_score() const { return base_score_; }
  double learning_rate() const { return hp_.get("learning_rate"); }

  json params() const override {
    json arr = json::array();
    for (const auto& t : trees_) arr.push_back(gbt_tree_to_json(*t));
    return {{"base_score", base_score_},
            {"learning_rate", hp_.get("learning_rate")},
            {"trees", std::move(arr)}};
  }

 protected:
  void do_fit(const Dataset& train, std::uint64_t /*seed*/) override {
    const int rounds = hp_.get_int("rounds");
    const double eta = hp_.get("learning_rate");
    const int max_depth = hp_.get_int("max_depth");
    const double lambda = hp_.get("l2_lambda");
    const double gamma = hp_.get("gamma");
    const std::size_t n = train.n();

    double rate = 0.0;
    for (const int y : train.labels) rate += y;
    rate = std::clamp(rate / static_cast<double>(n), 1e-12, 1.0 - 1e-12);
    base_score_ = std::log(rate / (1.0 - rate));

    std::vector<double> F(n, base_score_);
    std::vector<double> g(n), h(n);
    trees_.clear();
    trees_.reserve(rounds);
    for (int r = 0; r < rounds; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(F[i]);
        g[i] = p - static_cast<double>(train.labels[i]);
        h[i] = p * (1.0 - p);
      }
      std::vector<std::size_t> rows(n);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      auto tree = grow(train.features, g, h, rows, 0, max_depth, lambda, gamma);
      for (std::size_t i = 0; i < n; ++i) {
        F[i] += eta * gbt_tree_value(*tree, train.features.row(i));
        if (!std::isfinite(F[i])) {
          throw TrainError("gradient_boosting: model output diverged");
        }
      }
      trees_.push_back(std::move(tree));
    }
  }

  double score_one(std::span<const double> x) const override {
    double F = base_score_;
    const double eta = hp_.get("learning_rate");
    for (const auto& t : trees_) F += eta * gbt_tree_value(*t, x);
    return sigmoid(F);
  }

 private:
  struct GbtSplit {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;  // only splits with gain > 0 are taken
  };

  static GbtSplit best_split(const Matrix& X, std::span<const double> g,
                             std::span<const double> h,
                             std::span<const std::size_t> rows, double lambda,
                             double gamma) {
    double G = 0.0, H = 0.0;
    for (const std::size_t r : rows) {
      G += g[r];
      H += h[r];
    }
    const double parent_score = G * G / (H + lambda);

    GbtSplit best;
    std::vector<std::pair<double, std::size_t>> vals;
    vals.reserve(rows.size());
    for (int f = 0; f < static_cast<int>(X.cols()); ++f) {
      vals.clear();
      for (const std::size_t r : rows) vals.emplace_back(X(r, f), r);
      std::sort(vals.begin(), vals.end());

      double GL = 0.0, HL = 0.0;
      for (std::size_t i = 1; i < vals.size(); ++i) {
        const std::size_t r = vals[i - 1].second;
        GL += g[r];
        HL += h[r];
        if (vals[i].first <= vals[i - 1].first) continue;
        const double GR = G - GL;
        const double HR = H - HL;
        const double gain =
            0.5 * (GL * GL / (HL + lambda) + GR * GR / (HR + lambda) - parent_score) -
            gamma;
        if (gain > best.gain) {
          best.feature = f;
          best.threshold = (vals[i - 1].first + vals[i].first) / 2.0;
          best.gain = gain;
        }
      }
    }
    return best;
  }

  static std::unique_ptr<GbtNode> grow(const Matrix& X, std::span<const double> g,
                                       std::span<const double> h,
                                       std::vector<std::size_t>& rows, int depth,
                                       int max_depth, double lambda, double gamma) {
    auto node = std::make_unique<GbtNode>();
    if (depth >= max_depth || rows.size() < 2) {
      node->value = leaf_value(g, h, rows, lambda);
      return node;
    }
    const GbtSplit split = best_split(X, g, h, rows, lambda, gamma);
    if (split.feature < 0) {
      node->value = leaf_value(g, h, rows, lambda);
      return node;
    }
    std::vector<std::size_t> left_rows, right_rows;
    for (const std::size_t r : rows) {
      (X(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    node->feature = split.feature;
    node->threshold = split.threshold;
    node->left = grow(X, g, h, left_rows, depth + 1, max_depth, lambda, gamma);
    node->right = grow(X, g, h, right_rows, depth + 1, max_depth, lambda, gamma);
    return node;
  }

  static double leaf_value(std::span<const double> g, std::span<const double> h,
                           std::span<const std::size_t> rows, double lambda) {
    double G = 0.0, H = 0.0;
    for (const std::size_t r : rows) {
      G += g[r];
      H += h[r];
    }
    return -G / (H + lambda);
  }

  Hyperparams hp_;
  double base_score_ = 0.0;
  std::vector<std::unique_ptr<GbtNode>> trees_;
};

}  // namespace ckdml
