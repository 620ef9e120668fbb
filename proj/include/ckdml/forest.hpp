#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "ckdml/rng.hpp"
#include "ckdml/tree.hpp"

namespace ckdml {

/// n draws with replacement from [0, n); one bootstrap resample.
inline std::vector<std::size_t> bootstrap_indices(Rng& rng, std::size_t n) {
  std::vector<std::size_t> idx;
  idx.reserve(n);
  for (std::size_t i = 0; i < n; ++i) idx.push_back(rng.below(n));
  return idx;
}

/// Random forest: bagged CART trees with per-split feature subsampling.
/// Tree i draws from its own stream seeded with mix_seed(seed, i), so trees
/// could be fitted concurrently without changing results. Prediction is a
/// majority vote; score is the fraction of trees voting class 1 and vote
/// ties (score exactly 0.5) go to label 0.
///
/// features_per_split 0 means ceil(sqrt(d)); bootstrap 0 is a test hook that
/// trains every tree on the full sample.
class RandomForest final : public Classifier {
 public:
  explicit RandomForest(Hyperparams hp = Hyperparams::defaults_for("random_forest"))
      : hp_(std::move(hp)) {}

  std::string_view name() const override { return "random_forest"; }
  bool score_is_probability() const override { return true; }

  const std::vector<std::unique_ptr<TreeNode>>& trees() const { return trees_; }

  json params() const override {
    json arr = json::array();
    for (const auto& t : trees_) arr.push_back(tree_to_json(*t));
    return {{"n_trees", trees_.size()}, {"trees", std::move(arr)}};
  }

 protected:
  void do_fit(const Dataset& train, std::uint64_t seed) override {
    const int n_trees = hp_.get_int("n_trees");
    if (n_trees < 1) throw ConfigError("random_forest: n_trees must be >= 1");
    const TreeParams params{hp_.get_int("max_depth"), hp_.get_int("min_samples_split"),
                            hp_.get_int("min_samples_leaf")};
    const bool bootstrap = hp_.get_int("bootstrap") != 0;
    const std::size_t d = train.dim();
    std::size_t m = static_cast<std::size_t>(hp_.get_int("features_per_split"));
    if (m == 0) m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    m = std::min(m, d);

    const std::vector<double> unit(train.n(), 1.0);
    std::vector<int> pool(d);
    std::iota(pool.begin(), pool.end(), 0);

    trees_.clear();
    trees_.reserve(n_trees);
    for (int i = 0; i < n_trees; ++i) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
      std::vector<std::size_t> rows;
      if (bootstrap) {
        rows = bootstrap_indices(rng, train.n());
      } else {
        rows.resize(train.n());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
      }
      // fresh feature subset at every node, examined in ascending order
      auto sampler = [&rng, &pool, m] {
        std::vector<int> features(pool);
        for (std::size_t j = 0; j < m; ++j) {
          std::swap(features[j], features[j + rng.below(features.size() - j)]);
        }
        features.resize(m);
        std::sort(features.begin(), features.end());
        return features;
      };
      trees_.push_back(detail::grow(train.features, train.labels, unit, rows, 0,
                                    params, sampler));
    }
  }

  double score_one(std::span<const double> x) const override {
    int votes = 0;
    for (const auto& t : trees_) {
      if (leaf_for(*t, x).prob1() >= 0.5) ++votes;
    }
    return static_cast<double>(votes) / static_cast<double>(trees_.size());
  }

  int predict_one(std::span<const double> x) const override {
    return score_one(x) > 0.5 ? 1 : 0;  // vote tie -> label 0
  }

 private:
  Hyperparams hp_;
  std::vector<std::unique_ptr<TreeNode>> trees_;
};

}  // namespace ckdml
