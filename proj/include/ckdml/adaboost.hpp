#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ckdml/tree.hpp"

namespace ckdml {

/// Discrete AdaBoost over depth-1 weighted CART stumps. Per round: weighted
/// error e, vote alpha = ln((1-e)/e)/2, weight update w *= exp(-alpha*yt*h)
/// with labels and stump outputs in {-1,+1}, then renormalization. A round
/// with e >= 0.5 discards its stump and stops; e <= 1e-10 keeps the stump
/// (alpha computed with e clamped) and stops. score is the signed vote sum;
/// predict is its sign with margin 0 going to label 0.
class AdaBoost final : public Classifier {
 public:
  explicit AdaBoost(Hyperparams hp = Hyperparams::defaults_for("adaboost"))
      : hp_(std::move(hp)) {}

  std::string_view name() const override { return "adaboost"; }
  bool score_is_probability() const override { return false; }

  const std::vector<std::unique_ptr<TreeNode>>& stumps() const { return stumps_; }
  const std::vector<double>& alphas() const { return alphas_; }

  json params() const override {
    json arr = json::array();
    for (const auto& s : stumps_) arr.push_back(tree_to_json(*s));
    return {{"alphas", alphas_}, {"stumps", std::move(arr)}};
  }

 protected:
  void do_fit(const Dataset& train, std::uint64_t /*seed*/) override {
    const int rounds = hp_.get_int("rounds");
    if (rounds < 1) throw ConfigError("adaboost: rounds must be >= 1");
    const std::size_t n = train.n();
    const TreeParams stump_params{1, 2, 1};

    stumps_.clear();
    alphas_.clear();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (int r = 0; r < rounds; ++r) {
      auto stump = fit_tree(train, stump_params, w);
      double eps = 0.0;
      std::vector<int> h(n);
      for (std::size_t i = 0; i < n; ++i) {
        h[i] = leaf_for(*stump, train.features.row(i)).prob1() >= 0.5 ? 1 : 0;
        if (h[i] != train.labels[i]) eps += w[i];
      }
      if (eps >= 0.5) {
        if (stumps_.empty()) {
          throw TrainError("adaboost: first stump has weighted error >= 0.5");
        }
        break;  // discard this stump
      }
      const double e = std::max(eps, 1e-12);
      const double alpha = 0.5 * std::log((1.0 - e) / e);
      stumps_.push_back(std::move(stump));
      alphas_.push_back(alpha);
      if (eps <= 1e-10) break;

      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double yt = train.labels[i] == 1 ? 1.0 : -1.0;
        const double ht = h[i] == 1 ? 1.0 : -1.0;
        w[i] *= std::exp(-alpha * yt * ht);
        sum += w[i];
      }
      for (double& wi : w) wi /= sum;
    }
  }

  double score_one(std::span<const double> x) const override {
    double margin = 0.0;
    for (std::size_t m = 0; m < stumps_.size(); ++m) {
      const double ht = leaf_for(*stumps_[m], x).prob1() >= 0.5 ? 1.0 : -1.0;
      margin += alphas_[m] * ht;
    }
    return margin;
  }

  int predict_one(std::span<const double> x) const override {
    return score_one(x) > 0.0 ? 1 : 0;  // zero margin -> label 0
  }

 private:
  Hyperparams hp_;
  std::vector<std::unique_ptr<TreeNode>> stumps_;
  std::vector<double> alphas_;
};

}  // namespace ckdml
