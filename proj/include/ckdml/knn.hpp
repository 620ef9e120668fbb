#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "ckdml/model.hpp"

namespace ckdml {

/// k-nearest-neighbor classifier over Euclidean distance on the features as
/// given (no internal rescaling). The k smallest distances win, ties broken
/// by lower training-row index. score is the fraction of neighbors labeled 1;
/// predict is the majority label with split votes going to label 0.
class KnnClassifier final : public Classifier {
 public:
  explicit KnnClassifier(Hyperparams hp = Hyperparams::defaults_for("knn"))
      : hp_(std::move(hp)) {}

  std::string_view name() const override { return "knn"; }
  bool score_is_probability() const override { return true; }

  int k() const { return hp_.get_int("k"); }

  json params() const override {
    return {{"k", k()}, {"n_train", train_.rows()}};
  }

 protected:
  void do_fit(const Dataset& train, std::uint64_t /*seed*/) override {
    const int kk = k();
    if (kk < 1) throw ConfigError("knn: k must be >= 1");
    if (static_cast<std::size_t>(kk) > train.n()) {
      throw TrainError("knn: k=" + std::to_string(kk) + " exceeds " +
                       std::to_string(train.n()) + " training rows");
    }
    train_ = train.features;
    labels_ = train.labels;
  }

  double score_one(std::span<const double> x) const override {
    // squared distances order identically to Euclidean ones
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(train_.rows());
    for (std::size_t i = 0; i < train_.rows(); ++i) {
      const auto row = train_.row(i);
      double d2 = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) {
        const double diff = row[j] - x[j];
        d2 += diff * diff;
      }
      dist.emplace_back(d2, i);
    }
    const auto kk = static_cast<std::size_t>(k());
    std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
    int ones = 0;
    for (std::size_t i = 0; i < kk; ++i) ones += labels_[dist[i].second];
    return static_cast<double>(ones) / static_cast<double>(kk);
  }

  int predict_one(std::span<const double> x) const override {
    return score_one(x) > 0.5 ? 1 : 0;  // split vote -> label 0
  }

 private:
  Hyperparams hp_;
  Matrix train_;
  std::vector<int> labels_;
};

}  // namespace ckdml
