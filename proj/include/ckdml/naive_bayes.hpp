#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ckdml/model.hpp"

namespace ckdml {

/// Gaussian naive Bayes. Class priors are class frequencies; every feature
/// gets a per-class Gaussian with population variance floored at 1e-9.
/// Scoring stays in log space and normalizes with log-sum-exp, so posteriors
/// never become NaN when densities underflow. score is the posterior of
/// class 1; predict thresholds at 0.5 with >= giving class 1.
class GaussianNb final : public Classifier {
 public:
  explicit GaussianNb(Hyperparams hp = Hyperparams::defaults_for("naive_bayes"))
      : hp_(std::move(hp)) {}

  std::string_view name() const override { return "naive_bayes"; }
  bool score_is_probability() const override { return true; }
  bool needs_both_classes() const override { return true; }

  std::span<const double> class_means(int cls) const { return mean_[cls]; }
  std::span<const double> class_variances(int cls) const { return var_[cls]; }
  double prior(int cls) const { return prior_[cls]; }

  json params() const override {
    return {{"priors", prior_},
            {"means", {mean_[0], mean_[1]}},
            {"variances", {var_[0], var_[1]}}};
  }

 protected:
  void do_fit(const Dataset& train, std::uint64_t /*seed*/) override {
    const std::size_t d = train.dim();
    std::array<std::size_t, 2> count = {0, 0};
    for (int c = 0; c < 2; ++c) {
      mean_[c].assign(d, 0.0);
      var_[c].assign(d, 0.0);
    }
    for (std::size_t i = 0; i < train.n(); ++i) {
      const int c = train.labels[i];
      ++count[c];
      for (std::size_t j = 0; j < d; ++j) mean_[c][j] += train.features(i, j);
    }
    for (int c = 0; c < 2; ++c) {
      for (std::size_t j = 0; j < d; ++j) mean_[c][j] /= static_cast<double>(count[c]);
    }
    for (std::size_t i = 0; i < train.n(); ++i) {
      const int c = train.labels[i];
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = train.features(i, j) - mean_[c][j];
        var_[c][j] += diff * diff;
      }
    }
    for (int c = 0; c < 2; ++c) {
      for (std::size_t j = 0; j < d; ++j) {
        var_[c][j] = std::max(var_[c][j] / static_cast<double>(count[c]), 1e-9);
      }
      prior_[c] = static_cast<double>(count[c]) / static_cast<double>(train.n());
    }
  }

  double score_one(std::span<const double> x) const override {
    std::array<double, 2> loglik;
    for (int c = 0; c < 2; ++c) {
      double ll = std::log(prior_[c]);
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double v = var_[c][j];
        const double diff = x[j] - mean_[c][j];
        constexpr double two_pi = 6.283185307179586476925286766559;
        ll += -0.5 * std::log(two_pi * v) - diff * diff / (2.0 * v);
      }
      loglik[c] = ll;
    }
    const double hi = std::max(loglik[0], loglik[1]);
    const double norm = hi + std::log(std::exp(loglik[0] - hi) + std::exp(loglik[1] - hi));
    return std::exp(loglik[1] - norm);
  }

 private:
  Hyperparams hp_;
  std::array<double, 2> prior_ = {0.0, 0.0};
  std::array<std::vector<double>, 2> mean_;
  std::array<std::vector<double>, 2> var_;
};

}  // namespace ckdml
